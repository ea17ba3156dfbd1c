use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ModuleDescription;
use crate::scalar::is_prime;
use crate::{Error, Result};

/// The group `Z/p^m`, `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    p: u64,
    m: u32,
}

impl Level {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::PreconditionViolated("the exponent m must be at least 1".into()));
        }
        Ok(Level { p, m })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn m(self) -> u32 {
        self.m
    }

    /// `p^m`.
    pub fn order(self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.m as usize)
    }

    /// `p^m` as a machine integer, when it fits.
    pub fn order_u64(self) -> Option<u64> {
        self.p.checked_pow(self.m)
    }

    /// `p^m (p^m - 1) / 2`, the number of pairs `0 <= r < s < p^m`.
    pub fn pair_count(self) -> BigInt {
        let n = self.order();
        (&n * (&n - 1u32)) / 2u32
    }

    /// The subgroup one level down.
    pub fn below(self) -> Option<Level> {
        (self.m > 1).then(|| Level { p: self.p, m: self.m - 1 })
    }

    pub fn above(self) -> Level {
        Level { p: self.p, m: self.m + 1 }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.m)
    }
}

/// An integer cochain of `B(Z/p^m)`: degree `2i` holds the coefficient of
/// `t^i`, degree `2i + 1` that of `t^i theta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BGammaCochain {
    level: Level,
    coeffs: BTreeMap<i64, BigInt>,
}

impl BGammaCochain {
    pub fn zero(level: Level) -> Self {
        BGammaCochain { level, coeffs: BTreeMap::new() }
    }

    pub fn monomial(level: Level, degree: i64, c: impl Into<BigInt>) -> Result<Self> {
        if degree < 0 {
            return Err(Error::PreconditionViolated(format!("negative degree {degree}")));
        }
        let mut out = Self::zero(level);
        out.add_term(degree, c.into());
        Ok(out)
    }

    /// `t^i`.
    pub fn t(level: Level, i: i64) -> Self {
        Self::monomial(level, 2 * i, 1).expect("nonnegative degree")
    }

    /// `t^i theta`.
    pub fn t_theta(level: Level, i: i64) -> Self {
        Self::monomial(level, 2 * i + 1, 1).expect("nonnegative degree")
    }

    pub fn level(&self) -> Level {
        self.level
    }

    fn add_term(&mut self, degree: i64, c: BigInt) {
        let e = self.coeffs.entry(degree).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn coeff(&self, degree: i64) -> BigInt {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_level(self.level, other.level)?;
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.level);
        for (d, a) in self.terms() {
            out.add_term(d, a * c);
        }
        out
    }

    /// `d(t^i) = 0`, `d(t^i theta) = p^m t^(i+1)`.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.level);
        let pm = self.level.order();
        for (d, c) in self.terms() {
            if d % 2 == 1 {
                out.add_term(d + 1, c * &pm);
            }
        }
        out
    }

    pub fn is_cocycle(&self) -> bool {
        self.differential().is_zero()
    }

    /// Cohomology class of a cocycle: the integer in degree 0 and residues
    /// mod `p^m` in positive even degrees (zero residues omitted).
    pub fn class(&self) -> Result<BTreeMap<i64, BigInt>> {
        if !self.is_cocycle() {
            return Err(Error::NotACocycle);
        }
        let pm = self.level.order();
        Ok(self
            .terms()
            .filter_map(|(d, c)| {
                let r = if d == 0 { c.clone() } else { c.mod_floor(&pm) };
                (!r.is_zero()).then_some((d, r))
            })
            .collect())
    }
}

fn same_level(a: Level, b: Level) -> Result<()> {
    if a != b {
        return Err(Error::PreconditionViolated(format!("cochains live over {a} and {b}")));
    }
    Ok(())
}

/// Chain-level cup product.
///
/// ```text
/// t^j       x t^k       -> t^(j+k)
/// t^j theta x t^k       -> t^(j+k) theta
/// t^j       x t^k theta -> t^(j+k) theta
/// t^j theta x t^k theta -> p^m (p^m - 1)/2 t^(j+k+1)
/// ```
pub fn bgamma_cup(a: &BGammaCochain, b: &BGammaCochain) -> Result<BGammaCochain> {
    same_level(a.level, b.level)?;
    let n = a.level.pair_count();
    let mut out = BGammaCochain::zero(a.level);
    for (da, ca) in a.terms() {
        for (db, cb) in b.terms() {
            let c = ca * cb;
            if da % 2 == 1 && db % 2 == 1 {
                out.add_term(da + db, c * &n);
            } else {
                out.add_term(da + db, c);
            }
        }
    }
    Ok(out)
}

/// Restriction from `Z/p^(m+1)` to `Z/p^m`: `t^i -> t^i`, `t^i theta -> p t^i theta`.
pub fn bgamma_restrict(a: &BGammaCochain) -> Result<BGammaCochain> {
    let below = a
        .level
        .below()
        .ok_or_else(|| Error::PreconditionViolated(format!("cannot restrict below {}", a.level)))?;
    let p = BigInt::from(a.level.p);
    let mut out = BGammaCochain::zero(below);
    for (d, c) in a.terms() {
        out.add_term(d, if d % 2 == 1 { c * &p } else { c.clone() });
    }
    Ok(out)
}

/// `H^n(B(Z/p^m))` for each `n` in `degrees`, from the cochain complex
/// `R -0-> R -p^m-> R -0-> R -p^m-> ...`.
pub fn bgamma_cohomology(level: Level, degrees: RangeInclusive<i64>) -> Vec<(i64, ModuleDescription)> {
    let pm = level.order();
    // multiplier of the differential leaving degree n
    let d = |n: i64| if n >= 0 && n % 2 == 1 { pm.clone() } else { BigInt::zero() };
    degrees
        .map(|n| {
            let module = if n < 0 || !d(n).is_zero() {
                ModuleDescription::zero()
            } else {
                let incoming = d(n - 1);
                if incoming.is_zero() {
                    ModuleDescription::free(1)
                } else {
                    ModuleDescription::cyclic(incoming)
                }
            };
            (n, module)
        })
        .collect()
}

impl BGammaCochain {
    /// Whether `self - other` is a coboundary.
    pub fn cohomologous(&self, other: &Self) -> Result<bool> {
        same_level(self.level, other.level)?;
        let diff = self.add(&other.scale(&-BigInt::one()))?;
        let pm = self.level.order();
        let ok = diff.terms().all(|(d, c)| d > 0 && d % 2 == 0 && c.is_multiple_of(&pm));
        Ok(ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(p: u64, m: u32) -> Level {
        Level::new(p, m).unwrap()
    }

    #[test]
    fn cohomology_table() {
        let got: Vec<_> = bgamma_cohomology(level(3, 2), 0..=5).into_iter().map(|(_, m)| m).collect();
        let nine = ModuleDescription::cyclic(BigInt::from(9));
        assert_eq!(
            got,
            alloc::vec![ModuleDescription::free(1), ModuleDescription::zero(), nine.clone(), ModuleDescription::zero(), nine, ModuleDescription::zero()]
        );
        assert_eq!(bgamma_cohomology(level(2, 1), 2..=2)[0].1, ModuleDescription::cyclic(BigInt::from(2)));
        assert!(bgamma_cohomology(level(2, 1), -1..=-1)[0].1.is_zero());
    }

    #[test]
    fn cup_rules() {
        let l = level(5, 1);
        assert_eq!(bgamma_cup(&BGammaCochain::t(l, 1), &BGammaCochain::t(l, 2)).unwrap(), BGammaCochain::t(l, 3));
        assert_eq!(bgamma_cup(&BGammaCochain::t_theta(l, 1), &BGammaCochain::t(l, 2)).unwrap(), BGammaCochain::t_theta(l, 3));
        assert_eq!(bgamma_cup(&BGammaCochain::t(l, 0), &BGammaCochain::t_theta(l, 2)).unwrap(), BGammaCochain::t_theta(l, 2));
        for (p, m, n) in [(2, 1, 1), (2, 2, 6), (3, 1, 3)] {
            let l = level(p, m);
            let theta = BGammaCochain::t_theta(l, 0);
            let sq = bgamma_cup(&theta, &theta).unwrap();
            assert_eq!(sq, BGammaCochain::monomial(l, 2, n).unwrap());
        }
    }

    #[test]
    fn theta_squared_mod_p_to_the_m() {
        for (p, m) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)] {
            let l = level(p, m);
            let theta = BGammaCochain::t_theta(l, 0);
            let c = bgamma_cup(&theta, &theta).unwrap().coeff(2).mod_floor(&l.order());
            let expected = if p == 2 { BigInt::from(1u64 << (m - 1)) } else { BigInt::zero() };
            assert_eq!(c, expected, "p={p} m={m}");
        }
    }

    #[test]
    fn restriction() {
        let l = level(3, 2);
        let down = l.below().unwrap();
        assert_eq!(bgamma_restrict(&BGammaCochain::t(l, 1)).unwrap(), BGammaCochain::t(down, 1));
        assert_eq!(bgamma_restrict(&BGammaCochain::t(l, 0)).unwrap(), BGammaCochain::t(down, 0));
        assert_eq!(bgamma_restrict(&BGammaCochain::t_theta(l, 1)).unwrap(), BGammaCochain::monomial(down, 3, 3).unwrap());
        assert!(bgamma_restrict(&BGammaCochain::t(down, 0)).is_err());
    }

    fn generators(l: Level, max_degree: i64) -> Vec<BGammaCochain> {
        (0..=max_degree).map(|d| BGammaCochain::monomial(l, d, 1).unwrap()).collect()
    }

    #[test]
    fn restriction_is_a_chain_map_and_multiplicative() {
        for (p, m) in [(2, 2), (2, 3), (3, 2)] {
            let l = level(p, m);
            for a in generators(l, 8) {
                let lhs = bgamma_restrict(&a.differential()).unwrap();
                let rhs = bgamma_restrict(&a).unwrap().differential();
                assert_eq!(lhs, rhs);
                for b in generators(l, 8) {
                    let both_odd = a.terms().chain(b.terms()).all(|(d, _)| d % 2 == 1);
                    let lhs = bgamma_restrict(&bgamma_cup(&a, &b).unwrap()).unwrap();
                    let rhs = bgamma_cup(&bgamma_restrict(&a).unwrap(), &bgamma_restrict(&b).unwrap()).unwrap();
                    if both_odd {
                        assert!(lhs.cohomologous(&rhs).unwrap());
                    } else {
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn cup_is_associative_and_commutative_mod_p_to_the_m() {
        // with Z/p^m coefficients every generator is a cocycle and nothing
        // but zero is a coboundary, so classes are coefficients mod p^m
        for (p, m) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let l = level(p, m);
            let pm = l.order();
            let reduce = |x: &BGammaCochain| -> Vec<(i64, BigInt)> {
                x.terms().map(|(d, c)| (d, c.mod_floor(&pm))).filter(|(_, c)| !c.is_zero()).collect()
            };
            let gens = generators(l, 8);
            for (da, a) in gens.iter().enumerate() {
                for (db, b) in gens.iter().enumerate() {
                    let ab = bgamma_cup(a, b).unwrap();
                    let sign = if da * db % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    assert_eq!(reduce(&ab), reduce(&bgamma_cup(b, a).unwrap().scale(&sign)));
                    for c in &gens {
                        let left = bgamma_cup(&ab, c).unwrap();
                        let right = bgamma_cup(a, &bgamma_cup(b, c).unwrap()).unwrap();
                        assert_eq!(reduce(&left), reduce(&right));
                    }
                }
            }
        }
    }
}
