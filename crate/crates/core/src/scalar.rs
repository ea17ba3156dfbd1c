//! Exact rational scalars with p-adic valuation.
//!
//! Every series and matrix coefficient in the crate is a [`Scalar`]. The
//! coefficient field is `Q`, seen inside `Q_p` via [`valuation`]; no
//! extension of `Q_p` is modelled.

use alloc::string::ToString;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// An exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(BigRational::from_integer(n))
    }

    /// `num / den`, reduced. Fails on a zero denominator.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(num, den)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc *= self;
        }
        acc
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `"a"` or `"a/b"` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseScalar(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Scalar::from_bigint(t.parse::<BigInt>().map_err(|_| bad())?)),
            Some((a, b)) => {
                let num = a.trim().parse::<BigInt>().map_err(|_| bad())?;
                let den = b.trim().parse::<BigInt>().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Scalar::new(num, den)
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
        impl $assign_tr<&Scalar> for Scalar {
            fn $assign(&mut self, rhs: &Scalar) {
                self.0 = (&self.0).$method(&rhs.0);
            }
        }
        impl $assign_tr<Scalar> for Scalar {
            fn $assign(&mut self, rhs: Scalar) {
                self.0 = (&self.0).$method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl core::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

/// A prime `p`, checked at construction by trial division.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    big: BigInt,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeContext { p, big: BigInt::from(p) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.big
    }

    /// `p^m` as a big integer.
    pub fn power(&self, m: u32) -> BigInt {
        num_traits::pow(self.big.clone(), m as usize)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic valuation: an integer, or `+inf` for zero.
///
/// `Finite(_) < Infinite`, and finite values compare as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Compares against an integer threshold; `+inf` is above everything.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Multiplicity of `p` in a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut n = n.abs();
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exact p-adic valuation of a rational; `+inf` iff `x == 0`.
pub fn valuation(x: &Scalar, ctx: &PrimeContext) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = ctx.p_big();
    Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
}

/// Image of a p-integral rational under `Z_(p) -> Z/p^m`, as a residue in
/// `[0, p^m)`.
pub fn reduce_mod(x: &Scalar, ctx: &PrimeContext, m: u32) -> Result<BigUint> {
    let modulus = ctx.power(m);
    if (x.denom() % ctx.p_big()).is_zero() {
        return Err(Error::NonIntegral(x.to_string()));
    }
    let den_inv = mod_inverse(x.denom(), &modulus).ok_or_else(|| Error::NonIntegral(x.to_string()))?;
    let r = (x.numer() * den_inv).mod_floor(&modulus);
    Ok(r.to_biguint().expect("mod_floor is nonnegative"))
}

pub(crate) fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(n).extended_gcd(n);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(n))
}

/// `sum_{i>=1} floor(j / p^i)`.
pub fn legendre_sum(j: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = j;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// Sum of base-`p` digits of `j`.
pub fn digit_sum(j: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut q = j;
    while q > 0 {
        s += q % p;
        q /= p;
    }
    s
}

/// `val_p(j!)`, evaluated both by Legendre's sum and by `(j - s_p(j))/(p-1)`.
///
/// The two must agree; a disagreement is a bug and panics.
pub fn factorial_valuation(j: u64, ctx: &PrimeContext) -> u64 {
    let p = ctx.p();
    let by_sum = legendre_sum(j, p);
    let by_digits = (j - digit_sum(j, p)) / (p - 1);
    assert_eq!(by_sum, by_digits, "Legendre formulas disagree at j={j}, p={p}");
    by_sum
}

impl Scalar {
    /// Sign of the scalar: `-1`, `0` or `1`.
    pub fn signum(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&Scalar::from_int(18), &ctx(3)), Valuation::Finite(2));
        assert_eq!(valuation(&Scalar::ratio(1, 2), &ctx(2)), Valuation::Finite(-1));
        assert_eq!(valuation(&Scalar::zero(), &ctx(7)), Valuation::Infinite);
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(reduce_mod(&Scalar::ratio(1, 2), &ctx(3), 2).unwrap(), BigUint::from(5u32));
        assert_eq!(reduce_mod(&Scalar::from_int(9), &ctx(3), 2).unwrap(), BigUint::from(0u32));
        assert!(matches!(reduce_mod(&Scalar::ratio(1, 3), &ctx(3), 1), Err(Error::NonIntegral(_))));
        assert_eq!(reduce_mod(&Scalar::from_int(-1), &ctx(5), 1).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn factorial_valuation_examples() {
        assert_eq!(factorial_valuation(10, &ctx(2)), 8);
        assert_eq!(factorial_valuation(0, &ctx(5)), 0);
        assert_eq!(factorial_valuation(81, &ctx(3)), 40);
    }

    #[test]
    fn factorial_formulas_agree() {
        for p in [2, 3, 5, 7] {
            let c = ctx(p);
            for j in 0..=10_000 {
                factorial_valuation(j, &c);
            }
        }
    }

    #[test]
    fn non_primes_rejected() {
        for n in [0, 1, 4, 9, 15, 91] {
            assert_eq!(PrimeContext::new(n), Err(Error::NotPrime(n)));
        }
        assert!(PrimeContext::new(97).is_ok());
    }

    #[test]
    fn display_and_parse() {
        let x: Scalar = "-6/4".parse().unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert_eq!("0/5".parse::<Scalar>().unwrap().to_string(), "0");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (-2000i64..2000, 1i64..2000).prop_map(|(a, b)| Scalar::ratio(a, b))
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        prop::sample::select(alloc::vec![2u64, 3, 5, 7, 11, 13])
    }

    proptest! {
        #[test]
        fn valuation_is_multiplicative_and_ultrametric(x in rational(), y in rational(), p in small_prime()) {
            let c = ctx(p);
            let (vx, vy) = (valuation(&x, &c), valuation(&y, &c));
            prop_assert_eq!(valuation(&(&x * &y), &c), vx + vy);
            let vs = valuation(&(&x + &y), &c);
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn reduction_is_a_ring_map(a in -5000i64..5000, b in 1i64..300, c in -5000i64..5000, d in 1i64..300,
                                   p in small_prime(), m in 1u32..4) {
            let cx = ctx(p);
            prop_assume!(!(b as u64).is_multiple_of(p) && !(d as u64).is_multiple_of(p));
            let x = Scalar::ratio(a, b);
            let y = Scalar::ratio(c, d);
            let n = cx.power(m).to_biguint().unwrap();
            let (rx, ry) = (reduce_mod(&x, &cx, m).unwrap(), reduce_mod(&y, &cx, m).unwrap());
            prop_assert_eq!(reduce_mod(&(&x + &y), &cx, m).unwrap(), (&rx + &ry) % &n);
            prop_assert_eq!(reduce_mod(&(&x * &y), &cx, m).unwrap(), (&rx * &ry) % &n);
        }

        #[test]
        fn parse_display_roundtrip(x in rational()) {
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
}
