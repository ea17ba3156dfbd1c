use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::bgamma::Level;
use super::complex::{Component, EquivariantCochain, EquivariantComplex, GradedComplex};
use super::intmat::IntMatrix;
use crate::{Error, Result};

/// Largest total dimension of `B` accepted by [`tensor_power`].
pub const MAX_TENSOR_BASE: usize = 3;
/// Largest number of tensor factors `p^m` accepted by [`tensor_power`].
pub const MAX_TENSOR_POWER: u64 = 9;

/// `B` flattened into one basis, each vector tagged with its degree.
struct FlatBasis {
    degrees: Vec<i64>,
    /// `d[to][from]` in the flat basis.
    d: Vec<Vec<BigInt>>,
    /// Flat index of the first basis vector of each degree.
    starts: Vec<usize>,
}

impl FlatBasis {
    fn new(b: &GradedComplex) -> Self {
        let mut degrees = Vec::new();
        let mut starts = Vec::new();
        for q in b.degrees() {
            starts.push(degrees.len());
            degrees.extend(core::iter::repeat_n(q, b.dim(q)));
        }
        let n = degrees.len();
        let mut d = vec![vec![BigInt::zero(); n]; n];
        for (k, q) in b.degrees().enumerate() {
            if q == b.max_degree() {
                continue;
            }
            let m = b.differential(q);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    d[starts[k + 1] + r][starts[k] + c] = m.get(r, c).clone();
                }
            }
        }
        FlatBasis { degrees, d, starts }
    }
}

/// Tuples of flat indices, grouped by total degree.
struct TupleIndex {
    base: usize,
    factors: usize,
    /// For each tuple code, its total degree and position inside that degree.
    place: Vec<(i64, usize)>,
    /// For each degree (from `min_degree`), the codes in basis order.
    by_degree: Vec<Vec<usize>>,
}

impl TupleIndex {
    fn new(flat: &FlatBasis, factors: usize, min_degree: i64, max_degree: i64) -> Self {
        let base = flat.degrees.len();
        let total = base.pow(factors as u32);
        let mut by_degree = vec![Vec::new(); (max_degree - min_degree + 1) as usize];
        let mut place = Vec::with_capacity(total);
        for code in 0..total {
            let deg: i64 = digits(code, base, factors).iter().map(|&k| flat.degrees[k]).sum();
            let slot = &mut by_degree[(deg - min_degree) as usize];
            place.push((deg, slot.len()));
            slot.push(code);
        }
        TupleIndex { base, factors, place, by_degree }
    }

    fn encode(&self, ks: &[usize]) -> usize {
        ks.iter().fold(0, |acc, &k| acc * self.base + k)
    }
}

/// Most significant digit first.
fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

/// `B^(x) p^m` with `Z/p^m` acting by cyclic permutation,
/// `sigma(x1 (x) ... (x) xn) = (-1)^(|x1|(|x2|+...+|xn|)) x2 (x) ... (x) xn (x) x1`.
///
/// Basis vectors of `(B^(x)n)^D` are tuples of basis vectors of `B` (all
/// degrees concatenated) in lexicographic order.
pub fn tensor_power(b: &GradedComplex, level: Level) -> Result<EquivariantComplex> {
    let n = level.order_u64().filter(|&n| n <= MAX_TENSOR_POWER).ok_or_else(|| {
        Error::CapExceeded(format!("p^m = {} exceeds the limit of {MAX_TENSOR_POWER} tensor factors", level.order()))
    })? as usize;
    if b.total_dim() > MAX_TENSOR_BASE {
        return Err(Error::CapExceeded(format!("dim B = {} exceeds the limit of {MAX_TENSOR_BASE}", b.total_dim())));
    }
    if b.total_dim() == 0 {
        return Err(Error::MalformedComplex("B is zero".into()));
    }
    let flat = FlatBasis::new(b);
    let lo = n as i64 * b.min_degree();
    let hi = n as i64 * b.max_degree();
    let index = TupleIndex::new(&flat, n, lo, hi);
    let dims: Vec<usize> = index.by_degree.iter().map(Vec::len).collect();
    let mut differentials: Vec<IntMatrix> = (lo..hi)
        .map(|deg| IntMatrix::zeros(dims[(deg + 1 - lo) as usize], dims[(deg - lo) as usize]))
        .collect();
    let mut sigma: Vec<IntMatrix> = dims.iter().map(|&k| IntMatrix::zeros(k, k)).collect();
    for code in 0..index.place.len() {
        let (deg, col) = index.place[code];
        let ks = digits(code, index.base, index.factors);
        // differential, Koszul sign from the factors passed over
        let mut passed = 0i64;
        for pos in 0..n {
            let from = ks[pos];
            for (to, coeff) in flat.d.iter().map(|row| &row[from]).enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut target = ks.clone();
                target[pos] = to;
                let (_, row) = index.place[index.encode(&target)];
                let c = if passed % 2 == 0 { coeff.clone() } else { -coeff };
                let m = &mut differentials[(deg - lo) as usize];
                let v = m.get(row, col) + c;
                m.set(row, col, v);
            }
            passed += flat.degrees[from];
        }
        let mut rotated = ks[1..].to_vec();
        rotated.push(ks[0]);
        let (_, row) = index.place[index.encode(&rotated)];
        let first = flat.degrees[ks[0]];
        let sign = if (first * (deg - first)) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        sigma[(deg - lo) as usize].set(row, col, sign);
    }
    EquivariantComplex::new(GradedComplex::new(lo, dims, differentials)?, level, sigma)
}

/// The equivariant cocycle `t^0 b^(x)p^m` of total degree `p^m |b|`,
/// together with the complex it lives in.
pub fn tensor_power_class(b_complex: &GradedComplex, b: &[BigInt], degree: i64, level: Level) -> Result<(EquivariantComplex, EquivariantCochain)> {
    if degree % 2 != 0 {
        return Err(Error::OddDegree(degree));
    }
    if b.len() != b_complex.dim(degree) {
        return Err(Error::SizeMismatch { expected: b_complex.dim(degree), found: b.len() });
    }
    if !b_complex.is_cocycle(degree, b) {
        return Err(Error::NotACocycle);
    }
    let power = tensor_power(b_complex, level)?;
    let n = level.order_u64().expect("checked by tensor_power") as usize;
    let total = n as i64 * degree;
    let flat = FlatBasis::new(b_complex);
    let offset = flat.starts[(degree - b_complex.min_degree()) as usize];
    let lo = power.complex().min_degree();
    let hi = power.complex().max_degree();
    let index = TupleIndex::new(&flat, n, lo, hi);
    let mut v = vec![BigInt::zero(); power.complex().dim(total)];
    // every tuple drawn from the degree-|b| block
    let k = b.len();
    for code in 0..k.pow(n as u32) {
        let local = digits(code, k, n);
        let coeff: BigInt = local.iter().map(|&j| &b[j]).product();
        if coeff.is_zero() {
            continue;
        }
        let ks: Vec<usize> = local.iter().map(|&j| offset + j).collect();
        let (deg, pos) = index.place[index.encode(&ks)];
        debug_assert_eq!(deg, total);
        v[pos] = coeff;
    }
    let mut out = EquivariantCochain::zero(total);
    if v.iter().any(|c| !c.is_zero()) {
        out.add_part(&power, Component { i: 0, theta: false, q: total }, v)?;
    }
    debug_assert!(out.is_cocycle(&power));
    Ok((power, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn level(p: u64, m: u32) -> Level {
        Level::new(p, m).unwrap()
    }

    #[test]
    fn zero_class() {
        let b = GradedComplex::concentrated(0, 2);
        let (_, x) = tensor_power_class(&b, &[BigInt::zero(), BigInt::zero()], 0, level(2, 1)).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn degree_zero_with_trivial_differential() {
        let b = GradedComplex::concentrated(0, 1);
        for c in 0..6i64 {
            let l = level(2, 2);
            let (v, x) = tensor_power_class(&b, &[BigInt::from(c)], 0, l).unwrap();
            assert_eq!(x.part(&Component { i: 0, theta: false, q: 0 }).map(|v| v[0].clone()).unwrap_or_default(), BigInt::from(c.pow(4)));
            // H^0 is the invariants, free of rank one, so the class vanishes only with b
            assert_eq!(x.is_coboundary(&v), c == 0);
        }
    }

    #[test]
    fn errors() {
        let b = GradedComplex::new(0, vec![1, 1], vec![IntMatrix::from_i64(&[&[2]])]).unwrap();
        assert_eq!(tensor_power_class(&b, &[BigInt::one()], 1, level(2, 1)).unwrap_err(), Error::OddDegree(1));
        assert_eq!(tensor_power_class(&b, &[BigInt::one()], 0, level(2, 1)).unwrap_err(), Error::NotACocycle);
        assert!(matches!(tensor_power(&b, level(2, 4)), Err(Error::CapExceeded(_))));
        assert!(matches!(tensor_power(&GradedComplex::concentrated(0, 4), level(2, 1)), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn koszul_signs_on_odd_factors() {
        let b = GradedComplex::concentrated(1, 1);
        let v = tensor_power(&b, level(2, 1)).unwrap();
        // x (x) x with |x| = 1 picks up -1 under the swap
        assert_eq!(v.sigma(2), IntMatrix::from_i64(&[&[-1]]));
        let v = tensor_power(&b, level(3, 1)).unwrap();
        assert_eq!(v.sigma(3), IntMatrix::identity(1));
    }

    /// `B` in degrees `q-1, q` with `dim <= 2`, random differential.
    fn random_base(rng: &mut ChaCha8Rng) -> (GradedComplex, i64) {
        let q = [0i64, 2][rng.gen_range(0..2)];
        let d = IntMatrix::from_fn(1, 1, |_, _| BigInt::from(rng.gen_range(-3..=3)));
        (GradedComplex::new(q - 1, vec![1, 1], vec![d]).unwrap(), q)
    }

    #[test]
    fn class_depends_only_on_cohomology_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, m) in [(2, 1), (2, 2), (3, 1)] {
            let l = level(p, m);
            for _ in 0..10 {
                let (b_complex, q) = random_base(&mut rng);
                let b = vec![BigInt::from(rng.gen_range(-3..=3))];
                let beta = vec![BigInt::from(rng.gen_range(-3..=3))];
                let shifted: Vec<BigInt> = b.iter().zip(b_complex.differential(q - 1).mul_vec(&beta)).map(|(x, y)| x + y).collect();
                let (v, x) = tensor_power_class(&b_complex, &b, q, l).unwrap();
                let (_, y) = tensor_power_class(&b_complex, &shifted, q, l).unwrap();
                assert!(x.cohomologous(&y, &v).unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn tensor_power_is_an_equivariant_complex(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = [vec![1, 2], vec![2, 1], vec![1, 1, 1]][rng.gen_range(0..3)].clone();
            let ds: Vec<IntMatrix> = dims
                .windows(2)
                .map(|w| IntMatrix::from_fn(w[1], w[0], |_, _| BigInt::from(rng.gen_range(-2..=2))))
                .collect();
            // keep d^2 = 0 by zeroing the second map when needed
            let ds = if ds.len() == 2 && !ds[1].mul(&ds[0]).is_zero() { vec![ds[0].clone(), IntMatrix::zeros(1, 1)] } else { ds };
            let b = GradedComplex::new(rng.gen_range(-1..=1), dims, ds).unwrap();
            let l = [level(2, 1), level(2, 2), level(3, 1)][rng.gen_range(0..3)];
            // construction validates d^2 = 0, sigma d = d sigma and sigma^(p^m) = 1
            prop_assert!(tensor_power(&b, l).is_ok());
        }
    }
}
