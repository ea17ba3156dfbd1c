use alloc::vec::Vec;

use crate::poly::{characteristic_polynomial, rational_roots, Poly};
use crate::scalar::valuation;
use crate::{Error, Matrix, PrimeContext, Result, Scalar, Valuation};

/// `lambda_i - lambda_j` with its p-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenDifference {
    pub i: usize,
    pub j: usize,
    pub difference: Scalar,
    pub valuation: Valuation,
}

impl EigenDifference {
    pub fn is_unit(&self) -> bool {
        self.valuation == Valuation::Finite(0)
    }
}

/// Spectrum of a scalar matrix with its generalized eigenprojectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub eigenvalues: Vec<Scalar>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<Matrix>,
    /// One entry per pair `i < j`.
    pub differences: Vec<EigenDifference>,
}

impl EigenData {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn all_differences_units(&self) -> bool {
        self.differences.iter().all(EigenDifference::is_unit)
    }
}

/// Eigenvalues, multiplicities and projectors `e_lambda = f_lambda(A0)`.
///
/// `f_lambda` is `1` modulo `(x - lambda)^m_lambda` and `0` modulo every
/// other primary factor of the characteristic polynomial.
pub fn generalized_eigenprojectors(a0: &Matrix, ctx: &PrimeContext) -> Result<EigenData> {
    if !a0.is_square() {
        return Err(Error::SizeMismatch { expected: a0.rows(), found: a0.cols() });
    }
    let n = a0.rows();
    let roots = rational_roots(&characteristic_polynomial(a0))?;
    let mut projectors = Vec::with_capacity(roots.len());
    for (idx, (lambda, m)) in roots.iter().enumerate() {
        let g = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .fold(Poly::one(), |acc, (_, (mu, mm))| acc.mul(&Poly::linear(mu).pow(*mm)));
        // Invert g modulo (x - lambda)^m through its Taylor expansion at lambda.
        let b = g.taylor_shift(lambda);
        let b0_inv = b[0].recip()?;
        let mut u: Vec<Scalar> = Vec::with_capacity(*m);
        u.push(b0_inv.clone());
        for s in 1..*m {
            let acc: Scalar = (1..=s).filter(|&i| i < b.len()).map(|i| &b[i] * &u[s - i]).sum();
            u.push(-(acc * &b0_inv));
        }
        let shift = Poly::linear(lambda);
        let h = u
            .iter()
            .enumerate()
            .fold(Poly::new(Vec::new()), |acc, (s, c)| add_poly(&acc, &shift.pow(s).mul(&Poly::new(alloc::vec![c.clone()]))));
        projectors.push(g.mul(&h).eval_matrix(a0));
    }
    let eigenvalues: Vec<Scalar> = roots.iter().map(|(l, _)| l.clone()).collect();
    let multiplicities: Vec<usize> = roots.iter().map(|(_, m)| *m).collect();
    let mut differences = Vec::new();
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            let d = &eigenvalues[i] - &eigenvalues[j];
            differences.push(EigenDifference { i, j, valuation: valuation(&d, ctx), difference: d });
        }
    }
    let data = EigenData { eigenvalues, multiplicities, projectors, differences };
    check_invariants(&data, a0, n);
    Ok(data)
}

fn add_poly(a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs().len().max(b.coeffs().len());
    let get = |p: &Poly, i: usize| p.coeffs().get(i).cloned().unwrap_or_else(Scalar::zero);
    Poly::new((0..n).map(|i| get(a, i) + get(b, i)).collect())
}

fn check_invariants(data: &EigenData, a0: &Matrix, n: usize) {
    assert_eq!(data.multiplicities.iter().sum::<usize>(), n);
    let mut total = Matrix::zeros(n, n);
    for (i, e) in data.projectors.iter().enumerate() {
        total.add_assign(e);
        assert!(e.commutator(a0).is_zero());
        for (j, f) in data.projectors.iter().enumerate() {
            let prod = e.mul(f);
            if i == j {
                assert_eq!(&prod, e);
                assert_eq!(e.trace(), Scalar::from_int(data.multiplicities[i] as i64));
            } else {
                assert!(prod.is_zero());
            }
        }
    }
    assert_eq!(total, Matrix::identity(n));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn two_by_two() {
        let a = Matrix::from_i64(&[&[0, 2], &[2, 0]]);
        let d = generalized_eigenprojectors(&a, &ctx(3)).unwrap();
        assert_eq!(d.eigenvalues, alloc::vec![Scalar::from_int(-2), Scalar::from_int(2)]);
        let half = Scalar::ratio(1, 2);
        let quarter = Scalar::ratio(1, 4);
        let plus = Matrix::identity(2).scale(&half).add(&a.scale(&quarter));
        let minus = Matrix::identity(2).scale(&half).sub(&a.scale(&quarter));
        assert_eq!(d.projectors, alloc::vec![minus, plus]);
        assert!(d.all_differences_units());
        // the difference 4 is not a 2-adic unit
        assert!(!generalized_eigenprojectors(&a, &ctx(2)).unwrap().all_differences_units());
    }

    #[test]
    fn nilpotent_block() {
        let a = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let d = generalized_eigenprojectors(&a, &ctx(5)).unwrap();
        assert_eq!(d.eigenvalues, alloc::vec![Scalar::zero()]);
        assert_eq!(d.projectors, alloc::vec![Matrix::identity(3)]);
    }

    #[test]
    fn blowup_leading_term() {
        let a = Matrix::from_i64(&[&[0, 0, 0], &[-1, -1, 0], &[0, 1, 0]]);
        let d = generalized_eigenprojectors(&a, &ctx(3)).unwrap();
        assert_eq!(d.eigenvalues, alloc::vec![Scalar::from_int(-1), Scalar::zero()]);
        assert_eq!(d.multiplicities, alloc::vec![1, 2]);
    }

    #[test]
    fn jordan_blocks_with_rational_eigenvalues() {
        // conjugate of J_2(1/2) + J_1(-3)
        let j = Matrix::from_rows(alloc::vec![
            alloc::vec![Scalar::ratio(1, 2), Scalar::one(), Scalar::zero()],
            alloc::vec![Scalar::zero(), Scalar::ratio(1, 2), Scalar::zero()],
            alloc::vec![Scalar::zero(), Scalar::zero(), Scalar::from_int(-3)],
        ])
        .unwrap();
        let p = Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let pi = p.inverse().unwrap();
        let a = p.mul(&j).mul(&pi);
        let d = generalized_eigenprojectors(&a, &ctx(7)).unwrap();
        assert_eq!(d.multiplicities, alloc::vec![1, 2]);
        let expected = p.mul(&Matrix::diagonal(&[Scalar::one(), Scalar::one(), Scalar::zero()])).mul(&pi);
        assert_eq!(d.projectors[1], expected);
    }

    #[test]
    fn irrational_spectrum_is_rejected() {
        let a = Matrix::from_i64(&[&[0, 1], &[2, 0]]);
        assert_eq!(generalized_eigenprojectors(&a, &ctx(3)), Err(Error::NonSplitSpectrum(2)));
    }
}
