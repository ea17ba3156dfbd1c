//! Univariate polynomials over [`Scalar`], just enough for spectra.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::{Error, Matrix, Result, Scalar};

/// Coefficients from the constant term upwards, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Self {
        Poly(vec![Scalar::one()])
    }

    /// `x - a`.
    pub fn linear(a: &Scalar) -> Self {
        Poly(vec![-a, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Scalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix) -> Matrix {
        let n = a.rows();
        self.0.iter().rev().fold(Matrix::zeros(n, n), |acc, c| acc.mul(a).add(&Matrix::scalar(n, c)))
    }

    /// Taylor coefficients at `x = a`: `p(a + y) = sum b_i y^i`.
    pub fn taylor_shift(&self, a: &Scalar) -> Vec<Scalar> {
        // Repeated synthetic division by (x - a).
        let mut rest = self.0.clone();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let (q, r) = synthetic_division(&rest, a);
            out.push(r);
            rest = q;
        }
        out
    }

    /// Divides by `x - a`; returns the quotient when the remainder is zero.
    pub fn divide_root(&self, a: &Scalar) -> Option<Poly> {
        if self.0.is_empty() {
            return None;
        }
        let (q, r) = synthetic_division(&self.0, a);
        r.is_zero().then(|| Poly::new(q))
    }
}

fn synthetic_division(coeffs: &[Scalar], a: &Scalar) -> (Vec<Scalar>, Scalar) {
    let n = coeffs.len();
    if n == 0 {
        return (Vec::new(), Scalar::zero());
    }
    let mut q = vec![Scalar::zero(); n - 1];
    let mut carry = Scalar::zero();
    for i in (0..n).rev() {
        let v = &coeffs[i] + &(&carry * a);
        if i == 0 {
            return (q, v);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

/// Characteristic polynomial `det(x I - A)` by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &Matrix) -> Poly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut m = Matrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::scalar(n, &c[n - k + 1]));
        let t = a.mul(&m).trace();
        c[n - k] = -(t * Scalar::ratio(1, k as i64));
    }
    Poly::new(c)
}

/// Rational roots with multiplicities, in increasing order.
///
/// Fails with [`Error::NonSplitSpectrum`] when a factor without rational
/// roots remains; the error carries its degree.
pub fn rational_roots(p: &Poly) -> Result<Vec<(Scalar, usize)>> {
    let mut rest = p.clone();
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    let push = |roots: &mut Vec<(Scalar, usize)>, r: Scalar| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some(e) => e.1 += 1,
        None => roots.push((r, 1)),
    };
    while let Some(q) = rest.divide_root(&Scalar::zero()) {
        if rest.degree() == Some(0) {
            break;
        }
        push(&mut roots, Scalar::zero());
        rest = q;
    }
    loop {
        if rest.degree().is_none_or(|d| d == 0) {
            break;
        }
        let ints = integer_coefficients(&rest);
        let lead = ints.last().expect("nonzero").abs();
        let constant = ints[0].abs();
        let mut found = None;
        'search: for num in divisors(&constant)? {
            for den in divisors(&lead)? {
                for sign in [1i64, -1] {
                    let cand = Scalar::new(&num * sign, den.clone())?;
                    if rest.eval(&cand).is_zero() {
                        found = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                rest = rest.divide_root(&r).expect("r is a root");
                push(&mut roots, r);
            }
            None => return Err(Error::NonSplitSpectrum(rest.degree().unwrap_or(0))),
        }
    }
    roots.sort();
    Ok(roots)
}

fn integer_coefficients(p: &Poly) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()
}

/// Positive divisors by trial division. Inputs beyond 2^63 are rejected
/// because the search would not terminate in reasonable time.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.to_u64().filter(|&v| v < (1 << 63)).ok_or(Error::NonSplitSpectrum(0))?;
    if n == 0 {
        return Ok(vec![BigInt::one()]);
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d != n / d {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}
