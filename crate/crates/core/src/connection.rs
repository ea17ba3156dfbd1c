//! Matrices of truncated series and connections `tau^2 d/dtau + A(tau)`.

use alloc::vec::Vec;
use core::fmt;

use crate::matrix::ScaledMatrix;
use crate::{Error, Matrix, Result, Scalar, TruncatedSeries};

/// An `r x r` matrix of power series, stored by coefficient: `E^0, ..., E^K`.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    size: usize,
    coeffs: Vec<Matrix>,
}

impl SeriesMatrix {
    pub fn zero(size: usize, order: usize) -> Self {
        SeriesMatrix { size, coeffs: (0..=order).map(|_| Matrix::zeros(size, size)).collect() }
    }

    pub fn identity(size: usize, order: usize) -> Self {
        Self::constant(Matrix::identity(size), order)
    }

    pub fn constant(m: Matrix, order: usize) -> Self {
        assert!(m.is_square());
        let mut s = Self::zero(m.rows(), order);
        s.coeffs[0] = m;
        s
    }

    /// From coefficient matrices; all must be square of the same size.
    pub fn from_coeffs(coeffs: Vec<Matrix>) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::SizeMismatch { expected: 1, found: 0 })?;
        let size = first.rows();
        for c in &coeffs {
            if c.rows() != size || c.cols() != size {
                return Err(Error::SizeMismatch { expected: size, found: c.rows().max(c.cols()) });
            }
        }
        Ok(SeriesMatrix { size, coeffs })
    }

    /// From a grid of entry series of common order.
    pub fn from_entries(entries: &[Vec<TruncatedSeries>]) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::SizeMismatch { expected: 1, found: 0 });
        }
        let order = entries[0][0].order();
        for row in entries {
            if row.len() != r {
                return Err(Error::SizeMismatch { expected: r, found: row.len() });
            }
            for e in row {
                if e.order() != order {
                    return Err(Error::OrderMismatch(order, e.order()));
                }
            }
        }
        let coeffs = (0..=order).map(|k| Matrix::from_fn(r, r, |i, j| entries[i][j].coeff(k).clone())).collect();
        Ok(SeriesMatrix { size: r, coeffs })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Matrix {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// The `(i, j)` entry as a series.
    pub fn entry(&self, i: usize, j: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(self.order(), |k| self.coeffs[k][(i, j)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Smallest `k` with `E^k != 0`.
    pub fn valuation_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|m| !m.is_zero())
    }

    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Matrix::zeros(self.size, self.size));
        SeriesMatrix { size: self.size, coeffs }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch { expected: self.size, found: other.size });
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.sub(b)).collect() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let a = self.scaled();
        let b = other.scaled();
        let coeffs = (0..self.coeffs.len())
            .map(|k| {
                let mut acc = ScaledMatrix::zeros(self.size, self.size);
                for i in 0..=k {
                    acc.add_product(&a[i], &b[k - i], false);
                }
                acc.to_matrix()
            })
            .collect();
        Ok(SeriesMatrix { size: self.size, coeffs })
    }

    pub(crate) fn scaled(&self) -> Vec<ScaledMatrix> {
        self.coeffs.iter().map(ScaledMatrix::from_matrix).collect()
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().map(Matrix::neg).collect() }
    }

    pub fn transpose(&self) -> Self {
        SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().map(Matrix::transpose).collect() }
    }

    /// Multiplies every coefficient on both sides: `P E Q`.
    pub fn sandwich(&self, left: &Matrix, right: &Matrix) -> Self {
        SeriesMatrix { size: self.size, coeffs: self.coeffs.iter().map(|m| left.mul(m).mul(right)).collect() }
    }

    /// `tau^2 d/dtau`, coefficient `k` becomes `(k-1) E^{k-1}`.
    pub fn tau_sq_d_tau(&self) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|k| {
                if k < 2 {
                    Matrix::zeros(self.size, self.size)
                } else {
                    self.coeffs[k - 1].scale(&Scalar::from_int(k as i64 - 1))
                }
            })
            .collect();
        SeriesMatrix { size: self.size, coeffs }
    }

    /// Inverse to the same order: `X^0 = (G^0)^{-1}` and
    /// `X^k = -X^0 (G^1 X^{k-1} + ... + G^k X^0)`.
    pub fn inverse(&self) -> Result<Self> {
        let x0 = self.coeffs[0].inverse().ok_or(Error::SingularLeadingTerm)?;
        let g = self.scaled();
        let x0s = ScaledMatrix::from_matrix(&x0);
        let mut xs = alloc::vec![x0s.clone()];
        let mut coeffs = alloc::vec![x0];
        for k in 1..self.coeffs.len() {
            let mut acc = ScaledMatrix::zeros(self.size, self.size);
            for i in 1..=k {
                acc.add_product(&g[i], &xs[k - i], false);
            }
            let mut xk = ScaledMatrix::zeros(self.size, self.size);
            xk.add_product(&x0s, &acc, true);
            let m = xk.to_matrix();
            xs.push(ScaledMatrix::from_matrix(&m));
            coeffs.push(m);
        }
        Ok(SeriesMatrix { size: self.size, coeffs })
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

/// Sign in front of `tau^2 d/dtau` in the operator as it was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `tau^2 d/dtau + A`
    Plus,
    /// `-tau^2 d/dtau + B`
    Minus,
}

impl Convention {
    pub fn sign(self) -> Scalar {
        match self {
            Convention::Plus => Scalar::one(),
            Convention::Minus => Scalar::from_int(-1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Plus => "plus",
            Convention::Minus => "minus",
        }
    }
}

impl core::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Convention::Plus),
            "minus" | "-" => Ok(Convention::Minus),
            other => Err(Error::PreconditionViolated(alloc::format!("unknown convention {other:?}"))),
        }
    }
}

/// A connection with a double pole, stored as `tau^2 d/dtau + sum A^k tau^k`.
///
/// Coefficients past the stored ones are zero. A germ written as
/// `-tau^2 d/dtau + B` is stored with `A = -B`; the original convention is
/// kept so it can be written back the way it came in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionGerm {
    size: usize,
    coeffs: Vec<Matrix>,
    convention: Convention,
}

impl ConnectionGerm {
    /// Builds a germ from coefficients written in `convention`.
    pub fn new(convention: Convention, displayed: Vec<Matrix>) -> Result<Self> {
        let sign = convention.sign();
        let coeffs = displayed.iter().map(|m| m.scale(&sign)).collect();
        Self::from_normalized(convention, coeffs)
    }

    /// Builds a germ from coefficients already in the `tau^2 d/dtau + A` form.
    pub fn from_normalized(convention: Convention, coeffs: Vec<Matrix>) -> Result<Self> {
        let size = coeffs.first().ok_or(Error::SizeMismatch { expected: 1, found: 0 })?.rows();
        for c in &coeffs {
            if c.rows() != size || c.cols() != size {
                return Err(Error::SizeMismatch { expected: size, found: c.rows().max(c.cols()) });
            }
        }
        Ok(ConnectionGerm { size, coeffs, convention })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Index of the last stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Normalized `A^k`; zero past the stored coefficients.
    pub fn a(&self, k: usize) -> Matrix {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Matrix::zeros(self.size, self.size))
    }

    pub fn normalized_coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    /// Coefficients as they read in the germ's own convention.
    pub fn displayed_coeffs(&self) -> Vec<Matrix> {
        let sign = self.convention.sign();
        self.coeffs.iter().map(|m| m.scale(&sign)).collect()
    }

    /// `A(tau)` as a series matrix of the given order.
    pub fn a_series(&self, order: usize) -> SeriesMatrix {
        SeriesMatrix { size: self.size, coeffs: (0..=order).map(|k| self.a(k)).collect() }
    }

    /// Same germ rewritten in another display convention.
    pub fn with_convention(&self, convention: Convention) -> Self {
        ConnectionGerm { convention, ..self.clone() }
    }

    /// `[nabla, E] = tau^2 dE/dtau + [A, E]`, to the order of `E`.
    pub fn covariant_derivative(&self, e: &SeriesMatrix) -> Result<SeriesMatrix> {
        if e.size() != self.size {
            return Err(Error::SizeMismatch { expected: self.size, found: e.size() });
        }
        let order = e.order();
        let a = self.a_series(order);
        e.tau_sq_d_tau().add(&a.commutator(e)?)
    }

    /// The germ in the new trivialization: `G^{-1} A G + G^{-1} tau^2 dG/dtau`.
    pub fn gauge_transform(&self, g: &SeriesMatrix) -> Result<ConnectionGerm> {
        if g.size() != self.size {
            return Err(Error::SizeMismatch { expected: self.size, found: g.size() });
        }
        let order = g.order();
        let gi = g.inverse()?;
        let a = self.a_series(order);
        let b = gi.mul(&a.mul(g)?)?.add(&gi.mul(&g.tau_sq_d_tau())?)?;
        ConnectionGerm::from_normalized(self.convention, b.coeffs)
    }

    /// Drops or zero-pads coefficients to `order`.
    pub fn with_order(&self, order: usize) -> Self {
        ConnectionGerm { size: self.size, coeffs: (0..=order).map(|k| self.a(k)).collect(), convention: self.convention }
    }
}
