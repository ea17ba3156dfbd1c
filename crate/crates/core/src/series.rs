//! Truncated power series `c_0 + c_1 tau + ... + c_K tau^K` over [`Scalar`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result, Scalar};

/// A power series known up to and including `tau^order`.
///
/// Binary arithmetic requires both operands to have the same order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Scalar::one(), order)
    }

    pub fn constant(c: Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from explicit coefficients; `coeffs` must be nonempty.
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        TruncatedSeries { coeffs }
    }

    /// `sum_k f(k) tau^k` for `k = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Scalar) -> Self {
        TruncatedSeries { coeffs: (0..=order).map(f).collect() }
    }

    /// Pads with zeros or truncates to the requested order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Scalar::zero());
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(TruncatedSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    /// Cauchy product, truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Scalar::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    /// `tau * d/dtau`: `c_k tau^k -> k c_k tau^k`. Order is preserved.
    pub fn tau_d_tau(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| c * Scalar::from_int(k as i64)).collect(),
        }
    }

    /// `d/dtau`; the order drops by one (an order-0 series maps to order 0).
    pub fn d_tau(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * Scalar::from_int(k as i64 + 1))
                .collect(),
        }
    }

    /// `tau^2 d/dtau`: coefficient `k` becomes `(k-1) c_{k-1}`. Order is preserved.
    pub fn tau_sq_d_tau(&self) -> Self {
        Self::from_fn(self.order(), |k| {
            if k == 0 {
                Scalar::zero()
            } else {
                &self.coeffs[k - 1] * Scalar::from_int(k as i64 - 1)
            }
        })
    }

    /// Multiplication by `tau^s`, truncated at the same order.
    pub fn shift(&self, s: usize) -> Self {
        Self::from_fn(self.order(), |k| if k >= s { self.coeffs[k - s].clone() } else { Scalar::zero() })
    }

    /// Index of the last nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}
