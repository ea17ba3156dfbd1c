use alloc::vec::Vec;

use crate::newton::{check_log_decay, DecayVerdict};
use crate::scalar::valuation;
use crate::{Error, PrimeContext, Result, Scalar, SeriesMatrix, TruncatedSeries, Valuation};

/// A matrix entry whose coefficients violate the decay requirement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryFailure {
    pub row: usize,
    pub col: usize,
    pub k: usize,
    pub m: i64,
    pub valuation: Valuation,
}

/// Entrywise log-decay check of a series matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub verified_up_to: usize,
    /// Every failing entry, in row-major order.
    pub failures: Vec<EntryFailure>,
}

impl DivisibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The failure with the smallest index `k`.
    pub fn first_failure(&self) -> Option<&EntryFailure> {
        self.failures.iter().min_by_key(|f| (f.k, f.row, f.col))
    }
}

/// Checks that `E^k` is divisible by `p^m` whenever `k > alpha p^m + beta`.
pub fn verify_divisibility(e: &SeriesMatrix, ctx: &PrimeContext, alpha: &Scalar, beta: &Scalar) -> Result<DivisibilityReport> {
    let mut failures = Vec::new();
    for row in 0..e.size() {
        for col in 0..e.size() {
            let cert = check_log_decay(&e.entry(row, col), ctx, alpha, beta)?;
            if let DecayVerdict::Fail { k, m, valuation } = cert.verdict {
                failures.push(EntryFailure { row, col, k, m, valuation });
            }
        }
    }
    Ok(DivisibilityReport { alpha: alpha.clone(), beta: beta.clone(), verified_up_to: e.order(), failures })
}

/// Degree of a series reduced mod `p`, as far as the truncation can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModPDegree {
    /// Every coefficient is divisible by `p`.
    Zero,
    Degree(usize),
    /// The last known coefficient is a unit, so the reduction may not be a
    /// polynomial at all.
    ExceedsOrder,
}

pub fn mod_p_reduction_degree(s: &TruncatedSeries, ctx: &PrimeContext) -> Result<ModPDegree> {
    let mut degree = None;
    for (k, c) in s.coeffs().iter().enumerate() {
        match valuation(c, ctx) {
            Valuation::Finite(v) if v < 0 => return Err(Error::NonIntegral(alloc::format!("{c} (coefficient {k})"))),
            Valuation::Finite(0) => degree = Some(k),
            _ => {}
        }
    }
    Ok(match degree {
        None => ModPDegree::Zero,
        Some(d) if d == s.order() && d > 0 => ModPDegree::ExceedsOrder,
        Some(d) => ModPDegree::Degree(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{reference_series, ReferenceSeries};
    use crate::Matrix;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn constant_idempotent_passes() {
        let e = SeriesMatrix::constant(Matrix::from_i64(&[&[1, 0], &[0, 0]]), 50);
        for (a, b) in [(0, 0), (1, 1), (3, 0)] {
            let rep = verify_divisibility(&e, &ctx(3), &Scalar::from_int(a), &Scalar::from_int(b)).unwrap();
            assert!(rep.passed());
        }
    }

    #[test]
    fn failing_entry_is_located() {
        let order = 12;
        let ones = TruncatedSeries::from_fn(order, |_| Scalar::one());
        let z = TruncatedSeries::zero(order);
        let e = SeriesMatrix::from_entries(&[alloc::vec![z.clone(), ones], alloc::vec![z.clone(), z]]).unwrap();
        let rep = verify_divisibility(&e, &ctx(3), &Scalar::one(), &Scalar::one()).unwrap();
        let f = rep.first_failure().unwrap();
        assert_eq!((f.row, f.col, f.k, f.m), (0, 1, 5, 1));
    }

    #[test]
    fn mod_p_degrees() {
        let one = TruncatedSeries::one(20);
        assert_eq!(mod_p_reduction_degree(&one, &ctx(5)).unwrap(), ModPDegree::Degree(0));
        let p_tail = TruncatedSeries::from_fn(20, |k| if k == 0 { Scalar::one() } else { Scalar::from_int(5) });
        assert_eq!(mod_p_reduction_degree(&p_tail, &ctx(5)).unwrap(), ModPDegree::Degree(0));
        let ones = TruncatedSeries::from_fn(20, |_| Scalar::one());
        assert_eq!(mod_p_reduction_degree(&ones, &ctx(5)).unwrap(), ModPDegree::ExceedsOrder);
        assert_eq!(mod_p_reduction_degree(&TruncatedSeries::zero(4), &ctx(5)).unwrap(), ModPDegree::Zero);
        let bad = TruncatedSeries::from_coeffs(alloc::vec![Scalar::one(), Scalar::ratio(1, 5)]);
        assert!(matches!(mod_p_reduction_degree(&bad, &ctx(5)), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn cp1_h21_mod_3_is_a_short_polynomial() {
        let h21 = reference_series(ReferenceSeries::Cp1H21, 100);
        match mod_p_reduction_degree(&h21, &ctx(3)).unwrap() {
            ModPDegree::Degree(d) => assert!(d <= 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
