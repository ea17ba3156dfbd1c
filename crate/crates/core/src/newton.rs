//! p-adic analysis of truncated series: Newton polygons, log-decay
//! certificates and finite-window slope bounds.
//!
//! A finite window can only certify "no counterexample up to `K`". Every
//! verdict carries the order it was checked to.

use alloc::format;
use alloc::vec::Vec;

use crate::scalar::{valuation, Valuation};
use crate::{Error, PrimeContext, Result, Scalar, TruncatedSeries};

/// Points `(k, val_p(c_k))` of the nonzero coefficients, their lower convex
/// hull, and the smallest `val/k` over the tail window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygonReport {
    pub points: Vec<(usize, i64)>,
    /// Hull vertices; consecutive slopes strictly increase.
    pub hull: Vec<(usize, i64)>,
    /// `min val(c_k)/k` over nonzero `c_k` with `k >= window_start`, `k >= 1`.
    pub min_slope_tail: Option<Scalar>,
    pub window_start: usize,
    pub order: usize,
}

impl NewtonPolygonReport {
    /// Slopes of the hull segments, in order.
    pub fn slopes(&self) -> Vec<Scalar> {
        self.hull
            .windows(2)
            .map(|w| Scalar::ratio(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64))
            .collect()
    }
}

/// Newton polygon with the default tail window `[ceil(K/2), K]`.
pub fn newton_polygon(a: &TruncatedSeries, ctx: &PrimeContext) -> Result<NewtonPolygonReport> {
    newton_polygon_with_window(a, ctx, a.order().div_ceil(2))
}

pub fn newton_polygon_with_window(
    a: &TruncatedSeries,
    ctx: &PrimeContext,
    window_start: usize,
) -> Result<NewtonPolygonReport> {
    let points: Vec<(usize, i64)> = a
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(k, c)| valuation(c, ctx).finite().map(|v| (k, v)))
        .collect();
    if points.is_empty() {
        return Err(Error::ZeroSeries);
    }
    let hull = lower_hull(&points);
    let min_slope_tail = points
        .iter()
        .filter(|&&(k, _)| k >= window_start.max(1))
        .map(|&(k, v)| Scalar::ratio(v, k as i64))
        .min();
    Ok(NewtonPolygonReport { points, hull, min_slope_tail, window_start, order: a.order() })
}

/// Monotone-chain lower hull of points sorted by strictly increasing `x`.
/// Collinear interior points are dropped.
fn lower_hull(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 as i128 - o.0 as i128) * (pt.1 as i128 - o.1 as i128)
                - (a.1 as i128 - o.1 as i128) * (pt.0 as i128 - o.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecayVerdict {
    Pass,
    /// `c_k` violates the requirement `val >= m` that applies at index `k`.
    Fail { k: usize, m: i64, valuation: Valuation },
}

impl DecayVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, DecayVerdict::Pass)
    }
}

/// Outcome of checking that `c_k` is divisible by `p^m` whenever
/// `k > alpha p^m + beta`, for every `k` up to the truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogDecayCertificate {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub verified_up_to: usize,
    pub verdict: DecayVerdict,
}

/// The valuation required of `c_k`: the largest `m >= 0` with
/// `alpha p^m + beta < k`, `None` when no `m` applies, and
/// `Some(Infinite)` when every `m` applies (`alpha = 0`, `beta < k`).
pub fn required_valuation(k: usize, p: u64, alpha: &Scalar, beta: &Scalar) -> Option<Valuation> {
    let k = Scalar::from_int(k as i64);
    if alpha + beta >= k {
        return None;
    }
    if alpha.is_zero() {
        return Some(Valuation::Infinite);
    }
    let p = Scalar::from_int(p as i64);
    let mut m = 0i64;
    let mut pm = p.clone();
    while &(alpha * &pm) + beta < k {
        m += 1;
        pm *= &p;
    }
    Some(Valuation::Finite(m))
}

pub fn check_log_decay(a: &TruncatedSeries, ctx: &PrimeContext, alpha: &Scalar, beta: &Scalar) -> Result<LogDecayCertificate> {
    if alpha.signum().is_lt() || beta.signum().is_lt() {
        return Err(Error::PreconditionViolated(format!("alpha={alpha}, beta={beta} must be nonnegative")));
    }
    let mut verdict = DecayVerdict::Pass;
    for (k, c) in a.coeffs().iter().enumerate() {
        let Some(required) = required_valuation(k, ctx.p(), alpha, beta) else { continue };
        let v = valuation(c, ctx);
        if v < required {
            let m = match required {
                Valuation::Finite(m) => m,
                Valuation::Infinite => v.finite().map_or(0, |x| (x + 1).max(0)),
            };
            verdict = DecayVerdict::Fail { k, m, valuation: v };
            break;
        }
    }
    Ok(LogDecayCertificate { alpha: alpha.clone(), beta: beta.clone(), verified_up_to: a.order(), verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeVerdict {
    Pass,
    Fail { k: usize, valuation: Valuation, bound: Scalar },
}

impl SlopeVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SlopeVerdict::Pass)
    }
}

/// Checks `val(c_k) >= slope * k - gamma` for every `k` in `[k_min, K]`.
///
/// This is a finite-window lower bound; it says nothing about `k > K`.
pub fn slope_floor(a: &TruncatedSeries, ctx: &PrimeContext, k_min: usize, slope: &Scalar, gamma: &Scalar) -> Result<SlopeVerdict> {
    if k_min > a.order() {
        return Err(Error::PreconditionViolated(format!("k_min={k_min} exceeds order {}", a.order())));
    }
    for (k, c) in a.coeffs().iter().enumerate().skip(k_min) {
        let bound = slope * Scalar::from_int(k as i64) - gamma;
        let ok = match valuation(c, ctx) {
            Valuation::Infinite => true,
            Valuation::Finite(v) => Scalar::from_int(v) >= bound,
        };
        if !ok {
            return Ok(SlopeVerdict::Fail { k, valuation: valuation(c, ctx), bound });
        }
    }
    Ok(SlopeVerdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial_valuation;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn ones(order: usize) -> TruncatedSeries {
        TruncatedSeries::from_fn(order, |_| Scalar::one())
    }

    fn factorials(order: usize) -> TruncatedSeries {
        let mut f = BigInt::from(1);
        TruncatedSeries::from_fn(order, |j| {
            if j > 0 {
                f *= j;
            }
            Scalar::from_bigint(f.clone())
        })
    }

    #[test]
    fn newton_of_powers_of_p_is_a_line() {
        let c = ctx(3);
        let a = TruncatedSeries::from_fn(20, |k| Scalar::from_bigint(c.power(k as u32)));
        let r = newton_polygon(&a, &c).unwrap();
        assert_eq!(r.hull, alloc::vec![(0, 0), (20, 20)]);
        assert_eq!(r.slopes(), alloc::vec![Scalar::one()]);
        assert_eq!(r.min_slope_tail, Some(Scalar::one()));
    }

    #[test]
    fn newton_of_geometric_series_is_flat() {
        let r = newton_polygon(&ones(10), &ctx(5)).unwrap();
        assert_eq!(r.hull, alloc::vec![(0, 0), (10, 0)]);
        assert_eq!(r.min_slope_tail, Some(Scalar::zero()));
    }

    #[test]
    fn newton_of_factorials_matches_legendre() {
        let c = ctx(3);
        let r = newton_polygon(&factorials(81), &c).unwrap();
        let v81 = r.points.iter().find(|p| p.0 == 81).unwrap().1;
        assert_eq!(v81, 40);
        assert_eq!(v81 as u64, factorial_valuation(81, &c));
    }

    #[test]
    fn zero_series_has_no_polygon() {
        assert_eq!(newton_polygon(&TruncatedSeries::zero(4), &ctx(2)), Err(Error::ZeroSeries));
    }

    #[test]
    fn log_decay_of_geometric_series_fails_first_at_p_plus_two() {
        // k = 5 is the first index with 1*3^1 + 1 < k, and c_5 = 1 has valuation 0.
        let cert = check_log_decay(&ones(50), &ctx(3), &Scalar::one(), &Scalar::one()).unwrap();
        assert_eq!(cert.verdict, DecayVerdict::Fail { k: 5, m: 1, valuation: Valuation::Finite(0) });
        assert_eq!(cert.verified_up_to, 50);
    }

    #[test]
    fn zero_series_always_decays() {
        for (a, b) in [(0, 0), (1, 1), (3, 0)] {
            let cert = check_log_decay(&TruncatedSeries::zero(30), &ctx(2), &Scalar::from_int(a), &Scalar::from_int(b)).unwrap();
            assert!(cert.verdict.passed());
        }
    }

    #[test]
    fn alpha_zero_demands_vanishing() {
        let a = TruncatedSeries::from_coeffs(alloc::vec![Scalar::one(), Scalar::one(), Scalar::from_int(9)]);
        let cert = check_log_decay(&a, &ctx(3), &Scalar::zero(), &Scalar::zero()).unwrap();
        assert_eq!(cert.verdict, DecayVerdict::Fail { k: 1, m: 1, valuation: Valuation::Finite(0) });
    }

    #[test]
    fn slope_floor_examples() {
        let c = ctx(3);
        let half = Scalar::ratio(1, 2);
        assert!(slope_floor(&TruncatedSeries::constant(Scalar::from_int(7), 30), &c, 0, &half, &Scalar::zero()).unwrap().passed());
        assert_eq!(
            slope_floor(&ones(10), &c, 0, &half, &Scalar::one()).unwrap(),
            SlopeVerdict::Fail { k: 3, valuation: Valuation::Finite(0), bound: half.clone() }
        );
        assert!(slope_floor(&ones(10), &c, 11, &half, &Scalar::one()).is_err());
    }

    #[test]
    fn slope_floor_on_factorials_follows_digit_sums() {
        // val_3(j!) = (j - s_3(j))/2, so val >= j/2 - gamma holds exactly while
        // s_3(j) <= 2 gamma. With gamma = 2 the first j with s_3(j) = 5 is
        // 17 = 122_3.
        let c = ctx(3);
        let half = Scalar::ratio(1, 2);
        let f = factorials(200);
        assert_eq!(
            slope_floor(&f, &c, 0, &half, &Scalar::from_int(2)).unwrap(),
            SlopeVerdict::Fail { k: 17, valuation: Valuation::Finite(6), bound: Scalar::ratio(13, 2) }
        );
        // For j <= 200 the digit sum in base 3 is at most 10.
        assert!(slope_floor(&f, &c, 0, &half, &Scalar::from_int(5)).unwrap().passed());
    }

    fn int_series() -> impl Strategy<Value = TruncatedSeries> {
        prop::collection::vec(-200i64..200, 2..40)
            .prop_map(|v| TruncatedSeries::from_coeffs(v.into_iter().map(Scalar::from_int).collect()))
    }

    proptest! {
        #[test]
        fn hull_is_convex_and_below_points(a in int_series(), p in prop::sample::select(alloc::vec![2u64, 3, 5])) {
            let c = ctx(p);
            prop_assume!(!a.is_zero());
            let r = newton_polygon(&a, &c).unwrap();
            let slopes = r.slopes();
            for w in slopes.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for &(k, v) in &r.points {
                // Locate the hull segment over k and compare.
                let seg = r.hull.windows(2).find(|w| w[0].0 <= k && k <= w[1].0);
                if let Some(w) = seg {
                    let lhs = Scalar::from_int(v) * Scalar::from_int((w[1].0 - w[0].0) as i64);
                    let rhs = Scalar::from_int(w[0].1 * (w[1].0 - w[0].0) as i64 + (w[1].1 - w[0].1) * (k - w[0].0) as i64);
                    prop_assert!(lhs >= rhs);
                }
            }
        }

        #[test]
        fn log_decay_is_monotone_in_constants(a in int_series(), da in 0i64..3, db in 0i64..3) {
            let c = ctx(2);
            let base = check_log_decay(&a, &c, &Scalar::one(), &Scalar::one()).unwrap();
            if base.verdict.passed() {
                let looser = check_log_decay(&a, &c, &Scalar::from_int(1 + da), &Scalar::from_int(1 + db)).unwrap();
                prop_assert!(looser.verdict.passed());
            }
        }

        #[test]
        fn integral_series_never_fail_at_level_zero(a in int_series(), p in prop::sample::select(alloc::vec![2u64, 3, 5, 7])) {
            let cert = check_log_decay(&a, &ctx(p), &Scalar::one(), &Scalar::zero()).unwrap();
            if let DecayVerdict::Fail { m, .. } = cert.verdict {
                prop_assert!(m >= 1);
            }
        }
    }
}
