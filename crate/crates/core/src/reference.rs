//! Closed-form reference series and the bundled example connections.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::{ConnectionGerm, Convention, Error, Matrix, Result, Scalar, SeriesMatrix, TruncatedSeries};

/// Named closed-form series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceSeries {
    Cp1H21,
    Cp1H11,
    Cp1H12,
    Cp1H22,
    BlowupE12,
    BlowupE23,
    BlowupE13,
}

impl ReferenceSeries {
    pub const ALL: [ReferenceSeries; 7] = [
        ReferenceSeries::Cp1H21,
        ReferenceSeries::Cp1H11,
        ReferenceSeries::Cp1H12,
        ReferenceSeries::Cp1H22,
        ReferenceSeries::BlowupE12,
        ReferenceSeries::BlowupE23,
        ReferenceSeries::BlowupE13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReferenceSeries::Cp1H21 => "cp1_H21",
            ReferenceSeries::Cp1H11 => "cp1_H11",
            ReferenceSeries::Cp1H12 => "cp1_H12",
            ReferenceSeries::Cp1H22 => "cp1_H22",
            ReferenceSeries::BlowupE12 => "blowup_E12",
            ReferenceSeries::BlowupE23 => "blowup_E23",
            ReferenceSeries::BlowupE13 => "blowup_E13",
        }
    }
}

impl fmt::Display for ReferenceSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReferenceSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceSeries::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::PreconditionViolated(alloc::format!("unknown reference series {s:?}")))
    }
}

fn factorials(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut f = BigInt::one();
    out.push(f.clone());
    for i in 1..=n {
        f *= i;
        out.push(f.clone());
    }
    out
}

fn cp1_h21(order: usize) -> TruncatedSeries {
    let fact = factorials(order.max(1));
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            return Scalar::one();
        }
        if k % 2 == 1 {
            return Scalar::zero();
        }
        let j = k / 2;
        // C(2j-1, j) = (2j-1)! / (j! (j-1)!)
        let binom = &fact[2 * j - 1] / (&fact[j] * &fact[j - 1]);
        let num = &binom * &binom * &fact[2 * j];
        let den = BigInt::one() << (8 * j - 2);
        Scalar::new(num, den).expect("nonzero denominator")
    })
}

fn cp1_h11(order: usize) -> TruncatedSeries {
    let h21 = cp1_h21(order);
    let quarter = Scalar::ratio(1, 4);
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            Scalar::zero()
        } else {
            h21.coeff(k - 1) * Scalar::from_int(k as i64) * &quarter
        }
    })
}

/// Exact coefficients `c_0..c_order` of a named series.
pub fn reference_series(name: ReferenceSeries, order: usize) -> TruncatedSeries {
    match name {
        ReferenceSeries::Cp1H21 => cp1_h21(order),
        ReferenceSeries::Cp1H11 => cp1_h11(order),
        ReferenceSeries::Cp1H22 => cp1_h11(order).neg(),
        ReferenceSeries::Cp1H12 => {
            let half = cp1_h11(order).tau_sq_d_tau().scale(&Scalar::ratio(1, 2));
            cp1_h21(order).sub(&half).expect("same order")
        }
        ReferenceSeries::BlowupE12 => {
            let fact = factorials(order);
            TruncatedSeries::from_fn(order, |j| {
                let s = Scalar::from_bigint(fact[j].clone());
                if j % 2 == 0 { s } else { -s }
            })
        }
        ReferenceSeries::BlowupE23 => {
            let fact = factorials(order);
            TruncatedSeries::from_fn(order, |j| -Scalar::from_bigint(fact[j].clone()))
        }
        ReferenceSeries::BlowupE13 => reference_series(ReferenceSeries::BlowupE12, order)
            .mul(&reference_series(ReferenceSeries::BlowupE23, order))
            .expect("same order"),
    }
}

/// Degree-zero slice of the quantum connection of the projective line,
/// basis `(1, q^-1 h)`, written as `-tau^2 d/dtau + A^0 + A^1 tau`.
pub fn cp1_connection() -> ConnectionGerm {
    ConnectionGerm::new(
        Convention::Minus,
        vec![Matrix::from_i64(&[&[0, 2], &[2, 0]]), Matrix::from_i64(&[&[0, 0], &[0, -1]])],
    )
    .expect("square")
}

/// The matrix `H` with `(id +- H)/2` the two projectors of the projective line.
pub fn cp1_h(order: usize) -> SeriesMatrix {
    use ReferenceSeries::*;
    let e = |n| reference_series(n, order);
    SeriesMatrix::from_entries(&[vec![e(Cp1H11), e(Cp1H12)], vec![e(Cp1H21), e(Cp1H22)]]).expect("square")
}

/// Three-dimensional slice (degree 2) of the blown-up four-torus, written
/// as `-tau^2 d/dtau + B^0 + B^1 tau`.
pub fn blowup_connection() -> ConnectionGerm {
    ConnectionGerm::new(
        Convention::Minus,
        vec![Matrix::from_i64(&[&[0, 0, 0], &[-1, -1, 0], &[0, 1, 0]]), Matrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -1]])],
    )
    .expect("square")
}

/// The idempotent `E` of the blowup exactly as displayed (nonzero entries
/// `E22, E12, E23, E13`). It is flat only after transposition.
pub fn blowup_displayed_e(order: usize) -> SeriesMatrix {
    use ReferenceSeries::*;
    let z = TruncatedSeries::zero(order);
    let e = |n| reference_series(n, order);
    SeriesMatrix::from_entries(&[
        vec![z.clone(), e(BlowupE12), e(BlowupE13)],
        vec![z.clone(), TruncatedSeries::one(order), e(BlowupE23)],
        vec![z.clone(), z.clone(), z],
    ])
    .expect("square")
}

/// `tau^2 d/dtau + diag(-tau, 0) + e_12 tau^2`: no flat extension of `diag(1, 0)`.
pub fn non_existence_connection() -> ConnectionGerm {
    ConnectionGerm::new(
        Convention::Plus,
        vec![Matrix::zeros(2, 2), Matrix::from_i64(&[&[-1, 0], &[0, 0]]), Matrix::from_i64(&[&[0, 1], &[0, 0]])],
    )
    .expect("square")
}

pub fn non_existence_e0() -> Matrix {
    Matrix::from_i64(&[&[1, 0], &[0, 0]])
}

/// `tau^2 d/dtau + diag(0, 0, 0, -tau)`: two flat idempotents share a constant term.
pub fn non_uniqueness_connection() -> ConnectionGerm {
    ConnectionGerm::new(Convention::Plus, vec![Matrix::zeros(4, 4), Matrix::diagonal(&[0, 0, 0, -1].map(Scalar::from_int))])
        .expect("square")
}

pub fn non_uniqueness_e0() -> Matrix {
    Matrix::diagonal(&[1, 1, 0, 0].map(Scalar::from_int))
}

/// `diag(1, 1, 0, 0)` and the same matrix plus `tau e_41`.
pub fn non_uniqueness_solutions(order: usize) -> [SeriesMatrix; 2] {
    let first = SeriesMatrix::constant(non_uniqueness_e0(), order);
    let mut coeffs = first.coeffs().to_vec();
    if order >= 1 {
        coeffs[1] = Matrix::unit(4, 4, 3, 0);
    }
    [first, SeriesMatrix::from_coeffs(coeffs).expect("square")]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            reference_series(ReferenceSeries::Cp1H21, 2),
            TruncatedSeries::from_coeffs(vec![Scalar::one(), Scalar::zero(), Scalar::ratio(1, 32)])
        );
        assert_eq!(reference_series(ReferenceSeries::BlowupE12, 3), s(&[1, -1, 2, -6]));
        assert_eq!(reference_series(ReferenceSeries::BlowupE23, 3), s(&[-1, -1, -2, -6]));
        assert_eq!(reference_series(ReferenceSeries::Cp1H22, 30), reference_series(ReferenceSeries::Cp1H11, 30).neg());
    }

    #[test]
    fn h21_second_term() {
        // j = 2: C(3,2)^2 4! / 2^14 = 216 / 16384 = 27/2048
        assert_eq!(reference_series(ReferenceSeries::Cp1H21, 4).coeff(4), &Scalar::ratio(27, 2048));
    }

    #[test]
    fn names_round_trip() {
        for r in ReferenceSeries::ALL {
            assert_eq!(r.name().parse::<ReferenceSeries>().unwrap(), r);
        }
        assert!("cp1_H99".parse::<ReferenceSeries>().is_err());
    }

    #[test]
    fn cp1_series_are_flat_and_square_to_one() {
        let order = 40;
        let h = cp1_h(order);
        assert!(cp1_connection().covariant_derivative(&h).unwrap().is_zero());
        assert_eq!(h.mul(&h).unwrap(), SeriesMatrix::identity(2, order));
    }

    #[test]
    fn blowup_matrix_needs_transposition() {
        let conn = blowup_connection();
        let e = blowup_displayed_e(20);
        assert!(!conn.a(0).commutator(e.coeff(0)).is_zero());
        let et = e.transpose();
        assert!(conn.a(0).commutator(et.coeff(0)).is_zero());
        assert!(conn.covariant_derivative(&et).unwrap().is_zero());
        assert_eq!(et.mul(&et).unwrap(), et);
    }

    #[test]
    fn non_uniqueness_pair_is_flat() {
        let conn = non_uniqueness_connection();
        for e in non_uniqueness_solutions(10) {
            assert!(conn.covariant_derivative(&e).unwrap().is_zero());
            assert_eq!(e.mul(&e).unwrap(), e);
        }
    }
}
