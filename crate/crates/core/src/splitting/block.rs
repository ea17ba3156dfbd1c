use alloc::vec::Vec;

use super::eigen::{generalized_eigenprojectors, EigenData};
use crate::matrix::ScaledMatrix;
use crate::{ConnectionGerm, Error, Matrix, PrimeContext, Result, Scalar, SeriesMatrix};

/// Choice of the diagonal blocks `e_l G^k e_l` of the gauge.
///
/// The projectors do not depend on it; only the gauge and the
/// block-diagonal connection do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalNormalization {
    #[default]
    Zero,
    /// `e_l G^k e_l = e_l A^k e_l`.
    Alternative,
}

#[derive(Debug, Clone)]
pub struct SplittingResult {
    pub eigen: EigenData,
    /// `G = I + O(tau)` with `G^{-1} nabla G` block diagonal.
    pub gauge: SeriesMatrix,
    /// The block-diagonal connection `G^{-1} nabla G`.
    pub transformed: ConnectionGerm,
    /// `E_l = G e_l G^{-1}`, in the order of `eigen.eigenvalues`.
    pub projector_series: Vec<SeriesMatrix>,
    /// Largest order through which every invariant was checked to hold.
    pub residual: usize,
}

impl SplittingResult {
    /// Eigenvalue `i` as it reads in the connection's display convention.
    pub fn displayed_eigenvalue(&self, i: usize) -> Scalar {
        &self.eigen.eigenvalues[i] * self.transformed.convention().sign()
    }
}

pub fn block_split(conn: &ConnectionGerm, ctx: &PrimeContext, order: usize) -> Result<SplittingResult> {
    block_split_with(conn, ctx, order, DiagonalNormalization::Zero)
}

/// Solves `A G + tau^2 G' = G B` order by order with `B` block diagonal.
///
/// Writing `R^k` for everything in the order-`k` equation that involves
/// lower-order terms only, the equation reads `[A^0, G^k] - B^k = R^k`.
/// Off-diagonal blocks of `G^k` solve `(l - m) X + N_l X - X N_m = e_l R^k e_m`
/// with `N_l` nilpotent, inverted by a finite geometric series.
pub fn block_split_with(
    conn: &ConnectionGerm,
    ctx: &PrimeContext,
    order: usize,
    normalization: DiagonalNormalization,
) -> Result<SplittingResult> {
    let r = conn.size();
    let a0 = conn.a(0);
    let eigen = generalized_eigenprojectors(&a0, ctx)?;
    let e = &eigen.projectors;
    let nil: Vec<Matrix> = e
        .iter()
        .zip(&eigen.eigenvalues)
        .map(|(el, l)| el.mul(&a0.sub(&Matrix::scalar(r, l))))
        .collect();
    let a: Vec<Matrix> = (0..=order).map(|k| conn.a(k)).collect();

    let a_scaled: Vec<ScaledMatrix> = a.iter().map(ScaledMatrix::from_matrix).collect();
    let mut g: Vec<Matrix> = Vec::with_capacity(order + 1);
    let mut b: Vec<Matrix> = Vec::with_capacity(order + 1);
    let mut g_scaled = Vec::with_capacity(order + 1);
    let mut b_scaled = Vec::with_capacity(order + 1);
    g.push(Matrix::identity(r));
    b.push(a0.clone());
    g_scaled.push(ScaledMatrix::from_matrix(&g[0]));
    b_scaled.push(ScaledMatrix::from_matrix(&b[0]));
    for k in 1..=order {
        let mut acc = ScaledMatrix::from_matrix(&g[k - 1].scale(&Scalar::from_int(-(k as i64 - 1))));
        for i in 1..k {
            acc.add_product(&g_scaled[i], &b_scaled[k - i], false);
        }
        for i in 1..=k {
            acc.add_product(&a_scaled[i], &g_scaled[k - i], true);
        }
        let rk = acc.to_matrix();
        let mut gk = Matrix::zeros(r, r);
        for (li, el) in e.iter().enumerate() {
            for (mi, em) in e.iter().enumerate() {
                if li == mi {
                    continue;
                }
                let y = el.mul(&rk).mul(em);
                if y.is_zero() {
                    continue;
                }
                let d = &eigen.eigenvalues[li] - &eigen.eigenvalues[mi];
                gk.add_assign(&sylvester(&y, &d, &nil[li], &nil[mi])?);
            }
        }
        let mut bk = Matrix::zeros(r, r);
        for el in e {
            let diag = match normalization {
                DiagonalNormalization::Zero => Matrix::zeros(r, r),
                DiagonalNormalization::Alternative => el.mul(&a[k]).mul(el),
            };
            bk.add_assign(&el.mul(&a0.commutator(&diag).sub(&rk)).mul(el));
            gk.add_assign(&diag);
        }
        g_scaled.push(ScaledMatrix::from_matrix(&gk));
        b_scaled.push(ScaledMatrix::from_matrix(&bk));
        g.push(gk);
        b.push(bk);
    }
    let gauge = SeriesMatrix::from_coeffs(g)?;
    let transformed = ConnectionGerm::from_normalized(conn.convention(), b)?;
    let ginv = gauge.inverse()?;
    let projector_series = e
        .iter()
        .map(|el| gauge.mul(&SeriesMatrix::constant(el.clone(), order)).and_then(|x| x.mul(&ginv)))
        .collect::<Result<Vec<_>>>()?;
    let residual = verified_order(conn, &gauge, &transformed, &eigen, &projector_series)?;
    if residual < order {
        return Err(Error::PreconditionViolated(alloc::format!("splitting invariants fail at order {}", residual + 1)));
    }
    Ok(SplittingResult { eigen, gauge, transformed, projector_series, residual })
}

/// Solves `d X + N_l X - X N_m = Y` for `d != 0` and nilpotent `N_l, N_m`.
fn sylvester(y: &Matrix, d: &Scalar, nl: &Matrix, nm: &Matrix) -> Result<Matrix> {
    let dinv = d.recip()?;
    let mut term = y.scale(&dinv);
    let mut x = term.clone();
    while !term.is_zero() {
        // term <- -(N_l term - term N_m) / d
        term = nl.mul(&term).sub(&term.mul(nm)).scale(&-&dinv);
        x.add_assign(&term);
    }
    Ok(x)
}

/// Last order `k` such that coefficients `0..=k` of every invariant vanish.
fn verified_order(
    conn: &ConnectionGerm,
    gauge: &SeriesMatrix,
    transformed: &ConnectionGerm,
    eigen: &EigenData,
    projectors: &[SeriesMatrix],
) -> Result<usize> {
    let order = gauge.order();
    let r = conn.size();
    let mut bad = order + 1;
    let mut note = |s: &SeriesMatrix| {
        if let Some(k) = s.valuation_order() {
            bad = bad.min(k);
        }
    };
    // the transformed germ agrees with the gauge action and is block diagonal
    // G B = A G + tau^2 G'
    let lhs = gauge.mul(&transformed.a_series(order))?;
    note(&conn.a_series(order).mul(gauge)?.add(&gauge.tau_sq_d_tau())?.sub(&lhs)?);
    for (i, el) in eigen.projectors.iter().enumerate() {
        for (j, em) in eigen.projectors.iter().enumerate() {
            if i != j {
                note(&transformed.a_series(order).sandwich(el, em));
            }
        }
    }
    let mut total = SeriesMatrix::zero(r, order);
    for (i, ei) in projectors.iter().enumerate() {
        total = total.add(ei)?;
        note(&conn.covariant_derivative(ei)?);
        if ei.coeff(0) != &eigen.projectors[i] {
            note(&SeriesMatrix::identity(r, order));
        }
        for (j, ej) in projectors.iter().enumerate() {
            let prod = ei.mul(ej)?;
            note(&if i == j { prod.sub(ei)? } else { prod });
        }
    }
    note(&total.sub(&SeriesMatrix::identity(r, order))?);
    Ok(bad.saturating_sub(1))
}
