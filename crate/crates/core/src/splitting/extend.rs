use alloc::format;
use alloc::vec::Vec;

use crate::{ConnectionGerm, Error, Matrix, Result, Scalar, SeriesMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResonanceStatus {
    Unique,
    /// The order-`k` equation has no solution; `obstruction` is the part of
    /// the right-hand side left over after reducing modulo the image.
    Obstructed { order: usize, obstruction: Matrix },
    /// The first order whose operator has a kernel, and that kernel's dimension.
    NonUnique { order: usize, kernel_dimension: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceReport {
    pub status: ResonanceStatus,
    /// Kernel bases of `k + ad(A^1)` at every resonant order reached.
    pub kernels: Vec<(usize, Vec<Matrix>)>,
}

/// Extends `E^0` to a flat endomorphism of `tau^2 d/dtau + A^1 tau + A^2 tau^2 + ...`.
///
/// At order `k` this solves `(k + ad A^1) E^k = -sum_{i=2}^{k+1} [A^i, E^{k+1-i}]`.
/// Where the operator is singular the solution with free coordinates set
/// to zero is taken and the kernel is recorded. An obstruction ends the
/// computation; the returned series then stops at the last solved order.
pub fn extend_endomorphism(conn: &ConnectionGerm, e0: &Matrix, order: usize) -> Result<(SeriesMatrix, ResonanceReport)> {
    let r = conn.size();
    if e0.rows() != r || e0.cols() != r {
        return Err(Error::SizeMismatch { expected: r, found: e0.rows().max(e0.cols()) });
    }
    if !conn.a(0).is_zero() {
        return Err(Error::PreconditionViolated("the leading term A^0 must vanish".into()));
    }
    let a1 = conn.a(1);
    let c = a1.commutator(e0);
    if !c.is_zero() {
        return Err(Error::PreconditionViolated(format!("[A^1, E^0] = {c} is nonzero")));
    }
    let a: Vec<Matrix> = (0..=order + 1).map(|k| conn.a(k)).collect();
    let mut e = alloc::vec![e0.clone()];
    let mut status = ResonanceStatus::Unique;
    let mut kernels = Vec::new();
    for k in 1..=order {
        let mut rhs = Matrix::zeros(r, r);
        for i in 2..=k + 1 {
            if !a[i].is_zero() {
                rhs = rhs.sub(&a[i].commutator(&e[k + 1 - i]));
            }
        }
        let kk = Scalar::from_int(k as i64);
        let op = Matrix::of_linear_map(r, |x| x.scale(&kk).add(&a1.commutator(x)));
        let b = rhs.to_vec();
        match op.solve(&b) {
            Some(x) => {
                let kernel = op.kernel();
                if !kernel.is_empty() {
                    if status == ResonanceStatus::Unique {
                        status = ResonanceStatus::NonUnique { order: k, kernel_dimension: kernel.len() };
                    }
                    kernels.push((k, kernel.into_iter().map(|v| Matrix::from_vec(r, r, v)).collect()));
                }
                e.push(Matrix::from_vec(r, r, x));
            }
            None => {
                let obstruction = Matrix::from_vec(r, r, op.residual_mod_image(&b));
                let series = SeriesMatrix::from_coeffs(e)?;
                return Ok((series, ResonanceReport { status: ResonanceStatus::Obstructed { order: k, obstruction }, kernels }));
            }
        }
    }
    Ok((SeriesMatrix::from_coeffs(e)?, ResonanceReport { status, kernels }))
}
