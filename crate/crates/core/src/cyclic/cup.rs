use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::complex::{Component, EquivariantCochain, EquivariantComplex, GradedComplex};
use super::intmat::IntMatrix;
use crate::{Error, Result};

/// Offset of the block `V^a (x) W^(n-a)` inside `(V (x) W)^n`.
fn block_offset(v: &GradedComplex, w: &GradedComplex, a: i64, n: i64) -> usize {
    v.degrees().filter(|&x| x < a).map(|x| v.dim(x) * w.dim(n - x)).sum()
}

fn tensor_dim(v: &GradedComplex, w: &GradedComplex, n: i64) -> usize {
    v.degrees().map(|x| v.dim(x) * w.dim(n - x)).sum()
}

fn kron_vec(x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
    x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
}

/// `V (x) W` with `d(v (x) w) = dv (x) w + (-1)^|v| v (x) dw` and diagonal `sigma`.
///
/// The basis of `(V (x) W)^n` runs over `V^a (x) W^(n-a)` for increasing
/// `a`, each block in Kronecker order.
pub fn tensor_product(v: &EquivariantComplex, w: &EquivariantComplex) -> Result<EquivariantComplex> {
    if v.level() != w.level() {
        return Err(Error::PreconditionViolated(format!("complexes over {} and {}", v.level(), w.level())));
    }
    let (vc, wc) = (v.complex(), w.complex());
    let lo = vc.min_degree() + wc.min_degree();
    let hi = vc.max_degree() + wc.max_degree();
    let dims: Vec<usize> = (lo..=hi).map(|n| tensor_dim(vc, wc, n)).collect();
    let mut differentials = Vec::new();
    for n in lo..hi {
        let mut d = IntMatrix::zeros(tensor_dim(vc, wc, n + 1), tensor_dim(vc, wc, n));
        for a in vc.degrees() {
            let b = n - a;
            if vc.dim(a) * wc.dim(b) == 0 {
                continue;
            }
            let col = block_offset(vc, wc, a, n);
            if vc.dim(a + 1) > 0 {
                let block = vc.differential(a).kron(&IntMatrix::identity(wc.dim(b)));
                d.add_block(block_offset(vc, wc, a + 1, n + 1), col, &block);
            }
            if wc.dim(b + 1) > 0 {
                let sign = if a % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let block = IntMatrix::identity(vc.dim(a)).kron(&wc.differential(b)).scale(&sign);
                d.add_block(block_offset(vc, wc, a, n + 1), col, &block);
            }
        }
        differentials.push(d);
    }
    let sigma = (lo..=hi)
        .map(|n| {
            let blocks: Vec<IntMatrix> = vc
                .degrees()
                .filter(|&a| vc.dim(a) * wc.dim(n - a) > 0)
                .map(|a| v.sigma(a).kron(&w.sigma(n - a)))
                .collect();
            IntMatrix::direct_sum(&blocks)
        })
        .collect();
    EquivariantComplex::new(GradedComplex::new(lo, dims, differentials)?, v.level(), sigma)
}

/// Cup product `C^*(V) (x) C^*(W) -> C^*(V (x) W)`:
///
/// ```text
/// t^j v       x t^k w       ->  t^(j+k) (v (x) w)
/// t^j theta v x t^k w       ->  t^(j+k) theta (v (x) sigma w)
/// t^j v       x t^k theta w ->  (-1)^|v| t^(j+k) theta (v (x) w)
/// t^j theta v x t^k theta w ->  (-1)^|v| t^(j+k+1) sum_{r<s} sigma^r v (x) sigma^s w
/// ```
///
/// The result lives in [`tensor_product`]`(v, w)`.
pub fn coefficient_cup(v: &EquivariantComplex, w: &EquivariantComplex, a: &EquivariantCochain, b: &EquivariantCochain) -> Result<EquivariantCochain> {
    if v.level() != w.level() {
        return Err(Error::PreconditionViolated(format!("complexes over {} and {}", v.level(), w.level())));
    }
    let (vc, wc) = (v.complex(), w.complex());
    let total = a.degree() + b.degree();
    let order = v.level().order_u64().ok_or_else(|| Error::CapExceeded(format!("group order {}", v.level().order())))?;
    let mut parts: Vec<(Component, Vec<BigInt>)> = Vec::new();
    for (ca, x) in a.parts() {
        for (cb, y) in b.parts() {
            let q = ca.q + cb.q;
            let sign = if ca.q % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let (target, tensor) = match (ca.theta, cb.theta) {
                (false, false) => (Component { i: ca.i + cb.i, theta: false, q }, kron_vec(x, y)),
                (true, false) => (Component { i: ca.i + cb.i, theta: true, q }, kron_vec(x, &w.sigma(cb.q).mul_vec(y))),
                (false, true) => {
                    let t = kron_vec(x, y).into_iter().map(|c| c * &sign).collect();
                    (Component { i: ca.i + cb.i, theta: true, q }, t)
                }
                (true, true) => {
                    let sv = v.sigma(ca.q);
                    let sw = w.sigma(cb.q);
                    // sum over s of (v + ... + sigma^(s-1) v) (x) sigma^s w
                    let mut partial = vec![BigInt::zero(); x.len()];
                    let mut vr = x.clone();
                    let mut ws = y.clone();
                    let mut acc = vec![BigInt::zero(); x.len() * y.len()];
                    for _ in 1..order {
                        for (p, c) in partial.iter_mut().zip(&vr) {
                            *p += c;
                        }
                        vr = sv.mul_vec(&vr);
                        ws = sw.mul_vec(&ws);
                        for (s, c) in acc.iter_mut().zip(kron_vec(&partial, &ws)) {
                            *s += c;
                        }
                    }
                    let t = acc.into_iter().map(|c| c * &sign).collect();
                    (Component { i: ca.i + cb.i + 1, theta: false, q }, t)
                }
            };
            parts.push((target, embed(vc, wc, ca.q, cb.q, tensor)));
        }
    }
    let product = tensor_product(v, w)?;
    let mut out = EquivariantCochain::zero(total);
    for (c, vec) in parts {
        out.add_part(&product, c, vec)?;
    }
    Ok(out)
}

/// Place a vector of `V^a (x) W^b` into `(V (x) W)^(a+b)`.
fn embed(v: &GradedComplex, w: &GradedComplex, a: i64, b: i64, x: Vec<BigInt>) -> Vec<BigInt> {
    let n = a + b;
    let mut out = vec![BigInt::zero(); tensor_dim(v, w, n)];
    let off = block_offset(v, w, a, n);
    for (k, c) in x.into_iter().enumerate() {
        out[off + k] = c;
    }
    out
}
