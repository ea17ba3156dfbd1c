use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::bgamma::Level;
use super::intmat::{smith_normal_form, IntMatrix};
use super::ModuleDescription;
use crate::scalar::int_valuation;
use crate::{Error, Result};

/// A bounded cochain complex of free abelian groups,
/// `V^lo -> V^(lo+1) -> ... -> V^hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComplex {
    min_degree: i64,
    dims: Vec<usize>,
    /// `differentials[k]` maps degree `min_degree + k` to the next one.
    differentials: Vec<IntMatrix>,
}

impl GradedComplex {
    pub fn new(min_degree: i64, dims: Vec<usize>, differentials: Vec<IntMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::MalformedComplex("no degrees".into()));
        }
        if differentials.len() != dims.len() - 1 {
            return Err(Error::MalformedComplex(format!(
                "{} degrees need {} differentials, found {}",
                dims.len(),
                dims.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.rows() != dims[k + 1] || d.cols() != dims[k] {
                return Err(Error::MalformedComplex(format!(
                    "differential from degree {} is {}x{}, expected {}x{}",
                    min_degree + k as i64,
                    d.rows(),
                    d.cols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k].mul(&differentials[k - 1]).is_zero() {
                return Err(Error::MalformedComplex(format!("d^2 != 0 starting in degree {}", min_degree + k as i64 - 1)));
            }
        }
        Ok(GradedComplex { min_degree, dims, differentials })
    }

    /// A single group in one degree with zero differential.
    pub fn concentrated(degree: i64, dim: usize) -> Self {
        GradedComplex { min_degree: degree, dims: vec![dim], differentials: Vec::new() }
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.min_degree..=self.max_degree()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, q: i64) -> usize {
        if self.degrees().contains(&q) {
            self.dims[(q - self.min_degree) as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d: V^q -> V^(q+1)`, zero outside the stored range.
    pub fn differential(&self, q: i64) -> IntMatrix {
        if q >= self.min_degree && q < self.max_degree() {
            self.differentials[(q - self.min_degree) as usize].clone()
        } else {
            IntMatrix::zeros(self.dim(q + 1), self.dim(q))
        }
    }

    pub fn is_cocycle(&self, q: i64, v: &[BigInt]) -> bool {
        v.len() == self.dim(q) && self.differential(q).mul_vec(v).iter().all(Zero::is_zero)
    }
}

/// A complex with an automorphism `sigma` of order dividing `p^m` that
/// commutes with the differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantComplex {
    complex: GradedComplex,
    level: Level,
    sigma: Vec<IntMatrix>,
}

/// One summand `t^i V^q` or `t^i theta V^q` of an equivariant cochain group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub i: i64,
    pub theta: bool,
    pub q: i64,
}

impl Component {
    pub fn total_degree(self) -> i64 {
        2 * self.i + i64::from(self.theta) + self.q
    }
}

impl EquivariantComplex {
    pub fn new(complex: GradedComplex, level: Level, sigma: Vec<IntMatrix>) -> Result<Self> {
        if sigma.len() != complex.dims.len() {
            return Err(Error::MalformedComplex(format!("{} sigma matrices for {} degrees", sigma.len(), complex.dims.len())));
        }
        for (k, s) in sigma.iter().enumerate() {
            let n = complex.dims[k];
            if s.rows() != n || s.cols() != n {
                return Err(Error::MalformedComplex(format!("sigma in degree {} is not {n}x{n}", complex.min_degree + k as i64)));
            }
        }
        let out = EquivariantComplex { complex, level, sigma };
        for q in out.complex.degrees() {
            let lhs = out.complex.differential(q).mul(&out.sigma(q));
            let rhs = out.sigma(q + 1).mul(&out.complex.differential(q));
            if lhs != rhs {
                return Err(Error::MalformedComplex(format!("sigma does not commute with d in degree {q}")));
            }
            let order = level.order_u64().ok_or_else(|| Error::CapExceeded(format!("group order {}", level.order())))?;
            if out.sigma(q).pow(order) != IntMatrix::identity(out.complex.dim(q)) {
                return Err(Error::MalformedComplex(format!("sigma^{order} is not the identity in degree {q}")));
            }
        }
        Ok(out)
    }

    /// `sigma = 1` in every degree.
    pub fn trivial(complex: GradedComplex, level: Level) -> Self {
        let sigma = complex.dims.iter().map(|&n| IntMatrix::identity(n)).collect();
        EquivariantComplex { complex, level, sigma }
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn sigma(&self, q: i64) -> IntMatrix {
        if self.complex.degrees().contains(&q) {
            self.sigma[(q - self.complex.min_degree) as usize].clone()
        } else {
            IntMatrix::identity(0)
        }
    }

    /// `1 + sigma + ... + sigma^(p^m - 1)` on `V^q`.
    pub fn norm(&self, q: i64) -> IntMatrix {
        let s = self.sigma(q);
        let n = self.complex.dim(q);
        let mut power = IntMatrix::identity(n);
        let mut total = IntMatrix::zeros(n, n);
        for _ in 0..self.level.order_u64().expect("checked at construction") {
            total = total.add(&power);
            power = power.mul(&s);
        }
        total
    }

    /// Summands of the cochain group in total degree `degree`, in basis order.
    pub fn components(&self, degree: i64) -> Vec<Component> {
        let mut out = Vec::new();
        let (lo, hi) = (self.complex.min_degree, self.complex.max_degree());
        let i_max = Integer::div_floor(&(degree - lo), &2);
        for i in 0..=i_max.max(-1) {
            for theta in [false, true] {
                let q = degree - 2 * i - i64::from(theta);
                if (lo..=hi).contains(&q) && self.complex.dim(q) > 0 {
                    out.push(Component { i, theta, q });
                }
            }
        }
        out
    }

    pub fn cochain_dim(&self, degree: i64) -> usize {
        self.components(degree).iter().map(|c| self.complex.dim(c.q)).sum()
    }

    /// The equivariant differential as a matrix from degree `degree` to `degree + 1`.
    pub fn total_differential(&self, degree: i64) -> IntMatrix {
        let src = self.components(degree);
        let dst = self.components(degree + 1);
        let offsets = |comps: &[Component]| {
            let mut acc = 0;
            comps
                .iter()
                .map(|c| {
                    let o = acc;
                    acc += self.complex.dim(c.q);
                    (*c, o)
                })
                .collect::<BTreeMap<_, _>>()
        };
        let so = offsets(&src);
        let dof = offsets(&dst);
        let mut m = IntMatrix::zeros(self.cochain_dim(degree + 1), self.cochain_dim(degree));
        for (c, col) in &so {
            for (target, block) in self.component_differential(*c) {
                if let Some(row) = dof.get(&target) {
                    m.add_block(*row, *col, &block);
                }
            }
        }
        m
    }

    /// The pieces of `D` leaving one summand.
    fn component_differential(&self, c: Component) -> Vec<(Component, IntMatrix)> {
        let n = self.complex.dim(c.q);
        let d = self.complex.differential(c.q);
        if c.theta {
            vec![
                (Component { q: c.q + 1, ..c }, d.scale(&-BigInt::one())),
                (Component { i: c.i + 1, theta: false, q: c.q }, self.norm(c.q)),
            ]
        } else {
            vec![(Component { q: c.q + 1, ..c }, d), (Component { theta: true, ..c }, self.sigma(c.q).sub(&IntMatrix::identity(n)))]
        }
    }
}

/// A cochain of fixed total degree, stored by summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquivariantCochain {
    degree: i64,
    parts: BTreeMap<Component, Vec<BigInt>>,
}

impl EquivariantCochain {
    pub fn zero(degree: i64) -> Self {
        EquivariantCochain { degree, parts: BTreeMap::new() }
    }

    /// `t^i v` or `t^i theta v`.
    pub fn single(v_complex: &EquivariantComplex, c: Component, v: Vec<BigInt>) -> Result<Self> {
        let mut out = Self::zero(c.total_degree());
        out.add_part(v_complex, c, v)?;
        Ok(out)
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Component, &Vec<BigInt>)> {
        self.parts.iter()
    }

    pub fn part(&self, c: &Component) -> Option<&Vec<BigInt>> {
        self.parts.get(c)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add_part(&mut self, v_complex: &EquivariantComplex, c: Component, v: Vec<BigInt>) -> Result<()> {
        if c.total_degree() != self.degree || c.i < 0 {
            return Err(Error::MalformedComplex(format!("component {c:?} does not have total degree {}", self.degree)));
        }
        let n = v_complex.complex.dim(c.q);
        if v.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: v.len() });
        }
        self.add_unchecked(c, v);
        Ok(())
    }

    fn add_unchecked(&mut self, c: Component, v: Vec<BigInt>) {
        let entry = self.parts.entry(c).or_insert_with(|| vec![BigInt::zero(); v.len()]);
        for (a, b) in entry.iter_mut().zip(v) {
            *a += b;
        }
        if entry.iter().all(Zero::is_zero) {
            self.parts.remove(&c);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::PreconditionViolated(format!("degrees {} and {} differ", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (c, v) in &other.parts {
            out.add_unchecked(*c, v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.degree);
        for (c, v) in &self.parts {
            out.add_unchecked(*c, v.iter().map(|x| x * k).collect());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigInt::one()))
    }

    /// Coordinates in the basis of [`EquivariantComplex::components`].
    pub fn to_vector(&self, v_complex: &EquivariantComplex) -> Vec<BigInt> {
        let mut out = Vec::new();
        for c in v_complex.components(self.degree) {
            match self.parts.get(&c) {
                Some(v) => out.extend(v.iter().cloned()),
                None => out.extend(core::iter::repeat_n(BigInt::zero(), v_complex.complex.dim(c.q))),
            }
        }
        out
    }

    pub fn from_vector(v_complex: &EquivariantComplex, degree: i64, x: &[BigInt]) -> Result<Self> {
        let mut out = Self::zero(degree);
        let mut at = 0;
        for c in v_complex.components(degree) {
            let n = v_complex.complex.dim(c.q);
            let slice = x.get(at..at + n).ok_or(Error::SizeMismatch { expected: at + n, found: x.len() })?;
            out.add_unchecked(c, slice.to_vec());
            at += n;
        }
        if at != x.len() {
            return Err(Error::SizeMismatch { expected: at, found: x.len() });
        }
        Ok(out)
    }

    pub fn differential(&self, v_complex: &EquivariantComplex) -> Self {
        let mut out = Self::zero(self.degree + 1);
        for (c, v) in &self.parts {
            for (target, block) in v_complex.component_differential(*c) {
                if block.rows() > 0 {
                    out.add_unchecked(target, block.mul_vec(v));
                }
            }
        }
        out
    }

    pub fn is_cocycle(&self, v_complex: &EquivariantComplex) -> bool {
        self.differential(v_complex).is_zero()
    }

    /// Whether this is `D` of something, over the p-adic integers.
    pub fn is_coboundary(&self, v_complex: &EquivariantComplex) -> bool {
        let g = v_complex.total_differential(self.degree - 1);
        in_image_p_local(&g, &self.to_vector(v_complex), v_complex.level.p())
    }

    pub fn cohomologous(&self, other: &Self, v_complex: &EquivariantComplex) -> Result<bool> {
        Ok(self.sub(other)?.is_coboundary(v_complex))
    }
}

/// `x` lies in the image of `g` after inverting every prime except `p`.
fn in_image_p_local(g: &IntMatrix, x: &[BigInt], p: u64) -> bool {
    if g.cols() == 0 || g.rows() == 0 {
        return x.iter().all(Zero::is_zero);
    }
    let s = smith_normal_form(g);
    let z = s.u.mul_vec(x);
    let pb = BigInt::from(p);
    z.iter().enumerate().all(|(i, zi)| match s.divisors.get(i) {
        Some(d) => zi.is_zero() || int_valuation(zi, &pb) >= int_valuation(d, &pb),
        None => zi.is_zero(),
    })
}

/// Cohomology of `C^*(B(Z/p^m); V)` in each degree of `window`.
///
/// With `modulus = Some(n)` the answer is for coefficients `Z/p^n`,
/// assembled from the integral answer by the universal coefficient theorem.
pub fn equivariant_cohomology(
    v_complex: &EquivariantComplex,
    window: RangeInclusive<i64>,
    modulus: Option<u32>,
) -> Result<Vec<(i64, ModuleDescription)>> {
    if window.is_empty() {
        return Err(Error::WindowTooNarrow);
    }
    let p = v_complex.level.p();
    let integral = |d: i64| -> ModuleDescription {
        let f = v_complex.total_differential(d);
        let g = v_complex.total_differential(d - 1);
        let sf = smith_normal_form(&f);
        let sg = smith_normal_form(&g);
        let n = v_complex.cochain_dim(d);
        let pb = BigInt::from(p);
        let mut torsion: Vec<BigInt> = sg
            .divisors
            .iter()
            .map(|x| int_valuation(x, &pb))
            .filter(|&v| v > 0)
            .map(|v| num_traits::pow(pb.clone(), v as usize))
            .collect();
        torsion.sort();
        ModuleDescription { free_rank: n - sf.rank() - sg.rank(), torsion }
    };
    let mut out = Vec::new();
    for d in window {
        let h = integral(d);
        let module = match modulus {
            None => h,
            Some(nmod) => {
                let pn = num_traits::pow(BigInt::from(p), nmod as usize);
                let cap = |q: &BigInt| q.clone().min(pn.clone());
                let mut torsion: Vec<BigInt> = core::iter::repeat_n(pn.clone(), h.free_rank).collect();
                torsion.extend(h.torsion.iter().map(cap));
                torsion.extend(integral(d + 1).torsion.iter().map(cap));
                torsion.retain(|q| !q.is_one());
                torsion.sort();
                ModuleDescription { free_rank: 0, torsion }
            }
        };
        out.push((d, module));
    }
    Ok(out)
}

/// Restriction from `Z/p^(m+1)` to `Z/p^m` with coefficients:
/// `t^i v -> t^i v`, `t^i theta v -> t^i theta (v + sigma v + ... + sigma^(p-1) v)`.
///
/// Returns the complex with `sigma^p` as generator, and the image.
pub fn restrict_coefficients(v_complex: &EquivariantComplex, x: &EquivariantCochain) -> Result<(EquivariantComplex, EquivariantCochain)> {
    let below = v_complex
        .level
        .below()
        .ok_or_else(|| Error::PreconditionViolated(format!("cannot restrict below {}", v_complex.level)))?;
    let p = v_complex.level.p();
    let sigma = v_complex.sigma.iter().map(|s| s.pow(p)).collect();
    let restricted = EquivariantComplex { complex: v_complex.complex.clone(), level: below, sigma };
    let mut out = EquivariantCochain::zero(x.degree);
    for (c, v) in &x.parts {
        if c.theta {
            let s = v_complex.sigma(c.q);
            let mut acc = vec![BigInt::zero(); v.len()];
            let mut w = v.clone();
            for _ in 0..p {
                for (a, b) in acc.iter_mut().zip(&w) {
                    *a += b;
                }
                w = s.mul_vec(&w);
            }
            out.add_unchecked(*c, acc);
        } else {
            out.add_unchecked(*c, v.clone());
        }
    }
    Ok((restricted, out))
}
