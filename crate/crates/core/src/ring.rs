//! Small quantum cohomology rings and the connection on a degree slice.
//!
//! Classes have even degrees and `q` has degree 2, so `x_i * x_j` may
//! contain `q^e x_k` only when `|x_i| + |x_j| = |x_k| + 2e` with `e >= 0`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{ConnectionGerm, Convention, Error, Matrix, Result, Scalar};

/// A finite combination `sum c q^e x_i`, keyed by `(i, e)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QElement(BTreeMap<(usize, i64), Scalar>);

impl QElement {
    pub fn zero() -> Self {
        QElement(BTreeMap::new())
    }

    /// `c q^e x_i`.
    pub fn term(i: usize, e: i64, c: Scalar) -> Self {
        let mut out = Self::zero();
        out.add_term(i, e, c);
        out
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, 0, Scalar::one())
    }

    pub fn add_term(&mut self, i: usize, e: i64, c: Scalar) {
        let entry = self.0.entry((i, e)).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&(i, e));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64, &Scalar)> {
        self.0.iter().map(|(&(i, e), c)| (i, e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &QElement) -> QElement {
        let mut out = self.clone();
        for (i, e, c) in other.terms() {
            out.add_term(i, e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QElement) -> QElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> QElement {
        let mut out = Self::zero();
        for (i, e, a) in self.terms() {
            out.add_term(i, e, a * c);
        }
        out
    }

    /// Multiplies by `q^s`.
    pub fn shift_q(&self, s: i64) -> QElement {
        QElement(self.0.iter().map(|(&(i, e), c)| ((i, e + s), c.clone())).collect())
    }

    /// Coefficient of `q^e x_i`.
    pub fn coeff(&self, i: usize, e: i64) -> Scalar {
        self.0.get(&(i, e)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `max(0, -min q-exponent)`.
    pub fn pole_order(&self) -> i64 {
        self.terms().map(|(_, e, _)| -e).max().unwrap_or(0).max(0)
    }

    pub fn display_with<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a {
        DisplayQ { x: self, labels }
    }
}

struct DisplayQ<'a> {
    x: &'a QElement,
    labels: &'a [String],
}

impl fmt::Display for DisplayQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            return f.write_str("0");
        }
        for (n, (i, e, c)) in self.x.terms().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            if e != 0 {
                write!(f, "*q^{e}")?;
            }
            match self.labels.get(i) {
                Some(l) => write!(f, "*{l}")?,
                None => write!(f, "*x{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisClass {
    pub label: String,
    pub degree: i64,
}

/// One declared product `x_i * x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub value: QElement,
}

/// Ring data as read from a file, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingData {
    pub name: String,
    pub dim_c: i64,
    pub basis: Vec<BasisClass>,
    pub unit: usize,
    pub c1: QElement,
    pub products: Vec<ProductEntry>,
    /// Optional declared idempotents (with q-powers).
    pub idempotents: Vec<QElement>,
}

/// A validated ring with its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumRingSlice {
    data: RingData,
    table: Vec<Vec<QElement>>,
}

pub fn validate_ring(data: RingData) -> Result<QuantumRingSlice> {
    let r = data.basis.len();
    if r == 0 {
        return Err(Error::MalformedRing("empty basis".into()));
    }
    for (i, b) in data.basis.iter().enumerate() {
        if b.degree % 2 != 0 {
            return Err(Error::GradingViolation(format!("class {} ({i}) has odd degree {}", b.label, b.degree)));
        }
    }
    if data.unit >= r {
        return Err(Error::MalformedRing(format!("unit index {} out of range", data.unit)));
    }
    let in_range = |x: &QElement| x.terms().all(|(i, _, _)| i < r);
    let mut table: Vec<Vec<Option<QElement>>> = vec![vec![None; r]; r];
    for p in &data.products {
        if p.i >= r || p.j >= r || !in_range(&p.value) {
            return Err(Error::MalformedRing(format!("product ({}, {}) refers to a missing class", p.i, p.j)));
        }
        for (a, b) in [(p.i, p.j), (p.j, p.i)] {
            match &table[a][b] {
                Some(prev) if prev != &p.value => {
                    return Err(Error::MalformedRing(format!("product ({a}, {b}) declared twice with different values")));
                }
                _ => table[a][b] = Some(p.value.clone()),
            }
        }
    }
    let mut full = Vec::with_capacity(r);
    for (i, row) in table.into_iter().enumerate() {
        let mut out = Vec::with_capacity(r);
        for (j, v) in row.into_iter().enumerate() {
            out.push(v.ok_or_else(|| Error::MalformedRing(format!("product ({i}, {j}) is not declared")))?);
        }
        full.push(out);
    }
    let deg = |i: usize| data.basis[i].degree;
    for (i, row) in full.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            for (k, e, _) in x.terms() {
                if e < 0 || deg(i) + deg(j) != deg(k) + 2 * e {
                    return Err(Error::GradingViolation(format!(
                        "{} * {} contains q^{e} {}: degrees {} + {} vs {} + 2*{e}",
                        data.basis[i].label,
                        data.basis[j].label,
                        data.basis[k].label,
                        deg(i),
                        deg(j),
                        deg(k)
                    )));
                }
            }
        }
    }
    if !in_range(&data.c1) || data.idempotents.iter().any(|x| !in_range(x)) {
        return Err(Error::MalformedRing("c1 or an idempotent refers to a missing class".into()));
    }
    for (k, e, _) in data.c1.terms() {
        if e != 0 || deg(k) != 2 {
            return Err(Error::GradingViolation(format!("c1 has a term q^{e} {} of degree {}", data.basis[k].label, deg(k))));
        }
    }
    for (j, x) in full[data.unit].iter().enumerate() {
        if *x != QElement::basis(j) {
            return Err(Error::UnitFailure(format!("{} * {} is not {}", data.basis[data.unit].label, data.basis[j].label, data.basis[j].label)));
        }
    }
    let ring = QuantumRingSlice { data, table: full };
    for i in 0..r {
        for j in 0..r {
            let ij = &ring.table[i][j];
            for k in 0..r {
                let left = ring.mul(ij, &QElement::basis(k));
                let right = ring.mul(&QElement::basis(i), &ring.table[j][k]);
                if left != right {
                    return Err(Error::AssociativityFailure(i, j, k));
                }
            }
        }
    }
    Ok(ring)
}

/// Verdict on a candidate idempotent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentCheck {
    pub is_idempotent: bool,
    /// The q-pole order.
    pub alpha: i64,
}

/// Checks on a declared family of idempotents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentSetReport {
    pub each: Vec<IdempotentCheck>,
    pub sums_to_unit: bool,
    pub orthogonal: bool,
}

impl IdempotentSetReport {
    pub fn is_full_set(&self) -> bool {
        self.sums_to_unit && self.orthogonal && self.each.iter().all(|c| c.is_idempotent)
    }
}

impl QuantumRingSlice {
    pub fn data(&self) -> &RingData {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.data.basis.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.data.basis.iter().map(|b| b.label.clone()).collect()
    }

    /// `x_i * x_j`.
    pub fn product(&self, i: usize, j: usize) -> &QElement {
        &self.table[i][j]
    }

    pub fn unit(&self) -> QElement {
        QElement::basis(self.data.unit)
    }

    pub fn mul(&self, a: &QElement, b: &QElement) -> QElement {
        let mut out = QElement::zero();
        for (i, e, c) in a.terms() {
            for (j, f, d) in b.terms() {
                let cd = c * d;
                for (k, g, n) in self.table[i][j].terms() {
                    out.add_term(k, e + f + g, &cd * n);
                }
            }
        }
        out
    }

    pub fn idempotent_pole_order(&self, x: &QElement) -> IdempotentCheck {
        IdempotentCheck { is_idempotent: &self.mul(x, x) == x, alpha: x.pole_order() }
    }

    pub fn check_idempotent_set(&self, xs: &[QElement]) -> IdempotentSetReport {
        let each = xs.iter().map(|x| self.idempotent_pole_order(x)).collect();
        let total = xs.iter().fold(QElement::zero(), |acc, x| acc.add(x));
        let orthogonal = xs
            .iter()
            .enumerate()
            .all(|(i, x)| xs.iter().enumerate().all(|(j, y)| i == j || self.mul(x, y).is_zero()));
        IdempotentSetReport { each, sums_to_unit: total == self.unit(), orthogonal }
    }

    /// The connection `-tau^2 d/dtau + q^-1 c1 * . + tau (d - Gr)/2` on the
    /// classes of total degree `d`.
    ///
    /// Each class `x_i` contributes `q^((d - |x_i|)/2) x_i`; the slice is
    /// ordered by q-exponent (descending), then basis index.
    pub fn build_connection(&self, d: i64) -> Result<DegreeSliceConnection> {
        if d % 2 != 0 {
            return Err(Error::EmptySlice(d));
        }
        let mut slice: Vec<(usize, i64)> =
            self.data.basis.iter().enumerate().map(|(i, b)| (i, (d - b.degree) / 2)).collect();
        slice.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let n = slice.len();
        let position = |i: usize| slice.iter().position(|&(k, _)| k == i).expect("every class is in the slice");
        let mut a0 = Matrix::zeros(n, n);
        for (col, &(i, e)) in slice.iter().enumerate() {
            let image = self.mul(&self.data.c1, &QElement::term(i, e - 1, Scalar::one()));
            for (k, f, c) in image.terms() {
                let row = position(k);
                debug_assert_eq!(f, slice[row].1);
                a0[(row, col)] += c;
            }
        }
        let a1 = Matrix::diagonal(
            &slice.iter().map(|&(i, _)| Scalar::ratio(d - self.data.basis[i].degree, 2)).collect::<Vec<_>>(),
        );
        let labels = slice
            .iter()
            .map(|&(i, e)| match e {
                0 => self.data.basis[i].label.clone(),
                _ => format!("q^{e}*{}", self.data.basis[i].label),
            })
            .collect();
        Ok(DegreeSliceConnection { degree: d, slice, labels, connection: ConnectionGerm::new(Convention::Minus, vec![a0, a1])? })
    }
}

/// The connection on one degree slice, in the minus convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSliceConnection {
    pub degree: i64,
    /// `(class index, q-exponent)` for each slice basis vector.
    pub slice: Vec<(usize, i64)>,
    pub labels: Vec<String>,
    pub connection: ConnectionGerm,
}

fn class(label: &str, degree: i64) -> BasisClass {
    BasisClass { label: label.into(), degree }
}

fn entry(i: usize, j: usize, value: QElement) -> ProductEntry {
    ProductEntry { i, j, value }
}

/// `H^*(CP^1)`: classes `1, h`, `h * h = q^2`, `c1 = 2h`.
pub fn cp1_ring() -> RingData {
    let half = Scalar::ratio(1, 2);
    let idem = |s: i64| QElement::term(0, 0, half.clone()).add(&QElement::term(1, -1, Scalar::ratio(s, 2)));
    RingData {
        name: "cp1".into(),
        dim_c: 1,
        basis: vec![class("1", 0), class("h", 2)],
        unit: 0,
        c1: QElement::term(1, 0, Scalar::from_int(2)),
        products: vec![
            entry(0, 0, QElement::basis(0)),
            entry(0, 1, QElement::basis(1)),
            entry(1, 1, QElement::term(0, 2, Scalar::one())),
        ],
        idempotents: vec![idem(1), idem(-1)],
    }
}

/// The ring of a point.
pub fn point_ring() -> RingData {
    RingData {
        name: "point".into(),
        dim_c: 0,
        basis: vec![class("1", 0)],
        unit: 0,
        c1: QElement::zero(),
        products: vec![entry(0, 0, QElement::basis(0))],
        idempotents: vec![QElement::basis(0)],
    }
}

/// Span of `1, e, pt` in the blown-up four-torus: `e * e = q e - pt`,
/// `e * pt = pt * pt = 0`, `c1 = -e`.
pub fn blowup_slice_ring() -> RingData {
    RingData {
        name: "blowup".into(),
        dim_c: 2,
        basis: vec![class("1", 0), class("e", 2), class("pt", 4)],
        unit: 0,
        c1: QElement::term(1, 0, Scalar::from_int(-1)),
        products: vec![
            entry(0, 0, QElement::basis(0)),
            entry(0, 1, QElement::basis(1)),
            entry(0, 2, QElement::basis(2)),
            entry(1, 1, QElement::term(1, 1, Scalar::one()).add(&QElement::term(2, 0, Scalar::from_int(-1)))),
            entry(1, 2, QElement::zero()),
            entry(2, 2, QElement::zero()),
        ],
        idempotents: Vec::new(),
    }
}
