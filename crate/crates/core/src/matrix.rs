//! Dense matrices over [`Scalar`] with exact elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Error, Result, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Matrix with a single `1` at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = Scalar::one();
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::SizeMismatch { expected: m, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols: m, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|x| x * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes differ");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right kernel, one vector per free column, with that free
    /// variable set to `1` and the other free variables `0`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b`, returning the solution whose free variables are
    /// zero, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| if j < self.cols { self[(i, j)].clone() } else { b[i].clone() });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    /// Reduces `b` against the column space: returns `b - self * x` for the
    /// unique `x` making the result vanish on the pivot rows of a
    /// column-echelon basis. Zero iff `b` lies in the column space.
    pub fn residual_mod_image(&self, b: &[Scalar]) -> Vec<Scalar> {
        // Row-reduce the transpose: its rows span the image.
        let (basis, pivots) = self.transpose().rref();
        let mut res = b.to_vec();
        for (row, &pc) in pivots.iter().enumerate() {
            let f = res[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (j, r) in res.iter_mut().enumerate() {
                *r -= &basis[(row, j)] * &f;
            }
        }
        res
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Row-major flattening.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Matrix of a linear map on `r x r` matrices in the row-major basis.
    pub fn of_linear_map(r: usize, f: impl Fn(&Matrix) -> Matrix) -> Matrix {
        let n = r * r;
        let mut out = Self::zeros(n, n);
        for c in 0..n {
            let image = f(&Self::unit(r, r, c / r, c % r));
            for (i, v) in image.data.into_iter().enumerate() {
                out[(i, c)] = v;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// A matrix as integer entries over one shared positive denominator.
///
/// Sums of many products accumulate here without a gcd per entry.
#[derive(Clone, Debug)]
pub(crate) struct ScaledMatrix {
    rows: usize,
    cols: usize,
    den: BigInt,
    num: Vec<BigInt>,
}

impl ScaledMatrix {
    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        ScaledMatrix { rows, cols, den: BigInt::one(), num: vec![BigInt::zero(); rows * cols] }
    }

    pub(crate) fn from_matrix(m: &Matrix) -> Self {
        let den = m.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = m.data.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        ScaledMatrix { rows: m.rows, cols: m.cols, den, num }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// `self += sign * a * b`.
    pub(crate) fn add_product(&mut self, a: &ScaledMatrix, b: &ScaledMatrix, negate: bool) {
        debug_assert_eq!((a.cols, self.rows, self.cols), (b.rows, a.rows, b.cols));
        if a.is_zero() || b.is_zero() {
            return;
        }
        let mut prod = vec![BigInt::zero(); self.rows * self.cols];
        for i in 0..a.rows {
            for l in 0..a.cols {
                let x = &a.num[i * a.cols + l];
                if x.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let y = &b.num[l * b.cols + j];
                    if !y.is_zero() {
                        prod[i * b.cols + j] += x * y;
                    }
                }
            }
        }
        if negate {
            for x in &mut prod {
                *x = -&*x;
            }
        }
        let pden = &a.den * &b.den;
        let g = self.den.gcd(&pden);
        let to_self = &pden / &g;
        let to_prod = &self.den / &g;
        for (s, q) in self.num.iter_mut().zip(prod) {
            *s = &*s * &to_self + q * &to_prod;
        }
        self.den = &self.den * to_self;
    }

    pub(crate) fn to_matrix(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.num.iter().map(|x| Scalar::new(x.clone(), self.den.clone()).expect("positive denominator")).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn inverse_of_small_matrix() {
        let a = Matrix::from_i64(&[&[2, 1], &[5, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64(&[&[3, -1], &[-5, 2]]));
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_and_solve() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = a.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(Scalar::is_zero));
        }
        let b = [Scalar::from_int(1), Scalar::from_int(2)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b.to_vec());
        assert!(a.solve(&[Scalar::one(), Scalar::one()]).is_none());
    }

    #[test]
    fn residual_detects_image() {
        let a = Matrix::from_i64(&[&[1, 0], &[0, 0], &[1, 0]]);
        let inside = [Scalar::from_int(3), Scalar::zero(), Scalar::from_int(3)];
        assert!(a.residual_mod_image(&inside).iter().all(Scalar::is_zero));
        let outside = [Scalar::zero(), Scalar::one(), Scalar::zero()];
        assert_eq!(a.residual_mod_image(&outside), outside.to_vec());
    }

    fn mat(n: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-6i64..6, n * n).prop_map(move |v| Matrix::from_vec(n, n, v.into_iter().map(Scalar::from_int).collect()))
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(a in mat(4)) {
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(a.mul(&inv), Matrix::identity(4));
                prop_assert_eq!(inv.mul(&a), Matrix::identity(4));
            } else {
                prop_assert!(a.rank() < 4);
            }
        }

        #[test]
        fn rank_nullity(a in mat(4)) {
            prop_assert_eq!(a.rank() + a.kernel().len(), 4);
        }
    }
}
