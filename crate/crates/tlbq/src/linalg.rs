//! Dense exact linear algebra over any field implementing [`Field`].

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::qfield::{GaussRat, RatFunc};

/// The scalar interface used by matrices: exact field arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

impl Field for GaussRat {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

impl Field for RatFunc {
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Mat<G>, E> {
        Ok(Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.clone() * c)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    /// Matrix product, skipping zero entries of both factors.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out: Mat<F> = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * o.cols + j;
                        out.data[idx] = out.data[idx].clone() + &(a.clone() * b);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + &(a.clone() * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ o`; the index of `(i, k)` is `i·dim(o) + k`.
    pub fn kron(&self, o: &Self) -> Self {
        let mut out: Mat<F> = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            out.set(i * o.rows + k, j * o.cols + l, a.clone() * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = det * &piv;
            let inv = piv.inverse().expect("nonzero pivot");
            for r in c + 1..n {
                let f = m.get(r, c).clone() * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = m.get(r, k).clone() - &(f.clone() * m.get(c, k));
                    m.set(r, k, v);
                }
            }
        }
        det
    }

    /// Determinant by fraction-free Bareiss elimination: every intermediate
    /// entry is a minor of the input, and each division is exact.
    pub fn det_bareiss(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut m = self.clone();
        let mut sign = F::one();
        let mut prev = F::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                    return F::zero();
                };
                m.swap_rows(p, k);
                sign = -sign;
            }
            let pivot = m.get(k, k).clone();
            let prev_inv = prev.inverse().expect("previous pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (pivot.clone() * m.get(i, j) - &(m.get(i, k).clone() * m.get(k, j))) * &prev_inv;
                    m.set(i, j, v);
                }
                m.set(i, k, F::zero());
            }
            prev = pivot;
        }
        sign * m.get(n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank by row reduction.
    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.cols);
        for i in 0..self.rows {
            basis.insert(self.row(i).to_vec());
        }
        basis.dim()
    }

    /// A basis of the right null space `{x : self·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut basis = RowBasis::new(self.cols);
        for i in 0..self.rows {
            basis.insert(self.row(i).to_vec());
        }
        let pivots: Vec<usize> = basis.rows.iter().map(|(p, _)| *p).collect();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![F::zero(); self.cols];
            x[free] = F::one();
            for (p, row) in &basis.rows {
                x[*p] = -row[free].clone();
            }
            out.push(x);
        }
        out
    }

    /// Render as CSV with the given cell formatter.
    pub fn to_csv(&self, cell: impl Fn(&F) -> String) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(&cell).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// An incrementally built basis of a row space, kept in reduced echelon form
/// (each stored row has a unit pivot and zeros at every other row's pivot).
#[derive(Clone, Debug)]
pub struct RowBasis<F> {
    len: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> RowBasis<F> {
    pub fn new(len: usize) -> Self {
        RowBasis { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the stored rows.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - &(f.clone() * r);
                }
            }
        }
        v
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Add `v`; returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse().expect("nonzero pivot");
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * &inv;
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - &(f.clone() * r);
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::parse_ratfunc;

    fn g(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn determinants_agree() {
        let m = Mat::from_rows(vec![vec![g(2), g(1), g(3)], vec![g(0), g(4), g(1)], vec![g(5), g(2), g(0)]]);
        assert_eq!(m.det(), g(-59));
        assert_eq!(m.det_bareiss(), g(-59));
        let z = Mat::from_rows(vec![vec![g(0), g(1)], vec![g(0), g(2)]]);
        assert_eq!(z.det_bareiss(), g(0));
    }

    #[test]
    fn symbolic_bareiss() {
        let rf = |s: &str| parse_ratfunc(s).unwrap();
        let m = Mat::from_rows(vec![vec![rf("s"), rf("Q")], vec![rf("Q"), rf("s")]]);
        assert_eq!(m.det_bareiss(), rf("s^2 - Q^2"));
        assert_eq!(m.det(), rf("s^2 - Q^2"));
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Mat::from_rows(vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(m.apply(&x).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn kron_of_identities() {
        let a: Mat<GaussRat> = Mat::identity(2);
        assert_eq!(a.kron(&Mat::identity(3)), Mat::identity(6));
    }
}
