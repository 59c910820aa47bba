//! Exact dense and sparse linear algebra over [`crate::scalar::Scalar`].
//!
//! Everything here is plain Gaussian elimination; the matrices involved stay
//! at desk scale (a few hundred rows), so no fraction-free or modular tricks
//! are needed. Exactness matters more than speed: ranks, nullspaces and
//! solves feed dimension counts that the rest of the crate treats as ground
//! truth.

use crate::scalar::{FieldSpec, Scalar};
use std::collections::BTreeMap;

/// Dense matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Mat {
        Mat {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Mat {
        let mut m = Mat::zero(n, n, field);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize, field: FieldSpec) -> Mat {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Mat {
            rows: n,
            cols,
            field,
            data,
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).add(&a.mul(b));
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.data[i].add(&other.data[i]);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.mul(s);
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // find a pivot row
            let mut pr = None;
            for i in r..self.rows {
                if !self.at(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            self.swap_rows(r, pr);
            let inv = self.at(r, c).inv();
            for j in c..self.cols {
                *self.at_mut(r, j) = self.at(r, j).mul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j).sub(&f.mul(self.at(r, j)));
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis (as rows) of `{ x : x * self = 0 }`, the left nullspace.
    pub fn left_nullspace(&self) -> Mat {
        self.transpose().right_nullspace()
    }

    /// Basis (as rows) of `{ x : self * x^T = 0 }`, i.e. vectors x with
    /// `self.mul(col(x)) = 0`; rows are the kernel coordinates.
    pub fn right_nullspace(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zero(free.len(), self.cols, self.field);
        for (k, &fc) in free.iter().enumerate() {
            *out.at_mut(k, fc) = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                *out.at_mut(k, pc) = m.at(r, fc).neg();
            }
        }
        out
    }

    /// Solves `x * self = rhs` row by row. Returns None when some row of
    /// `rhs` is outside the row space of `self`.
    pub fn solve_left(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.cols, rhs.cols);
        // Augment self^T with rhs^T and eliminate.
        let at = self.transpose();
        let bt = rhs.transpose();
        let mut aug = Mat::zero(at.rows, at.cols + bt.cols, self.field);
        for i in 0..at.rows {
            for j in 0..at.cols {
                *aug.at_mut(i, j) = at.at(i, j).clone();
            }
            for j in 0..bt.cols {
                *aug.at_mut(i, at.cols + j) = bt.at(i, j).clone();
            }
        }
        let pivots = aug.rref();
        // Any pivot in the rhs block means inconsistency.
        if pivots.iter().any(|&c| c >= at.cols) {
            return None;
        }
        let mut solt = Mat::zero(at.cols, bt.cols, self.field);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..bt.cols {
                *solt.at_mut(pc, j) = aug.at(r, at.cols + j).clone();
            }
        }
        Some(solt.transpose())
    }

    /// True when the matrix is square and of full rank.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// Sparse vector keyed by column index, used for spans over path spaces.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SVec {
    pub entries: BTreeMap<usize, Scalar>,
}

impl SVec {
    pub fn new() -> SVec {
        SVec::default()
    }

    pub fn singleton(col: usize, v: Scalar) -> SVec {
        let mut s = SVec::new();
        s.push(col, v);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, col: usize, v: Scalar) {
        if v.is_zero() {
            return;
        }
        match self.entries.get(&col) {
            Some(old) => {
                let sum = old.add(&v);
                if sum.is_zero() {
                    self.entries.remove(&col);
                } else {
                    self.entries.insert(col, sum);
                }
            }
            None => {
                self.entries.insert(col, v);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SVec, factor: &Scalar) {
        if factor.is_zero() {
            return;
        }
        for (c, v) in &other.entries {
            self.push(*c, v.mul(factor));
        }
    }

    pub fn scale(&mut self, factor: &Scalar) {
        for v in self.entries.values_mut() {
            *v = v.mul(factor);
        }
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(c, v)| (*c, v))
    }
}

/// Incrementally built row space with one normalized row per pivot column.
///
/// Rows are kept pivot-normalized but not inter-reduced; `reduce` repeatedly
/// eliminates pivotal columns of the query, which terminates because pivots
/// only increase along the elimination.
#[derive(Clone, Debug, Default)]
pub struct RowSpace {
    pub rows: BTreeMap<usize, SVec>,
}

impl RowSpace {
    pub fn new() -> RowSpace {
        RowSpace::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces a vector modulo the current span (eliminating every pivotal
    /// column, not only the leading one).
    pub fn reduce(&self, mut v: SVec) -> SVec {
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, s)| (*c, s.clone()));
            match hit {
                Some((c, coeff)) => {
                    let row = &self.rows[&c];
                    v.add_scaled(row, &coeff.neg());
                }
                None => return v,
            }
        }
    }

    /// Inserts a vector; returns the reduced row if it enlarged the span.
    pub fn insert(&mut self, v: SVec) -> Option<SVec> {
        let mut r = self.reduce(v);
        match r.leading() {
            None => None,
            Some((c, lead)) => {
                let inv = lead.inv();
                r.scale(&inv);
                self.rows.insert(c, r.clone());
                Some(r)
            }
        }
    }

    pub fn contains(&self, v: SVec) -> bool {
        self.reduce(v).is_zero()
    }
}
