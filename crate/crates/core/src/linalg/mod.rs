//! Dense linear algebra over a [`Field`].
//!
//! Elimination always takes the first nonzero entry of a column as pivot, so
//! `rref`, `kernel_basis` and `row_basis` are canonical.

mod support;

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::Field;

pub use support::{binomial, Combinations, SparseVector, SupportSet};

#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl FieldMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Result<FieldMatrix> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(Error::NotAnElement {
                value: bad as u64,
                order: field.order(),
            });
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<FieldMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".to_string()));
        }
        FieldMatrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// A 0-row matrix with `cols` columns.
    pub fn empty(field: &Field, cols: usize) -> FieldMatrix {
        FieldMatrix::zeros(field, 0, cols)
    }

    pub fn identity(field: &Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} rows",
                v.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.cols];
        for (r, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<FieldMatrix> {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    len: self.rows,
                });
            }
            data.extend_from_slice(self.row(r));
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        })
    }

    pub fn restrict_columns(&self, s: &SupportSet) -> Result<FieldMatrix> {
        self.select_columns(s.indices())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Result<FieldMatrix> {
        if let Some(&bad) = idx.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.cols,
            });
        }
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: idx.len(),
            data,
        })
    }

    /// Gauss-Jordan elimination in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            if inv != 1 {
                for v in &mut self.data[r * cols..(r + 1) * cols] {
                    *v = f.mul(*v, inv);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let pv = self.data[r * cols + j];
                    if pv != 0 {
                        let idx = i * cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(neg, pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.field, self.rows, self.cols, &mut self.data.clone())
    }

    /// Rank of the submatrix on the given columns, without allocating a
    /// new matrix object.
    pub fn rank_of_columns(&self, idx: &[usize]) -> usize {
        let mut buf = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            let row = self.row(r);
            buf.extend(idx.iter().map(|&c| row[c]));
        }
        rank_of(&self.field, self.rows, idx.len(), &mut buf)
    }

    /// Nonzero rows of the rref: a canonical basis of the row space.
    pub fn row_basis(&self) -> FieldMatrix {
        let Rref { matrix, pivots } = self.rref();
        let rank = pivots.len();
        FieldMatrix {
            field: self.field.clone(),
            rows: rank,
            cols: self.cols,
            data: matrix.data[..rank * self.cols].to_vec(),
        }
    }

    /// Basis K of the right kernel, `self * K^T = 0`, one row per free
    /// column with that column set to 1.
    pub fn kernel_basis(&self) -> FieldMatrix {
        let Rref { matrix, pivots } = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FieldMatrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * self.cols + fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                out.data[k * self.cols + pc] = f.neg(matrix.get(r, fc));
            }
        }
        out
    }

    /// Left kernel: rows y with `y * self = 0`.
    pub fn left_kernel_basis(&self) -> FieldMatrix {
        self.transpose().kernel_basis()
    }

    /// Solves `self * X = rhs` for X (cols x rhs.cols); `None` when
    /// inconsistent. Free variables are set to zero.
    pub fn solve_many(&self, rhs: &FieldMatrix) -> Result<Option<FieldMatrix>> {
        self.check_field(rhs)?;
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, matrix has {}",
                rhs.rows, self.rows
            )));
        }
        let aug = self.hstack(rhs)?;
        let Rref { matrix, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = FieldMatrix::zeros(&self.field, self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[pc * rhs.cols + j] = matrix.get(r, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        let rhs = FieldMatrix::new(&self.field, b.len(), 1, b.to_vec())?;
        Ok(self.solve_many(&rhs)?.map(|x| x.data))
    }

    /// Solves `X * self = target`.
    pub fn solve_left(&self, target: &FieldMatrix) -> Result<Option<FieldMatrix>> {
        if target.cols != self.cols {
            return Err(Error::Dimension(format!(
                "target has {} columns, matrix has {}",
                target.cols, self.cols
            )));
        }
        Ok(self
            .transpose()
            .solve_many(&target.transpose())?
            .map(|x| x.transpose()))
    }

    pub fn inverse(&self) -> Result<Option<FieldMatrix>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".to_string()));
        }
        if self.rank() < self.rows {
            return Ok(None);
        }
        self.solve_many(&FieldMatrix::identity(&self.field, self.rows))
    }

    /// True when every row of `other` lies in the row space of `self`.
    pub fn contains_rows_of(&self, other: &FieldMatrix) -> Result<bool> {
        self.check_field(other)?;
        if other.rows == 0 {
            return Ok(true);
        }
        if self.cols != other.cols {
            return Err(Error::Dimension("column counts differ".to_string()));
        }
        Ok(self.vstack(other)?.rank() == self.rank())
    }

    pub fn same_row_space(&self, other: &FieldMatrix) -> Result<bool> {
        Ok(self.contains_rows_of(other)? && other.contains_rows_of(self)?)
    }

    /// Canonical basis of rowspace(self) ∩ rowspace(other).
    pub fn row_space_intersection(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "intersection of {} and {} columns",
                self.cols, other.cols
            )));
        }
        if self.rows == 0 || other.rows == 0 {
            return Ok(FieldMatrix::empty(&self.field, self.cols));
        }
        let f = &self.field;
        let neg_other = FieldMatrix {
            field: f.clone(),
            rows: other.rows,
            cols: other.cols,
            data: other.data.iter().map(|&v| f.neg(v)).collect(),
        };
        let stacked = self.transpose().hstack(&neg_other.transpose())?;
        let kernel = stacked.kernel_basis();
        let coeffs = kernel.select_columns(&(0..self.rows).collect::<Vec<_>>())?;
        Ok(coeffs.mul(self)?.row_basis())
    }
}

/// Rank of a row-major `rows x cols` buffer; destroys the buffer.
pub(crate) fn rank_of(f: &Field, rows: usize, cols: usize, buf: &mut [u32]) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                buf.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(buf[r * cols + c]);
        for i in r + 1..rows {
            let v = buf[i * cols + c];
            if v == 0 {
                continue;
            }
            let factor = f.neg(f.mul(v, inv));
            for j in c..cols {
                let pv = buf[r * cols + j];
                if pv != 0 {
                    buf[i * cols + j] = f.add(buf[i * cols + j], f.mul(factor, pv));
                }
            }
        }
        r += 1;
    }
    r
}

/// Minimum-weight `e` with `h * e = s`, searching weights up to `w_max`.
///
/// Supports are tried in increasing weight and lexicographic order. Once all
/// lighter supports have failed, a consistent restricted system has exactly
/// one solution and it has full support, so the first hit is the answer.
/// Cost grows like C(n, w) per weight; meant for small instances.
pub fn min_weight_preimage(
    h: &FieldMatrix,
    s: &[u32],
    w_max: usize,
) -> Result<Option<SparseVector>> {
    if s.len() != h.rows {
        return Err(Error::Dimension(format!(
            "syndrome of length {} for {} rows",
            s.len(),
            h.rows
        )));
    }
    let n = h.cols;
    if s.iter().all(|&v| v == 0) {
        return Ok(Some(SparseVector::zero(n)));
    }
    let f = &h.field;
    let rows = h.rows;

    // weight one: s must be a multiple of a column
    if w_max >= 1 {
        let lead = s.iter().position(|&v| v != 0).unwrap();
        for c in 0..n {
            let hc = h.get(lead, c);
            if hc == 0 {
                continue;
            }
            let coef = f.div(s[lead], hc);
            if (0..rows).all(|r| f.mul(coef, h.get(r, c)) == s[r]) {
                return Ok(Some(SparseVector::from_entries(n, vec![(c, coef)])?));
            }
        }
    }

    let mut aug = Vec::new();
    for w in 2..=w_max.min(n) {
        let width = w + 1;
        let mut combos = Combinations::new(n, w);
        while let Some(support) = combos.next_subset() {
            aug.clear();
            for r in 0..rows {
                aug.extend(support.iter().map(|&c| h.get(r, c)));
                aug.push(s[r]);
            }
            if let Some(x) = solve_square_unique(f, rows, width, &mut aug) {
                if x.iter().all(|&v| v != 0) {
                    let entries = support.iter().copied().zip(x).collect();
                    return Ok(Some(SparseVector::from_entries(n, entries)?));
                }
            }
        }
    }
    Ok(None)
}

/// Solves an augmented `rows x width` system; `None` if inconsistent.
/// Free variables are zero.
fn solve_square_unique(f: &Field, rows: usize, width: usize, buf: &mut [u32]) -> Option<Vec<u32>> {
    let vars = width - 1;
    let mut pivots = Vec::with_capacity(vars);
    let mut r = 0;
    for c in 0..width {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| buf[i * width + c] != 0) else {
            continue;
        };
        if c == vars {
            return None;
        }
        if pr != r {
            for j in 0..width {
                buf.swap(pr * width + j, r * width + j);
            }
        }
        let inv = f.inv(buf[r * width + c]);
        for j in c..width {
            buf[r * width + j] = f.mul(buf[r * width + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let v = buf[i * width + c];
            if v == 0 {
                continue;
            }
            let neg = f.neg(v);
            for j in c..width {
                let pv = buf[r * width + j];
                if pv != 0 {
                    buf[i * width + j] = f.add(buf[i * width + j], f.mul(neg, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![0u32; vars];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = buf[row * width + vars];
    }
    Some(x)
}
