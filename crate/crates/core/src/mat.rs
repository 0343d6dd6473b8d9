use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;
use smallvec::SmallVec;

use crate::givens::GivensRotation;

/// Dense row-major complex matrix. Zero dimensions are allowed; products
/// through an empty inner dimension yield zero matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: SmallVec<[C64; 9]>,
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: SmallVec::from_elem(ZERO, rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn scalar(x: C64) -> Self {
        CMat { rows: 1, cols: 1, data: SmallVec::from_elem(x, 1) }
    }

    pub fn from_rows(rows: usize, cols: usize, data: &[C64]) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        CMat { rows, cols, data: SmallVec::from_slice(data) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = SmallVec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn row_vec(v: &[C64]) -> Self {
        Self::from_rows(1, v.len(), v)
    }

    pub fn col_vec(v: &[C64]) -> Self {
        Self::from_rows(v.len(), 1, v)
    }

    /// `e_1` of length `n` as a column.
    pub fn unit_col(n: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        if n > 0 {
            m.data[0] = ONE;
        }
        m
    }

    /// `[0; I_n]`, an `(n+1) x n` matrix.
    pub fn shifted_identity(n: usize) -> Self {
        let mut m = Self::zeros(n + 1, n);
        for i in 0..n {
            m[(i + 1, i)] = ONE;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        let c = self.cols;
        &mut self.data[i * c..(i + 1) * c]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.rows, "inner dimensions differ: {:?} * {:?}", self.shape(), o.shape());
        let mut out = CMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a == ZERO {
                    continue;
                }
                let orow = &o.data[l * o.cols..(l + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Product of a `1 x n` row with an `n x 1` column, as a scalar.
    pub fn dot(&self, o: &CMat) -> C64 {
        assert!(self.rows == 1 && o.cols == 1 && self.cols == o.rows);
        self.data.iter().zip(o.data.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, o: &CMat) -> CMat {
        assert_eq!(self.shape(), o.shape());
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        assert_eq!(self.shape(), o.shape());
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMat {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        let mut data = SmallVec::with_capacity(nr * nc);
        for i in r0..r0 + nr {
            let start = i * self.cols + c0;
            data.extend_from_slice(&self.data[start..start + nc]);
        }
        CMat { rows: nr, cols: nc, data }
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMat) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn hcat(&self, o: &CMat) -> CMat {
        assert_eq!(self.rows, o.rows, "hcat row mismatch");
        let mut data = SmallVec::with_capacity(self.rows * (self.cols + o.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(o.row(i));
        }
        CMat { rows: self.rows, cols: self.cols + o.cols, data }
    }

    pub fn vcat(&self, o: &CMat) -> CMat {
        assert_eq!(self.cols, o.cols, "vcat column mismatch");
        let mut data = SmallVec::with_capacity((self.rows + o.rows) * self.cols);
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&o.data);
        CMat { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Rows `i`, `j` replaced by `G^* [row_i; row_j]`, restricted to columns `c0..c1`.
    pub fn rotate_rows(&mut self, i: usize, j: usize, g: &GivensRotation, c0: usize, c1: usize) {
        let n = self.cols;
        for col in c0..c1 {
            let (x, y) = g.apply_adjoint(self.data[i * n + col], self.data[j * n + col]);
            self.data[i * n + col] = x;
            self.data[j * n + col] = y;
        }
    }

    /// Columns `i`, `j` replaced by `[col_i, col_j] G`, restricted to rows `r0..r1`.
    pub fn rotate_cols(&mut self, i: usize, j: usize, g: &GivensRotation, r0: usize, r1: usize) {
        let n = self.cols;
        for row in r0..r1 {
            let (x, y) = g.apply_right(self.data[row * n + i], self.data[row * n + j]);
            self.data[row * n + i] = x;
            self.data[row * n + j] = y;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, o: &CMat) -> f64 {
        assert_eq!(self.shape(), o.shape());
        self.data.iter().zip(&o.data).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `max |M M^* - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint()).max_abs_diff(&CMat::identity(self.rows))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
