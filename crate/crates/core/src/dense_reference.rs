//! Classical single-shift implicit QZ on explicit matrices.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::givens::GivensRotation;
use crate::mat::CMat;
use crate::structured_qz::{run_qz, EigenResult, QzBackend, SolverOptions, SweepRotations};

/// Largest dimension accepted by the dense solver.
pub const DENSE_MAX_N: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrixPair {
    pub a: CMat,
    pub b: CMat,
}

impl DenseMatrixPair {
    pub fn new(a: CMat, b: CMat) -> Result<Self> {
        if a.rows() != a.cols() || b.shape() != a.shape() || a.rows() == 0 {
            return Err(Error::Structural(format!("pencil shapes {:?} and {:?}", a.shape(), b.shape())));
        }
        if a.rows() > DENSE_MAX_N {
            return Err(Error::Size(format!("dense path limited to N <= {DENSE_MAX_N}")));
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("non-finite matrix entries".into()));
        }
        Ok(DenseMatrixPair { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Largest entry below the first subdiagonal of `A`.
    pub fn hessenberg_defect(&self) -> f64 {
        below(&self.a, 2)
    }

    /// Largest entry below the diagonal of `B`.
    pub fn triangular_defect(&self) -> f64 {
        below(&self.b, 1)
    }
}

fn below(m: &CMat, offset: usize) -> f64 {
    let mut d = 0.0f64;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i >= j + offset {
                d = d.max(m[(i, j)].norm());
            }
        }
    }
    d
}

/// Sweep on rows/columns `lo..=hi`. Row rotations touch columns
/// `lo..col_end`, column rotations rows `row_start..`; the full-matrix sweep
/// uses `col_end = N`, `row_start = 0`.
fn sweep_range(a: &mut CMat, b: &mut CMat, lo: usize, hi: usize, alpha: C64, col_end: usize, row_start: usize) -> Result<SweepRotations> {
    let zero = C64::new(0.0, 0.0);
    let mut rot = SweepRotations { lo, q: Vec::with_capacity(hi - lo), z: Vec::with_capacity(hi - lo) };
    let num = |step: usize| move |e: Error| Error::Numerical { step, detail: e.to_string() };

    let (mut q, _) = GivensRotation::new(a[(lo, lo)] - alpha * b[(lo, lo)], a[(lo + 1, lo)]).map_err(num(lo))?;
    a.rotate_rows(lo, lo + 1, &q, lo, col_end);
    rot.q.push(q);
    for k in lo..hi {
        b.rotate_rows(k, k + 1, &q, k, col_end);
        let (z, _) = GivensRotation::zeroing_row_head(b[(k + 1, k)], b[(k + 1, k + 1)]).map_err(num(k))?;
        a.rotate_cols(k, k + 1, &z, row_start, (k + 3).min(hi + 1));
        b.rotate_cols(k, k + 1, &z, row_start, k + 2);
        b[(k + 1, k)] = zero;
        rot.z.push(z);
        if k + 1 < hi {
            let (qn, _) = GivensRotation::new(a[(k + 1, k)], a[(k + 2, k)]).map_err(num(k + 1))?;
            a.rotate_rows(k + 1, k + 2, &qn, k, col_end);
            a[(k + 2, k)] = zero;
            rot.q.push(qn);
            q = qn;
        }
    }
    Ok(rot)
}

/// One full-matrix sweep; returns the new pair and the rotations used.
pub fn dense_qz_sweep(pair: &DenseMatrixPair, alpha: C64) -> Result<(DenseMatrixPair, SweepRotations)> {
    let n = pair.n();
    if n < 2 {
        return Err(Error::Size(format!("a sweep needs N >= 2, got {n}")));
    }
    let scale = pair.a.max_abs().max(pair.b.max_abs()).max(1.0);
    if pair.hessenberg_defect() > 1e-12 * scale || pair.triangular_defect() > 1e-12 * scale {
        return Err(Error::Structural("input is not Hessenberg-triangular".into()));
    }
    let mut a = pair.a.clone();
    let mut b = pair.b.clone();
    let rot = sweep_range(&mut a, &mut b, 0, n - 1, alpha, n, 0)?;
    Ok((DenseMatrixPair { a, b }, rot))
}

/// Sweep restricted to the split-off window `lo..=hi`, with rotations applied
/// to full rows and columns so the result is `Q^* A Z`, `Q^* B Z`.
pub fn dense_qz_sweep_window(pair: &DenseMatrixPair, lo: usize, hi: usize, alpha: C64) -> Result<(DenseMatrixPair, SweepRotations)> {
    let n = pair.n();
    if n < 2 || hi >= n || lo >= hi {
        return Err(Error::Size(format!("invalid sweep window {lo}..={hi} for N = {n}")));
    }
    let mut a = pair.a.clone();
    let mut b = pair.b.clone();
    let rot = sweep_range(&mut a, &mut b, lo, hi, alpha, n, 0)?;
    Ok((DenseMatrixPair { a, b }, rot))
}

struct DenseBackend {
    a: CMat,
    b: CMat,
}

impl QzBackend for DenseBackend {
    fn n(&self) -> usize {
        self.a.rows()
    }
    fn sigma(&self, k: usize) -> C64 {
        self.a[(k + 1, k)]
    }
    fn zero_sigma(&mut self, k: usize) {
        self.a[(k + 1, k)] = C64::new(0.0, 0.0);
    }
    fn a_diag(&self, k: usize) -> C64 {
        self.a[(k, k)]
    }
    fn b_diag(&self, k: usize) -> C64 {
        self.b[(k, k)]
    }
    fn block(&self, hi: usize) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
        let k = hi - 1;
        (
            [[self.a[(k, k)], self.a[(k, hi)]], [self.a[(hi, k)], self.a[(hi, hi)]]],
            [[self.b[(k, k)], self.b[(k, hi)]], [C64::new(0.0, 0.0), self.b[(hi, hi)]]],
        )
    }
    fn sweep(&mut self, lo: usize, hi: usize, alpha: C64) -> Result<()> {
        sweep_range(&mut self.a, &mut self.b, lo, hi, alpha, hi + 1, lo).map(|_| ())
    }
}

/// Eigenvalues by dense QZ, sharing shift and deflation rules with the
/// structured driver. Only the active block is updated (eigenvalues only).
pub fn dense_eigenvalues(pair: &DenseMatrixPair, opts: &SolverOptions) -> Result<EigenResult> {
    let mut bk = DenseBackend { a: pair.a.clone(), b: pair.b.clone() };
    run_qz(&mut bk, opts)
}
