//! Structured implicit single-shift QZ on pencil generators.

mod driver;
mod policy;
mod sweep;

use num_complex::Complex64 as C64;

use crate::compression::compress_pencil;
use crate::error::{Error, Result};
use crate::givens::GivensRotation;
use crate::mat::CMat;
use crate::qs_core::PencilGenerators;

pub(crate) use driver::{run_qz, QzBackend};
pub use policy::{exceptional_shift, is_negligible_subdiagonal, wilkinson_shift_2x2};
pub use sweep::sweep_window;

/// Generalized eigenvalue `alpha / beta`; `beta = 0` marks an infinite eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub alpha: C64,
    pub beta: C64,
}

impl Eigenvalue {
    pub fn is_infinite(&self) -> bool {
        self.beta == C64::new(0.0, 0.0)
    }

    /// `alpha / beta`, or `None` when infinite.
    pub fn value(&self) -> Option<C64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.alpha / self.beta)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deflation {
    pub position: usize,
    pub after_sweeps: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EigenResult {
    /// Eigenvalues by diagonal position; `None` only in partial results.
    pub eigenvalues: Vec<Option<Eigenvalue>>,
    /// Sweeps spent before each eigenvalue deflated, by position.
    pub iterations: Vec<usize>,
    pub total_sweeps: usize,
    pub deflations: Vec<Deflation>,
}

impl EigenResult {
    pub fn finite_values(&self) -> Vec<C64> {
        self.eigenvalues.iter().flatten().filter_map(Eigenvalue::value).collect()
    }

    pub fn infinite_count(&self) -> usize {
        self.eigenvalues.iter().flatten().filter(|e| e.is_infinite()).count()
    }

    pub fn average_iterations(&self) -> f64 {
        if self.eigenvalues.is_empty() {
            0.0
        } else {
            self.total_sweeps as f64 / self.eigenvalues.len() as f64
        }
    }

    pub fn is_complete(&self) -> bool {
        self.eigenvalues.iter().all(Option::is_some)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub max_iter_per_eig: usize,
    pub tol_a: f64,
    pub tol_b: f64,
    pub exceptional_period: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iter_per_eig: 30, tol_a: f64::EPSILON, tol_b: f64::EPSILON, exceptional_period: 12 }
    }
}

/// Rotations of one sweep on a window starting at `lo`: `q[i]` acts on rows
/// `lo+i, lo+i+1`, `z[i]` on columns `lo+i, lo+i+1`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepRotations {
    pub lo: usize,
    pub q: Vec<GivensRotation>,
    pub z: Vec<GivensRotation>,
}

impl SweepRotations {
    /// Dense `Q = Q_1 Q_2 ...` and `Z = Z_1 Z_2 ...` of size `n`.
    pub fn accumulate(&self, n: usize) -> (CMat, CMat) {
        let mut q = CMat::identity(n);
        let mut z = CMat::identity(n);
        for (i, g) in self.q.iter().enumerate() {
            q.rotate_cols(self.lo + i, self.lo + i + 1, g, 0, n);
        }
        for (i, g) in self.z.iter().enumerate() {
            z.rotate_cols(self.lo + i, self.lo + i + 1, g, 0, n);
        }
        (q, z)
    }
}

/// One sweep over the whole pencil followed by compression of `V` and `U`.
pub fn qz_sweep(gen: &PencilGenerators, alpha: C64, capture: bool) -> Result<(PencilGenerators, Option<SweepRotations>)> {
    if gen.n < 2 {
        return Err(Error::Size(format!("a sweep needs N >= 2, got {}", gen.n)));
    }
    gen.validate()?;
    let mut out = gen.clone();
    let mut rot = capture.then(SweepRotations::default);
    sweep_window(&mut out, 0, gen.n - 1, alpha, rot.as_mut())?;
    compress_pencil(&mut out, None)?;
    Ok((out, rot))
}

/// Same as [`qz_sweep`] but leaves the redundant generator orders in place.
pub fn qz_sweep_uncompressed(gen: &PencilGenerators, alpha: C64, capture: bool) -> Result<(PencilGenerators, Option<SweepRotations>)> {
    if gen.n < 2 {
        return Err(Error::Size(format!("a sweep needs N >= 2, got {}", gen.n)));
    }
    gen.validate()?;
    let mut out = gen.clone();
    let mut rot = capture.then(SweepRotations::default);
    sweep_window(&mut out, 0, gen.n - 1, alpha, rot.as_mut())?;
    Ok((out, rot))
}

/// Wilkinson-type shift from the trailing 2x2 blocks.
pub fn wilkinson_shift(gen: &PencilGenerators) -> Result<C64> {
    let (a, b) = crate::qs_core::trailing_block(gen)?;
    Ok(wilkinson_shift_2x2(&a, &b))
}

/// Result of scanning the subdiagonal for negligible entries.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DeflationScan {
    /// Indices `k` whose `A(k+1, k)` was set to zero.
    pub splits: Vec<usize>,
    /// Positions of isolated 1x1 blocks whose `B` diagonal is negligible.
    pub infinite: Vec<usize>,
}

/// Zeroes every negligible subdiagonal entry and flags infinite 1x1 blocks.
pub fn deflation_scan(gen: &mut PencilGenerators, tol_a: f64, tol_b: f64) -> DeflationScan {
    let n = gen.n;
    let diag = crate::qs_core::diag_entries_a(gen);
    let anorm = diag.iter().chain(gen.sigma.iter()).fold(0.0f64, |m, x| m.max(x.norm()));
    let mut scan = DeflationScan::default();
    for k in 0..n.saturating_sub(1) {
        if is_negligible_subdiagonal(gen.sigma[k], diag[k], diag[k + 1], anorm, tol_a) {
            gen.sigma[k] = C64::new(0.0, 0.0);
            scan.splits.push(k);
        }
    }
    let bmax = gen.d_b.iter().fold(0.0f64, |m, x| m.max(x.norm()));
    for k in 0..n {
        let isolated = (k == 0 || gen.sigma[k - 1] == C64::new(0.0, 0.0)) && (k + 1 == n || gen.sigma[k] == C64::new(0.0, 0.0));
        if isolated && gen.d_b[k].norm() <= tol_b * bmax {
            scan.infinite.push(k);
        }
    }
    scan
}

struct StructuredBackend<'a> {
    gen: &'a mut PencilGenerators,
}

impl QzBackend for StructuredBackend<'_> {
    fn n(&self) -> usize {
        self.gen.n
    }
    fn sigma(&self, k: usize) -> C64 {
        self.gen.sigma[k]
    }
    fn zero_sigma(&mut self, k: usize) {
        self.gen.sigma[k] = C64::new(0.0, 0.0);
    }
    fn a_diag(&self, k: usize) -> C64 {
        self.gen.a_diag(k)
    }
    fn b_diag(&self, k: usize) -> C64 {
        self.gen.d_b[k]
    }
    fn block(&self, hi: usize) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
        self.gen.block_at(hi)
    }
    fn sweep(&mut self, lo: usize, hi: usize, alpha: C64) -> Result<()> {
        sweep_window(self.gen, lo, hi, alpha, None)?;
        compress_pencil(self.gen, Some(hi))
    }
}

/// All generalized eigenvalues of the pencil, in O(N^2) time and O(N) memory.
pub fn eigenvalues(gen: &PencilGenerators, opts: &SolverOptions) -> Result<EigenResult> {
    gen.validate()?;
    let mut work = gen.clone();
    run_qz(&mut StructuredBackend { gen: &mut work }, opts)
}
