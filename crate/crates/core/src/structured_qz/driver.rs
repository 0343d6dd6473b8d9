use num_complex::Complex64 as C64;

use super::policy::{exceptional_shift, is_negligible_subdiagonal, wilkinson_shift_2x2};
use super::{Deflation, EigenResult, Eigenvalue, SolverOptions};
use crate::error::{Error, Result};

/// Entry access and sweeps needed by the shared deflation/shift loop.
pub(crate) trait QzBackend {
    fn n(&self) -> usize;
    fn sigma(&self, k: usize) -> C64;
    fn zero_sigma(&mut self, k: usize);
    fn a_diag(&self, k: usize) -> C64;
    fn b_diag(&self, k: usize) -> C64;
    fn block(&self, hi: usize) -> ([[C64; 2]; 2], [[C64; 2]; 2]);
    fn sweep(&mut self, lo: usize, hi: usize, alpha: C64) -> Result<()>;
}

pub(crate) fn run_qz<B: QzBackend>(bk: &mut B, opts: &SolverOptions) -> Result<EigenResult> {
    let n = bk.n();
    let zero = C64::new(0.0, 0.0);
    let mut res = EigenResult {
        eigenvalues: vec![None; n],
        iterations: vec![0; n],
        total_sweeps: 0,
        deflations: Vec::new(),
    };
    let anorm = (0..n)
        .map(|k| bk.a_diag(k).norm())
        .chain((0..n.saturating_sub(1)).map(|k| bk.sigma(k).norm()))
        .fold(0.0f64, f64::max);
    let budget = opts.max_iter_per_eig.saturating_mul(n);
    let mut since_deflation = 0usize;
    let mut hi = n as isize - 1;

    while hi >= 0 {
        let h = hi as usize;
        let mut lo = 0;
        let mut next = bk.a_diag(h);
        for k in (0..h).rev() {
            let cur = bk.a_diag(k);
            if bk.sigma(k) == zero || is_negligible_subdiagonal(bk.sigma(k), cur, next, anorm, opts.tol_a) {
                bk.zero_sigma(k);
                lo = k + 1;
                break;
            }
            next = cur;
        }

        if lo == h {
            let bmax = (0..n).map(|k| bk.b_diag(k).norm()).fold(0.0f64, f64::max);
            let bd = bk.b_diag(h);
            let beta = if bd.norm() <= opts.tol_b * bmax { zero } else { bd };
            res.eigenvalues[h] = Some(Eigenvalue { alpha: bk.a_diag(h), beta });
            res.iterations[h] = since_deflation;
            res.deflations.push(Deflation { position: h, after_sweeps: res.total_sweeps });
            since_deflation = 0;
            hi -= 1;
            continue;
        }

        if res.total_sweeps >= budget {
            return Err(Error::NonConvergence { sweeps: res.total_sweeps, lo, hi: h, partial: Box::new(res) });
        }

        let (a, b) = bk.block(h);
        let mut alpha = wilkinson_shift_2x2(&a, &b);
        if since_deflation > 0 && opts.exceptional_period > 0 && since_deflation.is_multiple_of(opts.exceptional_period) {
            alpha = exceptional_shift(alpha, a[1][0], b[0][0]);
        }
        bk.sweep(lo, h, alpha)?;
        res.total_sweeps += 1;
        since_deflation += 1;
    }
    Ok(res)
}
