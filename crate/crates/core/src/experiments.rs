//! Accuracy, iteration and timing experiments on the test families.

use std::time::Instant;

use num_complex::Complex64 as C64;

use crate::backward_error::{
    coefficient_backward_errors_dd, forward_error, polish_roots, predicted_backward_error_table, rounded_log10,
};
use crate::dd::CDD;
use crate::dense_reference::{dense_eigenvalues, DenseMatrixPair};
use crate::error::{Error, Result};
use crate::families::{generate, seeded_rng, Family, Generated};
use crate::mat::CMat;
use crate::qs_core::{build_companion_pencil, companion_dense, Polynomial};
use crate::structured_qz::{eigenvalues, EigenResult, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Structured QZ on generators.
    Fast,
    /// Dense QZ on the explicit pencil.
    Dense,
    /// Dense QZ with `B = I` on the monic companion matrix.
    QrStandIn,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Fast => "fast-qz",
            Method::Dense => "dense-qz",
            Method::QrStandIn => "qr-standin",
        }
    }
}

/// Runs one method. `normalize` scales the coefficients to unit 2-norm first
/// (ignored by the QR stand-in, which always works on the monic polynomial).
pub fn solve(poly: &Polynomial, method: Method, normalize: bool, opts: &SolverOptions) -> Result<EigenResult> {
    match method {
        Method::Fast => eigenvalues(&build_companion_pencil(poly, normalize)?, opts),
        Method::Dense => {
            let (a, b) = companion_dense(poly, normalize)?;
            dense_eigenvalues(&DenseMatrixPair::new(a, b)?, opts)
        }
        Method::QrStandIn => {
            let lead = poly.leading();
            if lead == C64::new(0.0, 0.0) {
                return Err(Error::InvalidInput("QR stand-in needs a nonzero leading coefficient".into()));
            }
            let monic = Polynomial::new(poly.coeffs.iter().map(|c| c / lead).collect())?;
            let (a, _) = companion_dense(&monic, false)?;
            let n = a.rows();
            dense_eigenvalues(&DenseMatrixPair::new(a, CMat::identity(n))?, opts)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub method: Method,
    pub degree: usize,
    pub forward_error: Option<f64>,
    /// `None` when some eigenvalue is infinite or missing.
    pub backward_error: Option<f64>,
    pub avg_iterations: f64,
    pub wall_time: f64,
}

/// Closed-form roots when known, otherwise dense-QZ roots refined by
/// double-double Newton steps on the reference coefficients.
pub fn reference_roots(gen: &Generated, opts: &SolverOptions) -> Result<Vec<C64>> {
    if let Some(r) = &gen.roots {
        return Ok(r.clone());
    }
    let approx = solve(&gen.poly, Method::Dense, true, opts)?.finite_values();
    Ok(polish_roots(&gen.exact, &approx, 60))
}

/// Per-coefficient backward errors against the reference coefficients.
pub fn coefficient_errors(gen: &Generated, roots: &[C64]) -> Result<Vec<f64>> {
    coefficient_backward_errors_dd(&gen.exact, roots, CDD::from(gen.poly.leading()))
}

pub fn run(gen: &Generated, method: Method, reference: Option<&[C64]>, opts: &SolverOptions) -> Result<(RunReport, EigenResult)> {
    let t = Instant::now();
    let res = solve(&gen.poly, method, true, opts)?;
    let wall_time = t.elapsed().as_secs_f64();
    let roots = res.finite_values();
    let backward_error = coefficient_errors(gen, &roots).ok().map(|v| v.into_iter().fold(0.0, f64::max));
    let report = RunReport {
        method,
        degree: gen.poly.degree(),
        forward_error: reference.map(|r| forward_error(&roots, r)),
        backward_error,
        avg_iterations: res.average_iterations(),
        wall_time,
    };
    Ok((report, res))
}

/// Averages over the trials of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct AveragedRow {
    pub degree: usize,
    pub forward_error: f64,
    pub backward_error: f64,
    pub avg_iterations: f64,
}

fn averaged(degree: usize, reports: &[RunReport]) -> AveragedRow {
    let m = reports.len() as f64;
    AveragedRow {
        degree,
        forward_error: reports.iter().map(|r| r.forward_error.unwrap_or(f64::NAN)).sum::<f64>() / m,
        backward_error: reports.iter().map(|r| r.backward_error.unwrap_or(f64::NAN)).sum::<f64>() / m,
        avg_iterations: reports.iter().map(|r| r.avg_iterations).sum::<f64>() / m,
    }
}

/// Fast QZ on random polynomials; forward error against refined dense roots.
pub fn random_table(degrees: &[usize], trials: usize, seed: u64, opts: &SolverOptions) -> Result<Vec<AveragedRow>> {
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let mut reports = Vec::with_capacity(trials);
        for _ in 0..trials {
            let g = generate(Family::Random, n, &mut rng)?;
            let reference = reference_roots(&g, opts)?;
            reports.push(run(&g, Method::Fast, Some(&reference), opts)?.0);
        }
        rows.push(averaged(n, &reports));
    }
    Ok(rows)
}

/// Fast QZ on `z^N - i` against the closed-form roots.
pub fn cyclotomic_table(degrees: &[usize], opts: &SolverOptions) -> Result<Vec<AveragedRow>> {
    let mut rng = seeded_rng(0);
    degrees
        .iter()
        .map(|&n| {
            let g = generate(Family::Cyclotomic, n, &mut rng)?;
            let reference = g.roots.clone();
            Ok(averaged(n, &[run(&g, Method::Fast, reference.as_deref(), opts)?.0]))
        })
        .collect()
}

/// Degree-20 families compared across methods.
pub const DEGREE20_SUITE: [Family; 4] = [Family::PowerSum, Family::Equispaced, Family::Chebyshev, Family::Bernoulli];

#[derive(Clone, Debug, PartialEq)]
pub struct MethodComparison {
    pub family: Family,
    pub reports: Vec<RunReport>,
}

pub fn compare_methods(family: Family, degree: usize, methods: &[Method], opts: &SolverOptions) -> Result<MethodComparison> {
    let g = generate(family, degree, &mut seeded_rng(0))?;
    let reference = reference_roots(&g, opts)?;
    let reports = methods.iter().map(|&m| Ok(run(&g, m, Some(&reference), opts)?.0)).collect::<Result<_>>()?;
    Ok(MethodComparison { family, reports })
}

pub fn degree20_table(opts: &SolverOptions) -> Result<Vec<MethodComparison>> {
    DEGREE20_SUITE
        .iter()
        .map(|&f| compare_methods(f, 20, &[Method::Fast, Method::Dense, Method::QrStandIn], opts))
        .collect()
}

/// Rounded `log10` backward errors per coefficient: fast, dense, predicted.
#[derive(Clone, Debug, PartialEq)]
pub struct BackwardErrorColumn {
    pub family: Family,
    /// Indexed by coefficient degree.
    pub fast: Vec<Option<i32>>,
    pub dense: Vec<Option<i32>>,
    pub predicted: Vec<Option<i32>>,
}

pub fn backward_error_columns(opts: &SolverOptions) -> Result<Vec<BackwardErrorColumn>> {
    DEGREE20_SUITE
        .iter()
        .chain(std::iter::once(&Family::Unbalanced))
        .map(|&family| {
            let g = generate(family, 20, &mut seeded_rng(0))?;
            let per = |m| -> Result<Vec<Option<i32>>> {
                let roots = solve(&g.poly, m, true, opts)?.finite_values();
                Ok(rounded_log10(&coefficient_errors(&g, &roots)?))
            };
            Ok(BackwardErrorColumn {
                family,
                fast: per(Method::Fast)?,
                dense: per(Method::Dense)?,
                predicted: predicted_backward_error_table(&g.poly.normalized()?, 10.0)?,
            })
        })
        .collect()
}

pub fn unbalanced_table(opts: &SolverOptions) -> Result<MethodComparison> {
    compare_methods(Family::Unbalanced, 20, &[Method::Fast, Method::Dense, Method::QrStandIn], opts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub degree: usize,
    /// Median seconds over the trials.
    pub fast: f64,
    pub dense: Option<f64>,
    /// `fast / dense`.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `log(fast)` against `log(degree)`.
    pub slope: Option<f64>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Slope of the least-squares line through `(ln x, ln y)`; `None` with fewer
/// than two distinct abscissae.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (lx.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

/// Times both methods on the same seeded random polynomials. The dense
/// method runs only for degrees accepted by `with_dense`.
pub fn bench(
    degrees: &[usize],
    trials: usize,
    seed: u64,
    with_dense: impl Fn(usize) -> bool,
    opts: &SolverOptions,
) -> Result<BenchReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    if let Some(&n) = degrees.iter().find(|&&n| n < 2) {
        return Err(Error::InvalidInput(format!("degree {n} is below 2")));
    }
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::with_capacity(degrees.len());
    for &n in degrees {
        let dense_on = with_dense(n);
        let (mut tf, mut td) = (Vec::with_capacity(trials), Vec::with_capacity(trials));
        for _ in 0..trials {
            let g = generate(Family::Random, n, &mut rng)?;
            let t = Instant::now();
            solve(&g.poly, Method::Fast, true, opts)?;
            tf.push(t.elapsed().as_secs_f64());
            if dense_on {
                let t = Instant::now();
                solve(&g.poly, Method::Dense, true, opts)?;
                td.push(t.elapsed().as_secs_f64());
            }
        }
        let fast = median(tf);
        let dense = dense_on.then(|| median(td));
        rows.push(BenchRow { degree: n, fast, dense, ratio: dense.map(|d| fast / d) });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.degree as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.fast).collect();
    Ok(BenchReport { slope: loglog_slope(&xs, &ys), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs = [10.0, 20.0, 40.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.9)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 1.9).abs() < 1e-12);
        assert_eq!(loglog_slope(&[5.0], &[1.0]), None);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
