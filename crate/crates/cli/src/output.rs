//! Text, CSV and JSON renderings of solver results.

use std::fmt::Write as _;

use fastqz::experiments::{AveragedRow, BackwardErrorColumn, BenchReport, MethodComparison, Method, RunReport};
use fastqz::polyfile::eigenvalue_roots;
use fastqz::EigenResult;
use serde::Serialize;

#[derive(Serialize)]
struct RootsJson<'a> {
    method: &'a str,
    degree: usize,
    converged: bool,
    /// `[re, im]`, or `null` for infinite or unconverged eigenvalues.
    roots: Vec<Option<[f64; 2]>>,
    infinite: usize,
    iterations: &'a [usize],
    total_sweeps: usize,
    avg_iterations: f64,
    wall_time: f64,
}

pub fn roots_json(method: Method, degree: usize, r: &EigenResult, converged: bool, wall_time: f64) -> String {
    let roots = r
        .eigenvalues
        .iter()
        .map(|e| e.and_then(|e| e.value()).map(|z| [z.re, z.im]))
        .collect();
    let out = RootsJson {
        method: method.tag(),
        degree,
        converged,
        roots,
        infinite: eigenvalue_roots(&r.eigenvalues).iter().filter(|x| x.is_none()).count(),
        iterations: &r.iterations,
        total_sweeps: r.total_sweeps,
        avg_iterations: r.average_iterations(),
        wall_time,
    };
    serde_json::to_string_pretty(&out).expect("serializable")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

/// Columns: degree, fast seconds, dense seconds, fast/dense, fitted slope.
pub fn bench_csv(rep: &BenchReport) -> String {
    let mut s = String::from("degree,fast_seconds,dense_seconds,ratio,slope\n");
    for r in &rep.rows {
        writeln!(s, "{},{:e},{},{},{}", r.degree, r.fast, opt(r.dense), opt(r.ratio), opt(rep.slope)).unwrap();
    }
    s
}

#[derive(Serialize)]
struct AveragedJson {
    degree: usize,
    forward_error: f64,
    backward_error: f64,
    avg_iterations: f64,
}

pub fn averaged_table(rows: &[AveragedRow], json: bool) -> String {
    if json {
        let v: Vec<_> = rows
            .iter()
            .map(|r| AveragedJson {
                degree: r.degree,
                forward_error: r.forward_error,
                backward_error: r.backward_error,
                avg_iterations: r.avg_iterations,
            })
            .collect();
        return serde_json::to_string_pretty(&v).expect("serializable") + "\n";
    }
    let mut s = format!("{:>6} {:>12} {:>12} {:>10}\n", "N", "forward", "backward", "avg iter");
    for r in rows {
        writeln!(s, "{:>6} {:>12.2e} {:>12.2e} {:>10.2}", r.degree, r.forward_error, r.backward_error, r.avg_iterations).unwrap();
    }
    s
}

#[derive(Serialize)]
struct ReportJson {
    family: String,
    method: &'static str,
    degree: usize,
    forward_error: Option<f64>,
    backward_error: Option<f64>,
    avg_iterations: f64,
    wall_time: f64,
}

fn report_json(family: &str, r: &RunReport) -> ReportJson {
    ReportJson {
        family: family.to_string(),
        method: r.method.tag(),
        degree: r.degree,
        forward_error: r.forward_error,
        backward_error: r.backward_error,
        avg_iterations: r.avg_iterations,
        wall_time: r.wall_time,
    }
}

fn sci(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.2e}"))
}

pub fn comparison_table(rows: &[MethodComparison], json: bool) -> String {
    if json {
        let v: Vec<_> = rows
            .iter()
            .flat_map(|c| c.reports.iter().map(move |r| report_json(c.family.name(), r)))
            .collect();
        return serde_json::to_string_pretty(&v).expect("serializable") + "\n";
    }
    let mut s = format!("{:<12} {:<11} {:>10} {:>10} {:>9}\n", "polynomial", "method", "forward", "backward", "avg iter");
    for c in rows {
        for r in &c.reports {
            writeln!(
                s,
                "{:<12} {:<11} {:>10} {:>10} {:>9.2}",
                c.family.name(),
                r.method.tag(),
                sci(r.forward_error),
                sci(r.backward_error),
                r.avg_iterations
            )
            .unwrap();
        }
    }
    s
}

fn exp(x: Option<i32>) -> String {
    x.map_or_else(|| "-Inf".into(), |v| v.to_string())
}

#[derive(Serialize)]
struct ColumnJson<'a> {
    family: &'a str,
    fast: &'a [Option<i32>],
    dense: &'a [Option<i32>],
    predicted: &'a [Option<i32>],
}

/// Rows from the leading coefficient down; each cell is `fast,dense,predicted`.
pub fn backward_error_table(cols: &[BackwardErrorColumn], json: bool) -> String {
    if json {
        let v: Vec<_> = cols
            .iter()
            .map(|c| ColumnJson { family: c.family.name(), fast: &c.fast, dense: &c.dense, predicted: &c.predicted })
            .collect();
        return serde_json::to_string_pretty(&v).expect("serializable") + "\n";
    }
    let mut s = format!("{:<6}", "coef");
    for c in cols {
        write!(s, " {:>14}", c.family.name()).unwrap();
    }
    s.push('\n');
    let n = cols.first().map_or(0, |c| c.fast.len());
    for k in (0..n).rev() {
        write!(s, "{:<6}", format!("z^{k}")).unwrap();
        for c in cols {
            write!(s, " {:>14}", format!("{},{},{}", exp(c.fast[k]), exp(c.dense[k]), exp(c.predicted[k]))).unwrap();
        }
        s.push('\n');
    }
    s
}
