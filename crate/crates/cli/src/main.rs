mod output;

use std::fs;
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fastqz::dense_reference::DENSE_MAX_N;
use fastqz::experiments::{self, Method};
use fastqz::families::{generate, seeded_rng, Family};
use fastqz::polyfile::{format_coefficients, format_roots, parse_polynomial, eigenvalue_roots};
use fastqz::{Error, SolverOptions};

const EXIT_INPUT: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

/// Polynomial roots through structured QZ on the companion pencil.
#[derive(Parser)]
#[command(name = "fastqz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Fast,
    Dense,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fast => Method::Fast,
            MethodArg::Dense => Method::Dense,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the roots of the polynomial in FILE ("-" reads standard input).
    Roots {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fast")]
        method: MethodArg,
        /// Keep the coefficients as given instead of scaling to unit 2-norm.
        #[arg(long)]
        no_normalize: bool,
        /// Sweep budget per eigenvalue.
        #[arg(long, default_value_t = 30)]
        max_iter: usize,
        #[arg(long)]
        json: bool,
        /// On non-convergence, still print the eigenvalues found.
        #[arg(long)]
        partial: bool,
    },
    /// Write the coefficients of a test polynomial.
    Gen {
        #[arg(value_parser = parse_family)]
        family: Family,
        degree: usize,
        #[arg(long, env = "FASTQZ_SEED", default_value_t = 1)]
        seed: u64,
        /// Coefficient file; reference roots go to FILE.roots when known.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time fast and dense QZ on seeded random polynomials (CSV).
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800])]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, env = "FASTQZ_SEED", default_value_t = 1)]
        seed: u64,
        /// Largest degree timed with dense QZ.
        #[arg(long, default_value_t = DENSE_MAX_N)]
        dense_max: usize,
    },
    /// Regenerate one of the accuracy tables.
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        which: u8,
        /// Degrees for tables 1 and 2.
        #[arg(long, value_delimiter = ',', default_values_t = [50, 100, 150, 200, 300, 400, 500])]
        degrees: Vec<usize>,
        /// Trials per degree for table 1.
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, env = "FASTQZ_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("fastqz: {msg}");
    ExitCode::from(code)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn read_input(path: &Path) -> std::io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Roots { file, method, no_normalize, max_iter, json, partial } => {
            cmd_roots(&file, method.into(), !no_normalize, max_iter, json, partial)
        }
        Command::Gen { family, degree, seed, output } => cmd_gen(family, degree, seed, output.as_deref()),
        Command::Bench { degrees, trials, seed, dense_max } => cmd_bench(&degrees, trials, seed, dense_max),
        Command::Tables { which, degrees, trials, seed, json } => cmd_tables(which, &degrees, trials, seed, json),
    }
}

fn cmd_roots(file: &Path, method: Method, normalize: bool, max_iter: usize, json: bool, partial: bool) -> ExitCode {
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    };
    let poly = match parse_polynomial(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_INPUT, format!("{}: {e}", file.display())),
    };
    let opts = SolverOptions { max_iter_per_eig: max_iter, ..SolverOptions::default() };
    let t = Instant::now();
    let (result, converged) = match experiments::solve(&poly, method, normalize, &opts) {
        Ok(r) => (r, true),
        Err(Error::NonConvergence { partial: p, .. }) => (*p, false),
        Err(e @ (Error::InvalidInput(_) | Error::Size(_))) => return fail(EXIT_INPUT, e),
        Err(e) => return fail(1, e),
    };
    let wall_time = t.elapsed().as_secs_f64();
    if converged || partial {
        if json {
            emit(&(output::roots_json(method, poly.degree(), &result, converged, wall_time) + "\n"));
        } else {
            emit(&format_roots(&eigenvalue_roots(&result.eigenvalues)));
        }
    }
    if converged {
        ExitCode::SUCCESS
    } else {
        fail(EXIT_NO_CONVERGENCE, format!("no convergence within {max_iter} sweeps per eigenvalue"))
    }
}

fn cmd_gen(family: Family, degree: usize, seed: u64, output: Option<&Path>) -> ExitCode {
    let g = match generate(family, degree, &mut seeded_rng(seed)) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_INPUT, e),
    };
    let coeffs = format_coefficients(&g.poly.coeffs);
    let Some(path) = output else {
        emit(&coeffs);
        return ExitCode::SUCCESS;
    };
    let mut roots_path = path.as_os_str().to_owned();
    roots_path.push(".roots");
    let written = fs::write(path, coeffs).and_then(|()| match &g.roots {
        Some(r) => fs::write(&roots_path, format_roots(&r.iter().map(|&z| Some(z)).collect::<Vec<_>>())),
        None => Ok(()),
    });
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(1, e),
    }
}

fn cmd_bench(degrees: &[usize], trials: usize, seed: u64, dense_max: usize) -> ExitCode {
    let cap = dense_max.min(DENSE_MAX_N);
    match experiments::bench(degrees, trials, seed, |n| n <= cap, &SolverOptions::default()) {
        Ok(rep) => {
            emit(&output::bench_csv(&rep));
            ExitCode::SUCCESS
        }
        Err(e @ Error::InvalidInput(_)) => fail(EXIT_INPUT, e),
        Err(e) => fail(1, e),
    }
}

fn cmd_tables(which: u8, degrees: &[usize], trials: usize, seed: u64, json: bool) -> ExitCode {
    let opts = SolverOptions::default();
    let text = match which {
        1 => experiments::random_table(degrees, trials, seed, &opts).map(|r| output::averaged_table(&r, json)),
        2 => experiments::cyclotomic_table(degrees, &opts).map(|r| output::averaged_table(&r, json)),
        3 => experiments::degree20_table(&opts).map(|r| output::comparison_table(&r, json)),
        4 => experiments::backward_error_columns(&opts).map(|r| output::backward_error_table(&r, json)),
        _ => experiments::unbalanced_table(&opts).map(|r| output::comparison_table(&[r], json)),
    };
    match text {
        Ok(t) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Err(e) => fail(1, e),
    }
}
