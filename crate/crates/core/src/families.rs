//! Test polynomial families with known or high-precision reference data.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dd::{self, CDD, DD};
use crate::error::{Error, Result};
use crate::qs_core::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Coefficients uniform in `[-1, 1] + i[-1, 1]`.
    Random,
    /// `z^N - i`.
    Cyclotomic,
    /// `1 + z + ... + z^N`.
    PowerSum,
    /// Roots equally spaced in `[-2.1, 1.9]`.
    Equispaced,
    /// Chebyshev polynomial of the first kind.
    Chebyshev,
    /// Bernoulli polynomial.
    Bernoulli,
    /// `p_k = 10^(6 (-1)^(k+1) - 3)`.
    Unbalanced,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Random,
        Family::Cyclotomic,
        Family::PowerSum,
        Family::Equispaced,
        Family::Chebyshev,
        Family::Bernoulli,
        Family::Unbalanced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Cyclotomic => "cyclotomic",
            Family::PowerSum => "powersum",
            Family::Equispaced => "equispaced",
            Family::Chebyshev => "chebyshev",
            Family::Bernoulli => "bernoulli",
            Family::Unbalanced => "unbalanced",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown family '{s}'")))
    }
}

/// Deterministic generator used for all seeded experiments.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A generated polynomial with its reference data.
#[derive(Clone, Debug)]
pub struct Generated {
    pub family: Family,
    /// Coefficients rounded to double precision.
    pub poly: Polynomial,
    /// Reference coefficients in double-double (exact where representable).
    pub exact: Vec<CDD>,
    /// Closed-form roots, when known.
    pub roots: Option<Vec<C64>>,
}

fn from_exact(family: Family, exact: Vec<CDD>, roots: Option<Vec<C64>>) -> Result<Generated> {
    let poly = Polynomial::new(exact.iter().map(|c| c.to_c64()).collect())?;
    Ok(Generated { family, poly, exact, roots })
}

fn from_f64(family: Family, coeffs: Vec<C64>, roots: Option<Vec<C64>>) -> Result<Generated> {
    from_exact(family, coeffs.into_iter().map(CDD::from).collect(), roots)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn generate<R: Rng + ?Sized>(family: Family, degree: usize, rng: &mut R) -> Result<Generated> {
    if degree == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let n = degree;
    match family {
        Family::Random => {
            let c = (0..=n).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
            from_f64(family, c, None)
        }
        Family::Cyclotomic => {
            let mut c = vec![real(0.0); n + 1];
            c[0] = C64::new(0.0, -1.0);
            c[n] = real(1.0);
            from_f64(family, c, Some(cyclotomic_roots(n)))
        }
        Family::PowerSum => {
            let roots = (1..=n)
                .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / (n + 1) as f64))
                .collect();
            from_f64(family, vec![real(1.0); n + 1], Some(roots))
        }
        Family::Equispaced => {
            let roots = equispaced_roots(n);
            from_exact(family, dd::poly_from_roots(&roots), Some(roots))
        }
        Family::Chebyshev => {
            let c = chebyshev_coefficients(n).into_iter().map(|x| real(x as f64)).collect();
            let roots = (1..=n)
                .map(|k| real(((2 * k - 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos()))
                .collect();
            from_f64(family, c, Some(roots))
        }
        Family::Bernoulli => {
            let exact = bernoulli_coefficients(n)?
                .into_iter()
                .map(|r| CDD::new(i128_to_dd(*r.numer()) / i128_to_dd(*r.denom()), DD::ZERO))
                .collect();
            from_exact(family, exact, None)
        }
        Family::Unbalanced => {
            let c = (0..=n)
                .map(|k| {
                    let e = if k % 2 == 0 { -9 } else { 3 };
                    real(format!("1e{e}").parse().expect("valid literal"))
                })
                .collect();
            from_f64(family, c, None)
        }
    }
}

/// `exp(i pi (4k+1) / (2N))`, the roots of `z^N - i`.
pub fn cyclotomic_roots(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| C64::from_polar(1.0, std::f64::consts::PI * (4 * k + 1) as f64 / (2 * n) as f64))
        .collect()
}

/// `n` points equally spaced in `[-2.1, 1.9]`.
pub fn equispaced_roots(n: usize) -> Vec<C64> {
    if n == 1 {
        return vec![real(-2.1)];
    }
    (0..n).map(|k| real(-2.1 + 4.0 * k as f64 / (n - 1) as f64)).collect()
}

/// Integer coefficients (ascending) of `T_n` from `T_{k+1} = 2x T_k - T_{k-1}`.
pub fn chebyshev_coefficients(n: usize) -> Vec<i128> {
    let mut prev = vec![1i128];
    let mut cur = vec![0i128, 1];
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += 2 * c;
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Bernoulli numbers `B_0 .. B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Result<Vec<Ratio<i128>>> {
    let mut b: Vec<Ratio<i128>> = vec![Ratio::from_integer(1)];
    for m in 1..=n {
        let mut s = Ratio::from_integer(0);
        for (k, bk) in b.iter().enumerate() {
            s += Ratio::from_integer(binomial(m + 1, k)?) * bk;
        }
        b.push(-s / Ratio::from_integer(m as i128 + 1));
    }
    Ok(b)
}

/// Ascending coefficients of `B_n(x) = sum_k C(n,k) B_k x^(n-k)`.
pub fn bernoulli_coefficients(n: usize) -> Result<Vec<Ratio<i128>>> {
    if n > 30 {
        return Err(Error::Size("Bernoulli polynomials supported up to degree 30".into()));
    }
    let b = bernoulli_numbers(n)?;
    (0..=n).map(|j| Ok(Ratio::from_integer(binomial(n, n - j)?) * b[n - j])).collect()
}

fn binomial(n: usize, k: usize) -> Result<i128> {
    let mut r: i128 = 1;
    for i in 0..k {
        r = r
            .checked_mul((n - i) as i128)
            .ok_or_else(|| Error::Size("binomial overflow".into()))?
            / (i as i128 + 1);
    }
    Ok(r)
}

fn i128_to_dd(x: i128) -> DD {
    let hi = x as f64;
    let rest = x - hi as i128;
    DD::new(hi, rest as f64)
}
