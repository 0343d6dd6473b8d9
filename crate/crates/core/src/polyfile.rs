//! Plain-text coefficient and root files.
//!
//! One complex number per line as `re im`, ascending degree; blank lines and
//! text after `#` are ignored. Root files may also contain `inf`.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::qs_core::Polynomial;
use crate::structured_qz::Eigenvalue;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number; 0 for whole-file problems.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn parse_number(tok: &str, line: usize) -> Result<f64, ParseError> {
    let x: f64 = tok.parse().map_err(|_| err(line, format!("'{tok}' is not a number")))?;
    if !x.is_finite() {
        return Err(err(line, format!("'{tok}' is not finite")));
    }
    Ok(x)
}

/// Non-empty entries of a file: `(line number, tokens)`.
fn entries(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_pair(toks: &[&str], line: usize) -> Result<C64, ParseError> {
    match toks {
        [re, im] => Ok(C64::new(parse_number(re, line)?, parse_number(im, line)?)),
        _ => Err(err(line, format!("expected 2 fields 're im', found {}", toks.len()))),
    }
}

/// Coefficients `a_0 .. a_n`.
pub fn parse_coefficients(text: &str) -> Result<Vec<C64>, ParseError> {
    let coeffs = entries(text).map(|(line, toks)| parse_pair(&toks, line)).collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(err(0, "no coefficients"));
    }
    Ok(coeffs)
}

/// A polynomial of degree at least 1 with at least one nonzero coefficient.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let coeffs = parse_coefficients(text)?;
    if coeffs.len() < 2 {
        return Err(err(0, "need at least two coefficients (degree >= 1)"));
    }
    if coeffs.iter().all(|c| *c == C64::new(0.0, 0.0)) {
        return Err(err(0, "all coefficients are zero"));
    }
    Ok(Polynomial::new(coeffs).expect("finite, nonempty"))
}

/// Roots; `None` marks an infinite one.
pub fn parse_roots(text: &str) -> Result<Vec<Option<C64>>, ParseError> {
    entries(text)
        .map(|(line, toks)| match toks.as_slice() {
            [t] if t.eq_ignore_ascii_case("inf") => Ok(None),
            _ => parse_pair(&toks, line).map(Some),
        })
        .collect()
}

/// Shortest round-trip representation of each part.
pub fn format_complex(z: C64) -> String {
    format!("{:e} {:e}", z.re, z.im)
}

pub fn format_coefficients(coeffs: &[C64]) -> String {
    let mut s = String::new();
    for &c in coeffs {
        writeln!(s, "{}", format_complex(c)).unwrap();
    }
    s
}

pub fn format_roots<'a>(roots: impl IntoIterator<Item = &'a Option<C64>>) -> String {
    let mut s = String::new();
    for r in roots {
        match r {
            Some(z) => writeln!(s, "{}", format_complex(*z)).unwrap(),
            None => s.push_str("inf\n"),
        }
    }
    s
}

/// Eigenvalue pairs as roots: `alpha / beta`, or `None` when infinite.
pub fn eigenvalue_roots(eigs: &[Option<Eigenvalue>]) -> Vec<Option<C64>> {
    eigs.iter().flatten().map(|e| e.value()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_coefficients("# header\n-1 0\n\n  0 0 # note\n1 0\n").unwrap();
        assert_eq!(c, vec![C64::new(-1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    }

    #[test]
    fn reports_line_number() {
        let e = parse_coefficients("1 0\n\nx 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_coefficients("1 0\n1 2 3\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_coefficients("1 nan\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn rejects_degenerate_polynomials() {
        assert!(parse_polynomial("").is_err());
        assert!(parse_polynomial("1 0\n").is_err());
        assert!(parse_polynomial("0 0\n0 0\n").is_err());
    }

    #[test]
    fn roots_with_infinity() {
        let r = parse_roots("1 2\ninf\n").unwrap();
        assert_eq!(r, vec![Some(C64::new(1.0, 2.0)), None]);
        assert_eq!(format_roots(&r), "1e0 2e0\ninf\n");
    }
}
