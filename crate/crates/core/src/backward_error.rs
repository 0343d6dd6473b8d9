//! First-order coefficient perturbations of companion pencils, measured
//! backward errors of computed roots, and high-precision reference tools.

use num_complex::Complex64 as C64;

use crate::dd::{self, CDD, DD};
use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::qs_core::{companion_dense, Polynomial};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Perturbation `(E, G)` of a pencil `(A, B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationModel {
    pub e: CMat,
    pub g: CMat,
    /// Number of populated subdiagonals of `E` and `G` (upper part always full).
    pub lower_bands: (usize, usize),
}

impl PerturbationModel {
    /// `E = value * triu(ones, -e_sub)`, `G = value * triu(ones, -g_sub)`.
    pub fn banded(n: usize, e_sub: usize, g_sub: usize, value: f64) -> Self {
        let band = |sub: usize| CMat::from_fn(n, n, |i, j| if i <= j + sub { C64::new(value, 0.0) } else { ZERO });
        PerturbationModel { e: band(e_sub), g: band(g_sub), lower_bands: (e_sub, g_sub) }
    }
}

fn check_square(m: &CMat, n: usize, what: &str) -> Result<()> {
    if m.shape() != (n, n) {
        return Err(Error::Structural(format!("{what} is {:?}, expected {n}x{n}", m.shape())));
    }
    Ok(())
}

/// First-order change of `det(sI - A - E)` for the companion matrix of the
/// monic polynomial with lower coefficients `a[0..n]` (the leading one is taken
/// as 1 whatever `a[n]` holds). Entry `k` is the coefficient of `s^k`.
fn em_raw(a: &[C64], e: &CMat) -> Vec<C64> {
    let n = a.len() - 1;
    let coef = |m: usize| if m == n { C64::new(1.0, 0.0) } else { a[m] };
    // 1-based E(i, j), zero outside the matrix.
    let ent = |i: usize, j: isize| -> C64 {
        if j >= 1 && (j as usize) <= n {
            e[(i - 1, j as usize - 1)]
        } else {
            ZERO
        }
    };
    (1..=n)
        .map(|k| {
            let mut acc = ZERO;
            for m in 0..k {
                let s: C64 = (k + 1..=n).map(|i| ent(i, i as isize + m as isize - k as isize)).sum();
                acc += coef(m) * s;
            }
            for m in k..=n {
                let s: C64 = (1..=k).map(|i| ent(i, i as isize + m as isize - k as isize)).sum();
                acc -= coef(m) * s;
            }
            acc
        })
        .collect()
}

/// Coefficients of `s^0 .. s^{n-1}` in `det(sI - A - E) - det(sI - A)` to
/// first order, `A` the companion matrix of the monic polynomial `a`.
pub fn em_coefficient_perturbation(a: &Polynomial, e: &CMat) -> Result<Vec<C64>> {
    let n = a.degree();
    check_square(e, n, "E")?;
    if a.leading() != C64::new(1.0, 0.0) {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    Ok(em_raw(&a.coeffs, e))
}

/// First-order change `det(s(B+G) - (A+E)) - det(sB - A)` for the companion
/// pencil of `a` (leading coefficient nonzero); entry `k` multiplies `s^k`.
pub fn pencil_perturbation_poly(a: &Polynomial, e: &CMat, g: &CMat) -> Result<Vec<C64>> {
    let n = a.degree();
    check_square(e, n, "E")?;
    check_square(g, n, "G")?;
    let an = a.leading();
    if an == ZERO {
        return Err(Error::InvalidInput("leading coefficient must be nonzero".into()));
    }
    if n == 0 {
        return Ok(vec![ZERO]);
    }
    let mut monic = a.coeffs.clone();
    monic[n] = C64::new(1.0, 0.0);
    let (comp, _) = companion_dense(&Polynomial::new(monic.clone())?, false)?;

    let mut out = vec![ZERO; n + 1];
    let tr_g = g.trace();
    for (o, &c) in out.iter_mut().zip(&monic) {
        *o += tr_g * c;
    }
    let da = em_raw(&monic, &e.sub(&g.mul(&comp)));
    for (o, d) in out.iter_mut().zip(&da) {
        *o += d;
    }

    let m = n - 1;
    let lead = an - C64::new(1.0, 0.0);
    if m > 0 {
        let gt = g.block(0, 0, m, m);
        let at = comp.block(0, 0, m, m);
        let mut shifted = vec![ZERO; m + 1];
        shifted[m] = C64::new(1.0, 0.0);
        let dat = em_raw(&shifted, &e.block(0, 0, m, m).sub(&gt.mul(&at)));
        for (j, d) in dat.iter().enumerate() {
            out[j + 1] += lead * d;
        }
        out[n] += lead * gt.trace();
    }
    Ok(out)
}

/// Determinant of a square matrix by Gaussian elimination with partial pivoting.
pub fn det_dd(mut m: Vec<Vec<CDD>>) -> CDD {
    let n = m.len();
    let mut det = CDD::ONE;
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].norm_sqr().to_f64().total_cmp(&m[j][k].norm_sqr().to_f64()))
            .unwrap();
        if m[piv][k] == CDD::ZERO {
            return CDD::ZERO;
        }
        if piv != k {
            m.swap(piv, k);
            det = -det;
        }
        let p = m[k][k];
        det = det * p;
        for i in k + 1..n {
            let f = m[i][k] / p;
            if f == CDD::ZERO {
                continue;
            }
            for j in k..n {
                let t = m[k][j];
                m[i][j] = m[i][j] - f * t;
            }
        }
    }
    det
}

fn to_dd_matrix(m: &CMat) -> Vec<Vec<CDD>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| CDD::from(m[(i, j)])).collect()).collect()
}

/// Ascending monomial coefficients of the degree-`(x.len()-1)` interpolant.
pub fn interpolate_dd(x: &[DD], y: &[CDD]) -> Vec<CDD> {
    let n = x.len();
    let mut c = y.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let d = CDD::new(x[i] - x[i - j], DD::ZERO);
            c[i] = (c[i] - c[i - 1]) / d;
        }
    }
    let mut poly = vec![CDD::ZERO; n];
    for k in (0..n).rev() {
        // poly = poly * (s - x_k) + c_k
        let mut next = vec![CDD::ZERO; n];
        for j in 0..n {
            if poly[j] == CDD::ZERO {
                continue;
            }
            if j + 1 < n {
                next[j + 1] = next[j + 1] + poly[j];
            }
            next[j] = next[j] - poly[j].scale(x[k]);
        }
        next[0] = next[0] + c[k];
        poly = next;
    }
    poly
}

/// `det(s(B+G) - (A+E)) - det(sB - A)` for the companion pencil of `a`,
/// evaluated in double-double at Chebyshev nodes and interpolated.
pub fn determinant_difference_oracle(a: &Polynomial, e: &CMat, g: &CMat) -> Result<Vec<C64>> {
    let n = a.degree();
    check_square(e, n, "E")?;
    check_square(g, n, "G")?;
    let (ca, cb) = companion_dense(a, false)?;
    let (pa, pb) = (to_dd_matrix(&ca.add(e)), to_dd_matrix(&cb.add(g)));
    let (ua, ub) = (to_dd_matrix(&ca), to_dd_matrix(&cb));
    let pencil = |a: &[Vec<CDD>], b: &[Vec<CDD>], s: DD| -> Vec<Vec<CDD>> {
        a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| y.scale(s) - x).collect()).collect()
    };
    let nodes: Vec<DD> = (0..=n)
        .map(|k| DD::from((std::f64::consts::PI * (2 * k + 1) as f64 / (2 * (n + 1)) as f64).cos()))
        .collect();
    let diffs: Vec<CDD> = nodes.iter().map(|&s| det_dd(pencil(&pa, &pb, s)) - det_dd(pencil(&ua, &ub, s))).collect();
    Ok(interpolate_dd(&nodes, &diffs).into_iter().map(CDD::to_c64).collect())
}

fn normalize_dd(v: &mut [CDD]) {
    let norm = v.iter().fold(DD::ZERO, |acc, c| acc + c.norm_sqr()).sqrt();
    if norm.hi > 0.0 {
        let inv = DD::ONE / norm;
        for c in v.iter_mut() {
            *c = c.scale(inv);
        }
    }
}

/// Per-coefficient `|p~_k - p_k|` after 2-norm normalization of both the
/// reference coefficients and `leading * prod (x - roots_j)`.
pub fn coefficient_backward_errors_dd(exact: &[CDD], roots: &[C64], leading: CDD) -> Result<Vec<f64>> {
    if roots.len() + 1 != exact.len() {
        return Err(Error::Size(format!("{} roots for a degree {} polynomial", roots.len(), exact.len() - 1)));
    }
    let mut exact = exact.to_vec();
    let mut rebuilt: Vec<CDD> = dd::poly_from_roots(roots).into_iter().map(|c| c * leading).collect();
    normalize_dd(&mut exact);
    normalize_dd(&mut rebuilt);
    Ok(exact.iter().zip(&rebuilt).map(|(x, y)| (*y - *x).norm().to_f64()).collect())
}

pub fn coefficient_backward_errors(a_exact: &Polynomial, roots: &[C64], leading: C64) -> Result<Vec<f64>> {
    let exact: Vec<CDD> = a_exact.coeffs.iter().map(|&c| CDD::from(c)).collect();
    coefficient_backward_errors_dd(&exact, roots, CDD::from(leading))
}

/// `max_k |p~_k - p_k|` over 2-norm-normalized coefficient vectors.
pub fn measured_backward_error(a_exact: &Polynomial, roots: &[C64], leading: C64) -> Result<f64> {
    Ok(coefficient_backward_errors(a_exact, roots, leading)?.into_iter().fold(0.0, f64::max))
}

/// Rounded `log10 |dp_k|`, `None` for an exact zero.
pub fn rounded_log10(values: &[f64]) -> Vec<Option<i32>> {
    values.iter().map(|&v| if v == 0.0 { None } else { Some(v.log10().round() as i32) }).collect()
}

/// Predicted per-coefficient backward error (rounded `log10`) under
/// `E = c N eps triu(ones, -2)`, `G = c N eps triu(ones, -1)`.
pub fn predicted_backward_error_table(a: &Polynomial, scale_factor: f64) -> Result<Vec<Option<i32>>> {
    let n = a.degree();
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    let model = PerturbationModel::banded(n, 2, 1, scale_factor * n as f64 * f64::EPSILON);
    let dp = pencil_perturbation_poly(a, &model.e, &model.g)?;
    Ok(rounded_log10(&dp.iter().map(|d| d.norm()).collect::<Vec<_>>()))
}

/// `max_k min_j |computed_j - exact_k|`.
pub fn forward_error(computed: &[C64], exact: &[C64]) -> f64 {
    exact
        .iter()
        .map(|x| computed.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Like [`forward_error`] with each distance divided by `max(1, |exact_k|)`.
pub fn relative_forward_error(computed: &[C64], exact: &[C64]) -> f64 {
    exact
        .iter()
        .map(|x| computed.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min) / x.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// Newton refinement of approximate roots in double-double arithmetic.
pub fn polish_roots(coeffs: &[CDD], roots: &[C64], max_steps: usize) -> Vec<C64> {
    let deriv: Vec<CDD> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(DD::from(k as f64))).collect();
    roots
        .iter()
        .map(|&r| {
            let mut x = CDD::from(r);
            for _ in 0..max_steps {
                let d = dd::eval(&deriv, x);
                if d == CDD::ZERO {
                    break;
                }
                let step = dd::eval(coeffs, x) / d;
                if !step.is_finite() {
                    break;
                }
                x = x - step;
                if step.norm().to_f64() <= 1e-30 * x.norm().to_f64().max(1e-300) {
                    break;
                }
            }
            x.to_c64()
        })
        .collect()
}
