use num_complex::Complex64 as C64;

/// Root of `det(A - x B) = 0` (2x2, `B` upper triangular) closest to
/// `A(2,2) / B(2,2)`. Falls back to a diagonal ratio when `B` is singular.
pub fn wilkinson_shift_2x2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> C64 {
    let zero = C64::new(0.0, 0.0);
    let (a11, a12, a21, a22) = (a[0][0], a[0][1], a[1][0], a[1][1]);
    let (b11, b12, b22) = (b[0][0], b[0][1], b[1][1]);
    if b11 == zero || b22 == zero {
        return if b22 != zero {
            a22 / b22
        } else if b11 != zero {
            a11 / b11
        } else {
            a22
        };
    }
    let qa = b11 * b22;
    let qb = -(a11 * b22 + a22 * b11 - a21 * b12);
    let qc = a11 * a22 - a12 * a21;
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    let sgn = if (qb.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let t = -0.5 * (qb + sgn * disc);
    let target = a22 / b22;
    if t == zero {
        return zero;
    }
    let r1 = t / qa;
    let r2 = qc / t;
    if !(r1.re.is_finite() && r1.im.is_finite()) {
        return r2;
    }
    if !(r2.re.is_finite() && r2.im.is_finite()) {
        return r1;
    }
    if (r1 - target).norm() <= (r2 - target).norm() {
        r1
    } else {
        r2
    }
}

/// Shift used after a run of sweeps without deflation: the regular shift
/// pushed off by the size of the trailing subdiagonal and turned by `exp(0.4 i)`.
pub fn exceptional_shift(alpha: C64, sigma_last: C64, b_prev: C64) -> C64 {
    let b = b_prev.norm().max(f64::EPSILON);
    let push = (sigma_last.norm() / b).min(1.0 / f64::EPSILON);
    (alpha + push) * C64::from_polar(1.0, 0.4)
}

/// `|sigma| <= tol (|A(k,k)| + |A(k+1,k+1)|)` with an absolute floor
/// `tol * anorm` for nearly zero diagonals.
pub fn is_negligible_subdiagonal(sigma: C64, akk: C64, ak1: C64, anorm: f64, tol: f64) -> bool {
    let s = sigma.norm();
    s <= f64::MIN_POSITIVE.max(tol * (akk.norm() + ak1.norm())) || s <= tol * anorm
}
