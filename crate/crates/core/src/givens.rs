use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Complex plane rotation `G = [[c, -conj(s)], [s, conj(c)]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GivensRotation {
    pub c: C64,
    pub s: C64,
}

impl GivensRotation {
    pub const IDENTITY: GivensRotation = GivensRotation { c: C64 { re: 1.0, im: 0.0 }, s: C64 { re: 0.0, im: 0.0 } };

    /// Returns `G` with `G^* (v1, v2) = (r, 0)`, `r >= 0`, together with `r`.
    pub fn new(v1: C64, v2: C64) -> Result<(Self, f64)> {
        if !(v1.re.is_finite() && v1.im.is_finite() && v2.re.is_finite() && v2.im.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite rotation input ({v1}, {v2})")));
        }
        Ok(Self::compute(v1, v2))
    }

    fn compute(v1: C64, v2: C64) -> (Self, f64) {
        let a1 = v1.norm();
        let a2 = v2.norm();
        if a2 == 0.0 {
            if a1 == 0.0 {
                return (Self::IDENTITY, 0.0);
            }
            return (GivensRotation { c: v1 / a1, s: C64::new(0.0, 0.0) }, a1);
        }
        let r = a1.hypot(a2);
        (GivensRotation { c: v1 / r, s: v2 / r }, r)
    }

    /// Returns `Z` such that the row `(x1, x2) Z = (0, r)`, `r >= 0`.
    pub fn zeroing_row_head(x1: C64, x2: C64) -> Result<(Self, f64)> {
        let (g, r) = Self::new(x2.conj(), x1.conj())?;
        Ok((GivensRotation { c: g.c.conj(), s: -g.s.conj() }, r))
    }

    /// `G^* (x, y)`.
    #[inline]
    pub fn apply_adjoint(&self, x: C64, y: C64) -> (C64, C64) {
        (self.c.conj() * x + self.s.conj() * y, -self.s * x + self.c * y)
    }

    /// `G (x, y)`.
    #[inline]
    pub fn apply(&self, x: C64, y: C64) -> (C64, C64) {
        (self.c * x - self.s.conj() * y, self.s * x + self.c.conj() * y)
    }

    /// Row vector times `G`: `(x, y) G`.
    #[inline]
    pub fn apply_right(&self, x: C64, y: C64) -> (C64, C64) {
        (x * self.c + y * self.s, -x * self.s.conj() + y * self.c.conj())
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.c, -self.s.conj()], [self.s, self.c.conj()]]
    }

    pub fn adjoint(&self) -> GivensRotation {
        GivensRotation { c: self.c.conj(), s: -self.s }
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.c.norm_sqr() + self.s.norm_sqr() - 1.0).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_cases() {
        let (g, r) = GivensRotation::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(g, GivensRotation::IDENTITY);
        assert_eq!(r, 1.0);
        let (g, r) = GivensRotation::new(c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(g, GivensRotation::IDENTITY);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn pure_swap() {
        let (g, _) = GivensRotation::new(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(g.c, c(0.0, 0.0));
        assert_eq!(g.s, c(1.0, 0.0));
        let (x, y) = g.apply_adjoint(c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!((x, y), (c(1.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn three_four_five() {
        let (g, r) = GivensRotation::new(c(3.0, 0.0), c(4.0, 0.0)).unwrap();
        assert!((r - 5.0).abs() < 1e-15);
        assert!((g.c.norm() - 0.6).abs() < 1e-15 && (g.s.norm() - 0.8).abs() < 1e-15);
        let (x, y) = g.apply_adjoint(c(3.0, 0.0), c(4.0, 0.0));
        assert!((x - c(5.0, 0.0)).norm() < 1e-15 && y.norm() < 1e-15);
    }

    #[test]
    fn rejects_nan() {
        assert!(GivensRotation::new(c(f64::NAN, 0.0), c(1.0, 0.0)).is_err());
        assert!(GivensRotation::new(c(1.0, 0.0), c(0.0, f64::INFINITY)).is_err());
    }

    #[test]
    fn row_head_zeroing() {
        let x1 = c(0.3, -1.2);
        let x2 = c(-0.7, 0.4);
        let (z, r) = GivensRotation::zeroing_row_head(x1, x2).unwrap();
        let (a, b) = z.apply_right(x1, x2);
        let tol = 4.0 * f64::EPSILON * x1.norm().hypot(x2.norm());
        assert!(a.norm() <= tol);
        assert!((b - c(r, 0.0)).norm() <= tol);
    }
}
