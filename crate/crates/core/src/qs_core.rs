use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mat::CMat;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub(crate) fn check_finite(x: C64, what: &str) -> Result<()> {
    if x.re.is_finite() && x.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite {what}: {x}")))
    }
}

/// Diagonal-inclusive upper generators of an `N x N` matrix (0-based):
/// `M(i, j) = g[i] b[i] ... b[j-1] h[j]` for `i <= j`.
///
/// `g[i]` is `1 x r_i`, `h[j]` is `r_j x 1` and `b[k]` is `r_k x r_{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularGenerators {
    pub g: Vec<CMat>,
    pub h: Vec<CMat>,
    pub b: Vec<CMat>,
}

impl TriangularGenerators {
    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.g.iter().map(CMat::cols).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.g.len();
        if self.h.len() != n || self.b.len() + 1 != n.max(1) {
            return Err(Error::Structural(format!(
                "triangular generator counts g={}, h={}, b={}",
                n,
                self.h.len(),
                self.b.len()
            )));
        }
        for i in 0..n {
            let r = self.g[i].cols();
            if self.g[i].rows() != 1 || self.h[i].shape() != (r, 1) {
                return Err(Error::Structural(format!("triangular generators at index {i}")));
            }
            if i + 1 < n && self.b[i].shape() != (r, self.g[i + 1].cols()) {
                return Err(Error::Structural(format!("triangular b[{i}] has shape {:?}", self.b[i].shape())));
            }
        }
        Ok(())
    }

    /// Entry `(i, j)`, `i <= j`, by walking the generator chain.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        assert!(i <= j);
        let mut acc = self.g[i].clone();
        for k in i..j {
            acc = acc.mul(&self.b[k]);
        }
        acc.dot(&self.h[j])
    }

    /// All entries on and above the diagonal, row by row in O(N^2).
    pub fn upper_dense(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            let mut acc = self.g[i].clone();
            for j in i..n {
                m[(i, j)] = acc.dot(&self.h[j]);
                if j + 1 < n {
                    acc = acc.mul(&self.b[j]);
                }
            }
        }
        m
    }
}

/// Strictly upper generators of an `N x N` matrix (0-based):
/// `M(i, j) = g[i] b[i+1] ... b[j-1] h[j]` for `i < j`.
///
/// Storage is padded so every index `0..N` is present: `g[i]` is `1 x r_i`,
/// `h[j]` is `r_{j-1} x 1`, `b[k]` is `r_{k-1} x r_k`, with `r_{-1} = r_{N-1} = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiseparableGenerators {
    pub g: Vec<CMat>,
    pub h: Vec<CMat>,
    pub b: Vec<CMat>,
}

impl QuasiseparableGenerators {
    pub fn n(&self) -> usize {
        self.g.len()
    }

    /// Orders `r_0 .. r_{N-2}`.
    pub fn orders(&self) -> Vec<usize> {
        let n = self.n();
        self.g[..n.saturating_sub(1)].iter().map(CMat::cols).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.g.len();
        if self.h.len() != n || self.b.len() != n {
            return Err(Error::Structural(format!(
                "quasiseparable generator counts g={}, h={}, b={}",
                n,
                self.h.len(),
                self.b.len()
            )));
        }
        let order = |k: isize| -> usize {
            if k < 0 || k as usize >= n {
                0
            } else {
                self.g[k as usize].cols()
            }
        };
        if n > 0 && self.g[n - 1].cols() != 0 {
            return Err(Error::Structural("last quasiseparable g must be empty".into()));
        }
        for k in 0..n {
            let (rp, r) = (order(k as isize - 1), order(k as isize));
            if self.g[k].rows() != 1 || self.h[k].shape() != (rp, 1) || self.b[k].shape() != (rp, r) {
                return Err(Error::Structural(format!("quasiseparable generators at index {k}")));
            }
        }
        Ok(())
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        assert!(i < j);
        let mut acc = self.g[i].clone();
        for k in i + 1..j {
            acc = acc.mul(&self.b[k]);
        }
        acc.dot(&self.h[j])
    }

    /// Strictly upper entries in O(N^2); the diagonal and below are zero.
    pub fn strict_upper_dense(&self) -> CMat {
        let n = self.n();
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            let mut acc = self.g[i].clone();
            for j in i + 1..n {
                m[(i, j)] = acc.dot(&self.h[j]);
                if j + 1 < n {
                    acc = acc.mul(&self.b[j]);
                }
            }
        }
        m
    }
}

/// Polynomial `a_0 + a_1 x + ... + a_n x^n` with the divisor used to normalize it.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<C64>,
    pub scale: f64,
}

impl Polynomial {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        for (k, &a) in coeffs.iter().enumerate() {
            check_finite(a, &format!("coefficient a_{k}"))?;
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        }
        Ok(Polynomial { coeffs, scale: 1.0 })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn norm2(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |acc, a| acc.hypot(a.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| *a == ZERO)
    }

    /// Divides by the Euclidean norm of the coefficient vector.
    pub fn normalized(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        let s = self.norm2();
        Ok(Polynomial { coeffs: self.coeffs.iter().map(|a| a / s).collect(), scale: self.scale * s })
    }

    /// Horner evaluation.
    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * x + a)
    }
}

/// O(N) representation of a pair `A = V - z w^*` (Hessenberg), `B = U - p q^*`
/// (triangular) with unitary `V`, `U`.
///
/// Stored vectors hold unconjugated entries; conjugation happens at use sites.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilGenerators {
    pub n: usize,
    /// Subdiagonal `A(k+1, k)`, length `N-1`.
    pub sigma: Vec<C64>,
    pub v: TriangularGenerators,
    /// Diagonal of `B`, length `N`.
    pub d_b: Vec<C64>,
    pub u: QuasiseparableGenerators,
    pub z: Vec<C64>,
    pub w: Vec<C64>,
    pub p: Vec<C64>,
    pub q: Vec<C64>,
}

/// Explicit matrices reassembled from generators.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseReconstruction {
    pub a: CMat,
    pub b: CMat,
    pub v: CMat,
    pub u: CMat,
}

impl PencilGenerators {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::Size("empty pencil".into()));
        }
        if self.sigma.len() + 1 != n
            || self.d_b.len() != n
            || [&self.z, &self.w, &self.p, &self.q].iter().any(|v| v.len() != n)
            || self.v.n() != n
            || self.u.n() != n
        {
            return Err(Error::Structural("vector lengths do not match the pencil size".into()));
        }
        self.v.validate()?;
        self.u.validate()
    }

    pub fn v_orders(&self) -> Vec<usize> {
        self.v.orders()
    }

    pub fn u_orders(&self) -> Vec<usize> {
        self.u.orders()
    }

    /// `A(k, k)`.
    #[inline]
    pub fn a_diag(&self, k: usize) -> C64 {
        self.v.g[k].dot(&self.v.h[k]) - self.z[k] * self.w[k].conj()
    }

    /// `A(k, k+1)`.
    pub fn a_super(&self, k: usize) -> C64 {
        self.v.g[k].mul(&self.v.b[k]).dot(&self.v.h[k + 1]) - self.z[k] * self.w[k + 1].conj()
    }

    /// `B(k, k+1)`.
    pub fn b_super(&self, k: usize) -> C64 {
        self.u.g[k].dot(&self.u.h[k + 1]) - self.p[k] * self.q[k + 1].conj()
    }

    /// 2x2 blocks of `A` and `B` at rows/columns `hi-1, hi`.
    pub fn block_at(&self, hi: usize) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
        let k = hi - 1;
        let a = [[self.a_diag(k), self.a_super(k)], [self.sigma[k], self.a_diag(hi)]];
        let b = [[self.d_b[k], self.b_super(k)], [ZERO, self.d_b[hi]]];
        (a, b)
    }

    pub fn reconstruct(&self) -> Result<DenseReconstruction> {
        self.validate()?;
        let n = self.n;
        let mut v = self.v.upper_dense();
        for i in 0..n {
            for j in 0..i {
                v[(i, j)] = if i == j + 1 {
                    self.sigma[j] + self.z[i] * self.w[j].conj()
                } else {
                    self.z[i] * self.w[j].conj()
                };
            }
        }
        let mut u = self.u.strict_upper_dense();
        for i in 0..n {
            for j in 0..i {
                u[(i, j)] = self.p[i] * self.q[j].conj();
            }
            u[(i, i)] = self.d_b[i] + self.p[i] * self.q[i].conj();
        }
        let mut a = CMat::zeros(n, n);
        let mut b = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i > j + 1 {
                    a[(i, j)] = v[(i, j)] - self.z[i] * self.w[j].conj();
                } else if i == j + 1 {
                    a[(i, j)] = self.sigma[j];
                } else {
                    a[(i, j)] = v[(i, j)] - self.z[i] * self.w[j].conj();
                }
                if i == j {
                    b[(i, j)] = self.d_b[i];
                } else {
                    b[(i, j)] = u[(i, j)] - self.p[i] * self.q[j].conj();
                }
            }
        }
        Ok(DenseReconstruction { a, b, v, u })
    }
}

/// Reassembles `A`, `B`, `V`, `U` explicitly. On and above the diagonal of `V`
/// and strictly above the diagonal of `U` the generator products are used;
/// the diagonal of `B` and the subdiagonal of `A` are the stored values.
pub fn reconstruct_dense(gen: &PencilGenerators) -> Result<DenseReconstruction> {
    gen.reconstruct()
}

/// `A(k, k)` for all `k`, in O(N).
pub fn diag_entries_a(gen: &PencilGenerators) -> Vec<C64> {
    (0..gen.n).map(|k| gen.a_diag(k)).collect()
}

/// Trailing 2x2 blocks `(A_tail, B_tail)`.
pub fn trailing_block(gen: &PencilGenerators) -> Result<([[C64; 2]; 2], [[C64; 2]; 2])> {
    if gen.n < 2 {
        return Err(Error::Size(format!("trailing block needs N >= 2, got {}", gen.n)));
    }
    Ok(gen.block_at(gen.n - 1))
}

/// Companion pencil `(A, B)` with `A` the Frobenius companion matrix of the
/// monic-free part (last column `-a_0 .. -a_{n-1}`) and `B = diag(1, .., 1, a_n)`.
pub fn build_companion_pencil(poly: &Polynomial, normalize: bool) -> Result<PencilGenerators> {
    if poly.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    if poly.degree() == 0 {
        return Err(Error::InvalidInput("degree 0 polynomial has no roots".into()));
    }
    let poly = if normalize { poly.normalized()? } else { poly.clone() };
    let a = &poly.coeffs;
    let n = poly.degree();
    let an = a[n];

    let one = CMat::scalar(ONE);
    let zero = CMat::scalar(ZERO);
    let v = TriangularGenerators {
        g: (0..n).map(|i| if i == 0 { one.clone() } else { zero.clone() }).collect(),
        h: (0..n).map(|j| if j == n - 1 { one.clone() } else { zero.clone() }).collect(),
        b: vec![one.clone(); n - 1],
    };

    let order = |k: isize| -> usize { usize::from(k >= 0 && (k as usize) + 1 < n) };
    let u = QuasiseparableGenerators {
        g: (0..n).map(|k| CMat::zeros(1, order(k as isize))).collect(),
        h: (0..n).map(|k| CMat::zeros(order(k as isize - 1), 1)).collect(),
        b: (0..n)
            .map(|k| {
                let (rp, r) = (order(k as isize - 1), order(k as isize));
                if rp == 1 && r == 1 {
                    one.clone()
                } else {
                    CMat::zeros(rp, r)
                }
            })
            .collect(),
    };

    let mut z = vec![ZERO; n];
    z[0] = a[0] + ONE;
    z[1..n].copy_from_slice(&a[1..n]);
    let mut w = vec![ZERO; n];
    w[n - 1] = ONE;
    let mut p = vec![ZERO; n];
    p[n - 1] = ONE;
    let mut q = vec![ZERO; n];
    q[n - 1] = (ONE - an).conj();
    let mut d_b = vec![ONE; n];
    d_b[n - 1] = an;

    let gen = PencilGenerators { n, sigma: vec![ONE; n - 1], v, d_b, u, z, w, p, q };
    gen.validate()?;
    Ok(gen)
}

/// The companion pencil assembled directly as dense matrices.
pub fn companion_dense(poly: &Polynomial, normalize: bool) -> Result<(CMat, CMat)> {
    if poly.is_zero() || poly.degree() == 0 {
        return Err(Error::InvalidInput("need a nonzero polynomial of degree >= 1".into()));
    }
    let poly = if normalize { poly.normalized()? } else { poly.clone() };
    let n = poly.degree();
    let mut a = CMat::zeros(n, n);
    let mut b = CMat::identity(n);
    for k in 0..n - 1 {
        a[(k + 1, k)] = ONE;
    }
    for i in 0..n {
        a[(i, n - 1)] = -poly.coeffs[i];
    }
    b[(n - 1, n - 1)] = poly.coeffs[n];
    Ok((a, b))
}
