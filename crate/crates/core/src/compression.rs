//! Minimal-order upper generators for unitary block matrices with low-rank
//! lower part.
//!
//! Block rows have heights `m_k`, block columns widths `n_k`. Lower blocks are
//! `p(i) a(i-1) ... a(j+1) q(j)` for `i > j`, upper blocks
//! `g(i) b(i+1) ... b(j-1) h(j)` for `i < j`, diagonal blocks `d(k)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::givens::GivensRotation;
use crate::mat::CMat;
use crate::qs_core::PencilGenerators;

const ORTHONORMALITY_TOL: f64 = 1e-8;

/// Read access to a block matrix in generator form (0-based blocks).
pub trait BlockSource {
    fn blocks(&self) -> usize;
    fn m(&self, k: usize) -> usize;
    fn n(&self, k: usize) -> usize;
    fn p(&self, k: usize) -> CMat;
    fn q(&self, k: usize) -> CMat;
    fn a(&self, k: usize) -> CMat;
    fn d(&self, k: usize) -> CMat;
    fn g(&self, k: usize) -> CMat;
    fn h(&self, k: usize) -> CMat;
    fn b(&self, k: usize) -> CMat;
}

/// Explicitly stored block generators.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockUnitary {
    pub m: Vec<usize>,
    pub n: Vec<usize>,
    pub p: Vec<CMat>,
    pub q: Vec<CMat>,
    pub a: Vec<CMat>,
    pub d: Vec<CMat>,
    pub g: Vec<CMat>,
    pub h: Vec<CMat>,
    pub b: Vec<CMat>,
}

impl BlockSource for BlockUnitary {
    fn blocks(&self) -> usize {
        self.m.len()
    }
    fn m(&self, k: usize) -> usize {
        self.m[k]
    }
    fn n(&self, k: usize) -> usize {
        self.n[k]
    }
    fn p(&self, k: usize) -> CMat {
        self.p[k].clone()
    }
    fn q(&self, k: usize) -> CMat {
        self.q[k].clone()
    }
    fn a(&self, k: usize) -> CMat {
        self.a[k].clone()
    }
    fn d(&self, k: usize) -> CMat {
        self.d[k].clone()
    }
    fn g(&self, k: usize) -> CMat {
        self.g[k].clone()
    }
    fn h(&self, k: usize) -> CMat {
        self.h[k].clone()
    }
    fn b(&self, k: usize) -> CMat {
        self.b[k].clone()
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut o = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    o.push(0);
    for &s in sizes {
        acc += s;
        o.push(acc);
    }
    o
}

impl BlockUnitary {
    pub fn validate(&self) -> Result<()> {
        let nb = self.m.len();
        let lens = [self.n.len(), self.p.len(), self.q.len(), self.a.len(), self.d.len(), self.g.len(), self.h.len(), self.b.len()];
        if lens.iter().any(|&l| l != nb) || nb == 0 {
            return Err(Error::Structural("block generator lists differ in length".into()));
        }
        let rl = |k: isize| if k < 0 || k as usize >= nb { 0 } else { self.q[k as usize].rows() };
        let ru = |k: isize| if k < 0 || k as usize >= nb { 0 } else { self.g[k as usize].cols() };
        for k in 0..nb {
            let ki = k as isize;
            let ok = self.p[k].shape() == (self.m[k], rl(ki - 1))
                && self.q[k].shape() == (rl(ki), self.n[k])
                && self.a[k].shape() == (rl(ki), rl(ki - 1))
                && self.d[k].shape() == (self.m[k], self.n[k])
                && self.g[k].shape() == (self.m[k], ru(ki))
                && self.h[k].shape() == (ru(ki - 1), self.n[k])
                && self.b[k].shape() == (ru(ki - 1), ru(ki));
            if !ok {
                return Err(Error::Structural(format!("block generators at block {k} have inconsistent shapes")));
            }
        }
        if rl(nb as isize - 1) != 0 || ru(nb as isize - 1) != 0 {
            return Err(Error::Structural("last block must have empty lower and upper orders".into()));
        }
        Ok(())
    }

    /// The full matrix assembled from the generators.
    pub fn dense(&self) -> CMat {
        let ro = offsets(&self.m);
        let co = offsets(&self.n);
        let nb = self.m.len();
        let mut out = CMat::zeros(ro[nb], co[nb]);
        for i in 0..nb {
            out.set_block(ro[i], co[i], &self.d[i]);
            let mut acc = self.p[i].clone();
            for j in (0..i).rev() {
                out.set_block(ro[i], co[j], &acc.mul(&self.q[j]));
                acc = acc.mul(&self.a[j]);
            }
            let mut acc = self.g[i].clone();
            for j in i + 1..nb {
                out.set_block(ro[i], co[j], &acc.mul(&self.h[j]));
                acc = acc.mul(&self.b[j]);
            }
        }
        out
    }
}

/// Upper generators produced by compression for blocks `0..=last`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompressedUpper {
    pub g: Vec<CMat>,
    pub b: Vec<CMat>,
    /// `h[k]` for `k = 0..=last+1` (clipped to the block count).
    pub h: Vec<CMat>,
    /// Orders `s_0 ..= s_last`.
    pub orders: Vec<usize>,
    /// `Y_last b(last+1)`: links the new generators to the untouched tail.
    pub tail_b: Option<CMat>,
}

/// Per-step unitary factors, recorded for factorization checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WfFactors {
    pub dim: usize,
    /// `(offset, W_k)` acting on column coordinates.
    pub w: Vec<(usize, CMat)>,
    /// `(offset, F_k)`, including the terminal factor.
    pub f: Vec<(usize, CMat)>,
}

/// Returns `(M W^*, W^*)` with the first `cols - rho` columns of `M W^*` zero
/// in the last `rho` rows; rows are cleared bottom-up.
fn annihilate_columns(mut m: CMat, rho: usize) -> Result<(CMat, CMat)> {
    let (r, c) = m.shape();
    let mut wstar = CMat::identity(c);
    for idx in 0..rho.min(r) {
        let i = r - 1 - idx;
        let pc = c - 1 - idx;
        for j in 0..pc {
            if m[(i, j)] == C64::new(0.0, 0.0) {
                continue;
            }
            let (z, _) = GivensRotation::zeroing_row_head(m[(i, j)], m[(i, pc)])?;
            m.rotate_cols(j, pc, &z, 0, r);
            wstar.rotate_cols(j, pc, &z, 0, c);
        }
    }
    Ok((m, wstar))
}

/// Unitary `F` with `F^* Y = [I; 0]` for `Y` with orthonormal columns.
fn complete_orthonormal(mut y: CMat, block: usize) -> Result<CMat> {
    let (rows, cols) = y.shape();
    let mut f = CMat::identity(rows);
    for t in 0..cols {
        for i in (t + 1..rows).rev() {
            let (g, _) = GivensRotation::new(y[(i - 1, t)], y[(i, t)])?;
            y.rotate_rows(i - 1, i, &g, t, cols);
            f.rotate_cols(i - 1, i, &g, 0, rows);
        }
    }
    let mut dev = 0.0f64;
    for i in 0..rows {
        for j in 0..cols {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((y[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    if dev > ORTHONORMALITY_TOL {
        return Err(Error::Consistency { block, deviation: dev });
    }
    Ok(f)
}

/// Forward compression sweep over blocks `0..=stop` (default: all).
pub fn compress_source<S: BlockSource>(src: &S, stop: Option<usize>, mut factors: Option<&mut WfFactors>) -> Result<CompressedUpper> {
    let nb = src.blocks();
    let mut out = CompressedUpper { g: Vec::new(), b: Vec::new(), h: Vec::new(), orders: Vec::new(), tail_b: None };
    if nb == 0 {
        return Ok(out);
    }
    let mut rho_prev = 0usize;
    let mut s_prev = 0usize;
    let mut x = CMat::zeros(0, 0);
    let mut y = CMat::zeros(0, 0);
    let mut zst = CMat::zeros(0, 0);
    let mut hs = CMat::zeros(0, src.n(0));
    out.h.push(hs.clone());
    let mut offset = 0usize;
    if let Some(fct) = factors.as_deref_mut() {
        fct.dim = (0..nb).map(|k| src.m(k)).sum();
        fct.w.clear();
        fct.f.clear();
    }

    let last = if nb >= 2 { Some(stop.map_or(nb - 2, |s| s.min(nb - 2))) } else { None };
    if let Some(last) = last {
        out.g.reserve(last + 1);
        out.b.reserve(last + 1);
        out.h.reserve(last + 1);
        out.orders.reserve(last + 1);
        for k in 0..=last {
            let (mk, nk) = (src.m(k), src.n(k));
            let qk = src.q(k);
            let rl = qk.rows();
            let rho = (nk + rho_prev).min(rl);
            let nu = nk + rho_prev - rho;
            let s = (mk + s_prev).checked_sub(nu).ok_or_else(|| {
                Error::Structural(format!("block {k}: negative order (m={mk}, s_prev={s_prev}, nu={nu})"))
            })?;
            let ax = if k == 0 { CMat::zeros(rl, 0) } else { src.a(k).mul(&x) };
            let px = if k == 0 { CMat::zeros(mk, 0) } else { src.p(k).mul(&x) };
            let (mrow, wstar) =
                annihilate_columns(ax.hcat(&qk), rho).map_err(|e| Error::Numerical { step: k, detail: e.to_string() })?;
            x = mrow.block(0, nu, rl, rho);

            let zk = zst.hcat(&hs).vcat(&px.hcat(&src.d(k))).mul(&wstar);
            let rows = s_prev + mk;
            let f = complete_orthonormal(zk.block(0, 0, rows, nu), k)?;
            let bs = f.block(0, nu, s_prev, s);
            let gs = f.block(s_prev, nu, mk, s);
            let hp = zk.block(0, nu, s_prev, rho);
            let hpp = zk.block(s_prev, nu, mk, rho);

            let gsa = gs.adjoint();
            let bsa = bs.adjoint();
            y = gsa.mul(&src.g(k)).add(&bsa.mul(&y).mul(&src.b(k)));
            zst = gsa.mul(&hpp).add(&bsa.mul(&hp));
            hs = y.mul(&src.h(k + 1));

            if let Some(fct) = factors.as_deref_mut() {
                fct.w.push((offset, wstar.adjoint()));
                fct.f.push((offset, f.clone()));
            }
            offset += nu;
            out.g.push(gs);
            out.b.push(bs);
            out.h.push(hs.clone());
            out.orders.push(s);
            rho_prev = rho;
            s_prev = s;
        }
        if last + 2 < nb + 1 && last + 1 < nb {
            out.tail_b = Some(y.mul(&src.b(last + 1)));
        }
        if last + 2 == nb {
            if let Some(fct) = factors.as_deref_mut() {
                let k = nb - 1;
                let px = src.p(k).mul(&x);
                let fin = zst.hcat(&hs).vcat(&px.hcat(&src.d(k)));
                fct.f.push((offset, fin));
            }
        }
    } else if let Some(fct) = factors {
        fct.f.push((0, src.d(0)));
    }
    Ok(out)
}

/// Compresses explicitly stored block generators.
pub fn compress_unitary(u: &BlockUnitary) -> Result<CompressedUpper> {
    u.validate()?;
    compress_source(u, None, None)
}

/// Compression that also records the per-step unitary factors.
pub fn compress_unitary_with_factors(u: &BlockUnitary) -> Result<(CompressedUpper, WfFactors)> {
    u.validate()?;
    let mut f = WfFactors::default();
    let c = compress_source(u, None, Some(&mut f))?;
    Ok((c, f))
}

/// `max |F W - U|` with `F = F_1 F_2 ...` and `W = ... W_2 W_1`, each factor
/// embedded at its recorded offset.
pub fn wf_factorization_check(u: &CMat, factors: &WfFactors) -> f64 {
    let dim = factors.dim;
    let embed = |off: usize, m: &CMat| {
        let mut e = CMat::identity(dim);
        e.set_block(off, off, m);
        e
    };
    let mut f = CMat::identity(dim);
    for (off, fk) in &factors.f {
        f = f.mul(&embed(*off, fk));
    }
    let mut w = CMat::identity(dim);
    for (off, wk) in &factors.w {
        w = embed(*off, wk).mul(&w);
    }
    f.mul(&w).max_abs_diff(u)
}

/// Compressed upper part reassembled as a dense matrix: blocks `(i, j)`, `i < j`.
pub fn compressed_strict_upper(c: &CompressedUpper, m: &[usize], n: &[usize]) -> CMat {
    let ro = offsets(m);
    let co = offsets(n);
    let nb = m.len();
    let mut out = CMat::zeros(ro[nb], co[nb]);
    for i in 0..c.g.len() {
        let mut acc = c.g[i].clone();
        for j in i + 1..nb.min(c.h.len()) {
            out.set_block(ro[i], co[j], &acc.mul(&c.h[j]));
            if j < c.b.len() {
                acc = acc.mul(&c.b[j]);
            } else {
                break;
            }
        }
    }
    out
}

struct USource<'a>(&'a PencilGenerators);

impl BlockSource for USource<'_> {
    fn blocks(&self) -> usize {
        self.0.n
    }
    fn m(&self, _: usize) -> usize {
        1
    }
    fn n(&self, _: usize) -> usize {
        1
    }
    fn p(&self, k: usize) -> CMat {
        if k == 0 {
            CMat::zeros(1, 0)
        } else {
            CMat::scalar(self.0.p[k])
        }
    }
    fn q(&self, k: usize) -> CMat {
        if k + 1 < self.0.n {
            CMat::scalar(self.0.q[k].conj())
        } else {
            CMat::zeros(0, 1)
        }
    }
    fn a(&self, k: usize) -> CMat {
        let rl = |j: usize| usize::from(j + 1 < self.0.n);
        CMat::from_fn(rl(k), if k == 0 { 0 } else { rl(k - 1) }, |_, _| C64::new(1.0, 0.0))
    }
    fn d(&self, k: usize) -> CMat {
        CMat::scalar(self.0.d_b[k] + self.0.p[k] * self.0.q[k].conj())
    }
    fn g(&self, k: usize) -> CMat {
        self.0.u.g[k].clone()
    }
    fn h(&self, k: usize) -> CMat {
        self.0.u.h[k].clone()
    }
    fn b(&self, k: usize) -> CMat {
        self.0.u.b[k].clone()
    }
}

/// `V` in the shifted block layout: block row `k` is row `k` (the last block
/// row is empty), block column `k` is column `k - 1` (the first is empty),
/// so the Hessenberg part of `V` becomes block lower triangular.
struct VSource<'a>(&'a PencilGenerators);

impl BlockSource for VSource<'_> {
    fn blocks(&self) -> usize {
        self.0.n + 1
    }
    fn m(&self, k: usize) -> usize {
        usize::from(k < self.0.n)
    }
    fn n(&self, k: usize) -> usize {
        usize::from(k > 0)
    }
    fn p(&self, k: usize) -> CMat {
        let n = self.0.n;
        match k {
            0 => CMat::zeros(1, 0),
            k if k == n => CMat::zeros(0, 1),
            _ => CMat::scalar(self.0.z[k]),
        }
    }
    fn q(&self, k: usize) -> CMat {
        let n = self.0.n;
        match k {
            0 => CMat::zeros(1, 0),
            k if k == n => CMat::zeros(0, 1),
            _ => CMat::scalar(self.0.w[k - 1].conj()),
        }
    }
    fn a(&self, k: usize) -> CMat {
        let n = self.0.n;
        match k {
            0 => CMat::zeros(1, 0),
            k if k == n => CMat::zeros(0, 1),
            _ => CMat::scalar(C64::new(1.0, 0.0)),
        }
    }
    fn d(&self, k: usize) -> CMat {
        let n = self.0.n;
        match k {
            0 => CMat::zeros(1, 0),
            k if k == n => CMat::zeros(0, 1),
            _ => CMat::scalar(self.0.sigma[k - 1] + self.0.z[k] * self.0.w[k - 1].conj()),
        }
    }
    fn g(&self, k: usize) -> CMat {
        if k < self.0.n {
            self.0.v.g[k].clone()
        } else {
            CMat::zeros(0, 0)
        }
    }
    fn h(&self, k: usize) -> CMat {
        if k == 0 {
            CMat::zeros(0, 0)
        } else {
            self.0.v.h[k - 1].clone()
        }
    }
    fn b(&self, k: usize) -> CMat {
        let n = self.0.n;
        if k == 0 {
            CMat::zeros(0, self.0.v.g[0].cols())
        } else if k == n {
            CMat::zeros(self.0.v.g[n - 1].cols(), 0)
        } else {
            self.0.v.b[k - 1].clone()
        }
    }
}

fn materialize<S: BlockSource>(s: &S) -> BlockUnitary {
    let nb = s.blocks();
    let collect = |f: &dyn Fn(usize) -> CMat| (0..nb).map(f).collect::<Vec<_>>();
    BlockUnitary {
        m: (0..nb).map(|k| s.m(k)).collect(),
        n: (0..nb).map(|k| s.n(k)).collect(),
        p: collect(&|k| s.p(k)),
        q: collect(&|k| s.q(k)),
        a: collect(&|k| s.a(k)),
        d: collect(&|k| s.d(k)),
        g: collect(&|k| s.g(k)),
        h: collect(&|k| s.h(k)),
        b: collect(&|k| s.b(k)),
    }
}

/// `U` of the pencil as scalar blocks with order-1 lower generators.
pub fn u_block_form(gen: &PencilGenerators) -> BlockUnitary {
    materialize(&USource(gen))
}

/// `V` of the pencil in the shifted block layout (`N + 1` blocks, the first
/// block column and the last block row empty).
pub fn v_block_form(gen: &PencilGenerators) -> BlockUnitary {
    materialize(&VSource(gen))
}

/// Compresses the generators of `V` and `U` in place through the generic block
/// recursion. With `through = Some(hi)` only rows `0..=hi` are recompressed
/// and linked to the unchanged remainder.
pub fn compress_pencil_generic(gen: &mut PencilGenerators, through: Option<usize>) -> Result<()> {
    let n = gen.n;
    if n < 2 {
        return Ok(());
    }
    let cv = compress_source(&VSource(gen), through, None)?;
    let cu = compress_source(&USource(gen), through.map(|h| h.saturating_sub(1)), None)?;

    let last_v = cv.g.len() - 1;
    for (i, g) in cv.g.into_iter().enumerate() {
        gen.v.g[i] = g;
    }
    for (k, b) in cv.b.into_iter().enumerate().skip(1) {
        gen.v.b[k - 1] = b;
    }
    for (j, h) in cv.h.into_iter().enumerate().skip(1) {
        gen.v.h[j - 1] = h;
    }
    if last_v + 1 < n {
        if let Some(t) = cv.tail_b {
            gen.v.b[last_v] = t;
        }
    }

    let last_u = cu.g.len() - 1;
    for (i, g) in cu.g.into_iter().enumerate() {
        gen.u.g[i] = g;
    }
    for (k, b) in cu.b.into_iter().enumerate() {
        gen.u.b[k] = b;
    }
    for (j, h) in cu.h.into_iter().enumerate() {
        gen.u.h[j] = h;
    }
    if let Some(t) = cu.tail_b {
        gen.u.b[last_u + 1] = t;
    }
    Ok(())
}

/// Same result as [`compress_pencil_generic`], specialized to the pencil block
/// layouts (scalar blocks for `U`, shifted unit blocks for `V`).
pub fn compress_pencil(gen: &mut PencilGenerators, through: Option<usize>) -> Result<()> {
    let n = gen.n;
    if n < 2 {
        return Ok(());
    }
    compress_v(gen, through.map_or(n - 1, |h| h.min(n - 1)))?;
    compress_u(gen, through.map_or(n - 2, |h| h.saturating_sub(1).min(n - 2)))
}

fn check_unit(r: f64, block: usize) -> Result<()> {
    let dev = (r - 1.0).abs();
    if dev > ORTHONORMALITY_TOL || !dev.is_finite() {
        return Err(Error::Consistency { block, deviation: dev });
    }
    Ok(())
}

fn num(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Numerical { step, detail: e.to_string() }
}

/// `U` blocks are scalars; every compressed order is 1.
fn compress_u(gen: &mut PencilGenerators, last: usize) -> Result<()> {
    let one = C64::new(1.0, 0.0);
    let d = |gen: &PencilGenerators, k: usize| gen.d_b[k] + gen.p[k] * gen.q[k].conj();

    let mut y = gen.u.g[0].clone();
    let mut x = gen.q[0].conj();
    let mut zst = d(gen, 0);
    let mut hs = y.dot(&gen.u.h[1]);
    gen.u.g[0] = CMat::scalar(one);
    gen.u.b[0] = CMat::zeros(0, 1);
    gen.u.h[0] = CMat::zeros(0, 1);
    gen.u.h[1] = CMat::scalar(hs);

    for k in 1..=last {
        let (z, r) = GivensRotation::zeroing_row_head(x, gen.q[k].conj()).map_err(num(k))?;
        let px = gen.p[k] * x;
        x = C64::new(r, 0.0);
        let (z00, z01) = z.apply_right(zst, hs);
        let (z10, z11) = z.apply_right(px, d(gen, k));
        let (f, rf) = GivensRotation::new(z00, z10).map_err(num(k))?;
        check_unit(rf, k)?;
        // F = [[c, -conj s], [s, conj c]]; the kept column is the second one.
        let yb = y.mul(&gen.u.b[k]);
        y = gen.u.g[k].scale(f.c).sub(&yb.scale(f.s));
        zst = f.c * z11 - f.s * z01;
        hs = y.dot(&gen.u.h[k + 1]);
        gen.u.g[k] = CMat::scalar(f.c.conj());
        gen.u.b[k] = CMat::scalar(-f.s.conj());
        gen.u.h[k + 1] = CMat::scalar(hs);
    }
    if last + 1 < gen.n {
        gen.u.b[last + 1] = y.mul(&gen.u.b[last + 1]);
    }
    Ok(())
}

/// Columns `i`, `j` of a 3x3 matrix times `G`.
fn rot3_cols(m: &mut [[C64; 3]; 3], i: usize, j: usize, g: &GivensRotation) {
    for row in m.iter_mut() {
        let (a, b) = g.apply_right(row[i], row[j]);
        row[i] = a;
        row[j] = b;
    }
}

/// `V` in the shifted block layout; compressed orders are `1, 2, 2, ...`.
fn compress_v(gen: &mut PencilGenerators, last: usize) -> Result<()> {
    let n = gen.n;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);

    // Block 0: the first row of V alone.
    let y0 = gen.v.g[0].clone();
    let hs0 = y0.dot(&gen.v.h[0]);
    gen.v.g[0] = CMat::scalar(one);
    gen.v.h[0] = CMat::scalar(hs0);
    if last == 0 {
        gen.v.b[0] = y0.mul(&gen.v.b[0]);
        return Ok(());
    }

    // Block 1: nothing to annihilate yet; the order grows to 2.
    let d1 = gen.sigma[0] + gen.z[1] * gen.w[0].conj();
    let yb = y0.mul(&gen.v.b[0]);
    let mut y = yb.vcat(&gen.v.g[1]);
    let mut zst = [hs0, d1];
    let mut x = gen.w[0].conj();
    let mut hs = [y.row(0).iter().zip(gen.v.h[1].as_slice()).map(|(a, b)| a * b).sum::<C64>(), zero];
    hs[1] = y.row(1).iter().zip(gen.v.h[1].as_slice()).map(|(a, b)| a * b).sum();
    gen.v.g[1] = CMat::row_vec(&[zero, one]);
    gen.v.b[0] = CMat::row_vec(&[one, zero]);
    gen.v.h[1] = CMat::col_vec(&hs);

    for k in 2..=last {
        let (z, r) = GivensRotation::zeroing_row_head(x, gen.w[k - 1].conj()).map_err(num(k))?;
        let px = gen.z[k] * x;
        x = C64::new(r, 0.0);
        let dk = gen.sigma[k - 1] + gen.z[k] * gen.w[k - 1].conj();
        let mut zk = [[zero; 2]; 3];
        for i in 0..2 {
            let (a, b) = z.apply_right(zst[i], hs[i]);
            zk[i] = [a, b];
        }
        let (a, b) = z.apply_right(px, dk);
        zk[2] = [a, b];

        let (ga, ra) = GivensRotation::new(zk[1][0], zk[2][0]).map_err(num(k))?;
        let (gb, rb) = GivensRotation::new(zk[0][0], C64::new(ra, 0.0)).map_err(num(k))?;
        check_unit(rb, k)?;
        let mut f = [[one, zero, zero], [zero, one, zero], [zero, zero, one]];
        rot3_cols(&mut f, 1, 2, &ga);
        rot3_cols(&mut f, 0, 1, &gb);
        // bs = F[0..2, 1..3], gs = F[2, 1..3]
        let bs = [[f[0][1], f[0][2]], [f[1][1], f[1][2]]];
        let gs = [f[2][1], f[2][2]];

        let yb = y.mul(&gen.v.b[k - 1]);
        let gk = &gen.v.g[k];
        let r_k = gk.cols();
        let mut ny = CMat::zeros(2, r_k);
        for i in 0..2 {
            let row = ny.row_mut(i);
            for (j, out) in row.iter_mut().enumerate() {
                *out = gs[i].conj() * gk[(0, j)] + bs[0][i].conj() * yb[(0, j)] + bs[1][i].conj() * yb[(1, j)];
            }
        }
        y = ny;
        let hp = [zk[0][1], zk[1][1]];
        let hpp = zk[2][1];
        for i in 0..2 {
            zst[i] = gs[i].conj() * hpp + bs[0][i].conj() * hp[0] + bs[1][i].conj() * hp[1];
        }
        let h = gen.v.h[k].as_slice();
        for i in 0..2 {
            hs[i] = y.row(i).iter().zip(h).map(|(a, b)| a * b).sum();
        }
        gen.v.g[k] = CMat::row_vec(&gs);
        gen.v.b[k - 1] = CMat::from_rows(2, 2, &[bs[0][0], bs[0][1], bs[1][0], bs[1][1]]);
        gen.v.h[k] = CMat::col_vec(&hs);
    }
    if last + 1 < n {
        gen.v.b[last] = y.mul(&gen.v.b[last]);
    }
    Ok(())
}
