use num_complex::Complex64 as C64;

use super::SweepRotations;
use crate::error::{Error, Result};
use crate::givens::GivensRotation;
use crate::mat::CMat;
use crate::qs_core::PencilGenerators;

fn numerical(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Numerical { step, detail: e.to_string() }
}

/// `G^*` applied to a pair of row vectors.
fn rotate_pair(g: &GivensRotation, r0: &mut CMat, r1: &mut CMat) {
    for j in 0..r0.cols() {
        let (x, y) = g.apply_adjoint(r0[(0, j)], r1[(0, j)]);
        r0[(0, j)] = x;
        r1[(0, j)] = y;
    }
}

/// Row vector entries 0 and 1 multiplied by `Z`.
fn rotate_head(z: &GivensRotation, r: &mut CMat) {
    let (x, y) = z.apply_right(r[(0, 0)], r[(0, 1)]);
    r[(0, 0)] = x;
    r[(0, 1)] = y;
}

/// `[e; h e' + b S]` re-expressed after `Z` mixes `e` and `e'`: returns the new
/// `(h, b)` of the basis `[e; S_prev]` in terms of `e` and `[e'; S]`.
fn basis_map(z: &GivensRotation, h: &CMat, b: &CMat) -> (CMat, CMat) {
    let r = h.rows();
    let mut c = CMat::zeros(1 + r, 2 + b.cols());
    c[(0, 0)] = C64::new(1.0, 0.0);
    for i in 0..r {
        c[(1 + i, 1)] = h[(i, 0)];
        for j in 0..b.cols() {
            c[(1 + i, 2 + j)] = b[(i, j)];
        }
    }
    c.rotate_cols(0, 1, z, 0, 1 + r);
    (c.block(0, 0, 1 + r, 1), c.block(0, 1, 1 + r, 1 + b.cols()))
}

fn prepend(x: C64, rest: &CMat) -> CMat {
    let mut m = CMat::zeros(1, 1 + rest.cols());
    m[(0, 0)] = x;
    for j in 0..rest.cols() {
        m[(0, 1 + j)] = rest[(0, j)];
    }
    m
}

fn prepend2(x: C64, y: C64, rest: &CMat) -> CMat {
    let mut m = CMat::zeros(1, 2 + rest.cols());
    m[(0, 0)] = x;
    m[(0, 1)] = y;
    for j in 0..rest.cols() {
        m[(0, 2 + j)] = rest[(0, j)];
    }
    m
}

fn tail(r: &CMat, from: usize) -> CMat {
    r.block(0, from, 1, r.cols() - from)
}

/// One implicit single-shift QZ sweep on rows/columns `lo..=hi`, applied to
/// the generators in place. The window must be split off from the rest of
/// the pencil (`A(lo, lo-1) = A(hi+1, hi) = 0`). Generator orders grow by one
/// inside the window; compress afterwards.
pub fn sweep_window(gen: &mut PencilGenerators, lo: usize, hi: usize, alpha: C64, mut capture: Option<&mut SweepRotations>) -> Result<()> {
    let n = gen.n;
    if n < 2 || hi >= n || lo >= hi {
        return Err(Error::Size(format!("invalid sweep window {lo}..={hi} for N = {n}")));
    }
    if let Some(rot) = capture.as_deref_mut() {
        rot.lo = lo;
        rot.q.clear();
        rot.z.clear();
    }

    // Rows above the window now see the split basis [e_lo; stream_{lo+1}].
    if lo >= 1 {
        let kv = gen.v.h[lo].hcat(&gen.v.b[lo]);
        gen.v.b[lo - 1] = gen.v.b[lo - 1].mul(&kv);
        let ku = gen.u.h[lo].hcat(&gen.u.b[lo]);
        gen.u.g[lo - 1] = gen.u.g[lo - 1].mul(&ku);
        gen.u.b[lo - 1] = gen.u.b[lo - 1].mul(&ku);
    }

    let a11 = gen.a_diag(lo);
    let (mut q_prev, _) = GivensRotation::new(a11 - alpha * gen.d_b[lo], gen.sigma[lo]).map_err(numerical(lo))?;
    if let Some(rot) = capture.as_deref_mut() {
        rot.q.push(q_prev);
    }

    let sig_v = gen.sigma[lo] + gen.z[lo + 1] * gen.w[lo].conj();
    let mut r0 = prepend(gen.v.g[lo].dot(&gen.v.h[lo]), &gen.v.g[lo].mul(&gen.v.b[lo]));
    let mut r1 = prepend(sig_v, &gen.v.g[lo + 1]);
    rotate_pair(&q_prev, &mut r0, &mut r1);
    gen.v.g[lo] = r0;
    let mut f_v = r1[(0, 0)];
    let mut phi_v = tail(&r1, 1);
    let (z_lo, mut chi) = q_prev.apply_adjoint(gen.z[lo], gen.z[lo + 1]);
    gen.z[lo] = z_lo;
    let mut gamma = gen.w[lo];
    let mut f_a = f_v - chi * gamma.conj();

    let mut theta = gen.q[lo];
    let mut c = gen.p[lo];
    let mut f_u = gen.d_b[lo] + gen.p[lo] * gen.q[lo].conj();
    let mut phi_u = gen.u.g[lo].clone();
    let mut f_b = gen.d_b[lo];

    for k in lo..hi - 1 {
        // Current B(k, k+1) and A(k+1, k+1).
        let eps_b = phi_u.dot(&gen.u.h[k + 1]) - c * gen.q[k + 1].conj();
        let eps_a = phi_v.dot(&gen.v.h[k + 1]) - chi * gen.w[k + 1].conj();
        let d_b1 = gen.d_b[k + 1];
        let d_u1 = d_b1 + gen.p[k + 1] * gen.q[k + 1].conj();

        // Bulge in B: rows k, k+1 after Q_k^*.
        let (phi00, phi01) = (q_prev.c.conj() * f_b, q_prev.c.conj() * eps_b + q_prev.s.conj() * d_b1);
        let (phi10, phi11) = (-q_prev.s * f_b, q_prev.c * d_b1 - q_prev.s * eps_b);
        let (zk, _) = GivensRotation::zeroing_row_head(phi10, phi11).map_err(numerical(k))?;
        let (b_kk, _) = zk.apply_right(phi00, phi01);
        let (_, f_b_next) = zk.apply_right(phi10, phi11);

        // Bulge in A: columns k, k+1 after Z_k.
        let (om00, _) = zk.apply_right(f_a, eps_a);
        let (om10, _) = zk.apply_right(C64::new(0.0, 0.0), gen.sigma[k + 1]);
        let (q_next, r) = GivensRotation::new(om00, om10).map_err(numerical(k + 1))?;
        gen.sigma[k] = C64::new(r, 0.0);
        if let Some(rot) = capture.as_deref_mut() {
            rot.z.push(zk);
            rot.q.push(q_next);
        }

        // V: rows k+1, k+2 by Q_{k+1}^*, columns k, k+1 by Z_k.
        let sig_v = gen.sigma[k + 1] + gen.z[k + 2] * gen.w[k + 1].conj();
        let mut g0 = prepend2(f_v, phi_v.dot(&gen.v.h[k + 1]), &phi_v.mul(&gen.v.b[k + 1]));
        let mut g1 = prepend2(gen.z[k + 2] * gamma.conj(), sig_v, &gen.v.g[k + 2]);
        rotate_pair(&q_next, &mut g0, &mut g1);
        rotate_head(&zk, &mut g0);
        rotate_head(&zk, &mut g1);
        let (hv, bv) = basis_map(&zk, &gen.v.h[k + 1], &gen.v.b[k + 1]);
        gen.v.g[k + 1] = tail(&g0, 1);
        f_v = g1[(0, 1)];
        phi_v = tail(&g1, 2);
        gen.v.h[k] = hv;
        gen.v.b[k] = bv;

        // U: rows k, k+1 by Q_k^*, columns k, k+1 by Z_k.
        let mut l0 = prepend2(f_u, phi_u.dot(&gen.u.h[k + 1]), &phi_u.mul(&gen.u.b[k + 1]));
        let mut l1 = prepend2(gen.p[k + 1] * theta.conj(), d_u1, &gen.u.g[k + 1]);
        rotate_pair(&q_prev, &mut l0, &mut l1);
        rotate_head(&zk, &mut l0);
        rotate_head(&zk, &mut l1);
        gen.u.g[k] = tail(&l0, 1);
        f_u = l1[(0, 1)];
        phi_u = tail(&l1, 2);
        if k >= 1 {
            let (hu, bu) = basis_map(&zk, &gen.u.h[k + 1], &gen.u.b[k + 1]);
            gen.u.h[k] = hu;
            gen.u.b[k] = bu;
        }

        // Rank-one parts.
        let (zk1, chi_n) = q_next.apply_adjoint(chi, gen.z[k + 2]);
        gen.z[k + 1] = zk1;
        chi = chi_n;
        let (wk, gamma_n) = zk.apply_adjoint(gamma, gen.w[k + 1]);
        gen.w[k] = wk;
        gamma = gamma_n;
        let (qk, theta_n) = zk.apply_adjoint(theta, gen.q[k + 1]);
        gen.q[k] = qk;
        theta = theta_n;
        let (pk, c_n) = q_prev.apply_adjoint(c, gen.p[k + 1]);
        gen.p[k] = pk;
        c = c_n;
        gen.d_b[k] = b_kk;

        f_a = f_v - chi * gamma.conj();
        f_b = f_b_next;
        q_prev = q_next;
    }

    // Last column pair hi-1, hi: only Z remains.
    let k = hi - 1;
    let eps_b = phi_u.dot(&gen.u.h[hi]) - c * gen.q[hi].conj();
    let d_bh = gen.d_b[hi];
    let d_uh = d_bh + gen.p[hi] * gen.q[hi].conj();
    let (phi00, phi01) = (q_prev.c.conj() * f_b, q_prev.c.conj() * eps_b + q_prev.s.conj() * d_bh);
    let (phi10, phi11) = (-q_prev.s * f_b, q_prev.c * d_bh - q_prev.s * eps_b);
    let (zk, _) = GivensRotation::zeroing_row_head(phi10, phi11).map_err(numerical(k))?;
    let (b_kk, _) = zk.apply_right(phi00, phi01);
    let (_, b_hh) = zk.apply_right(phi10, phi11);
    if let Some(rot) = capture {
        rot.z.push(zk);
    }

    let v_tail_b = if hi + 1 < n { phi_v.mul(&gen.v.b[hi]) } else { CMat::zeros(1, 0) };
    let mut g0 = prepend2(f_v, phi_v.dot(&gen.v.h[hi]), &v_tail_b);
    rotate_head(&zk, &mut g0);
    let v_sub = g0[(0, 0)];
    gen.v.g[hi] = tail(&g0, 1);
    let r_next = gen.v.h[hi].rows();
    let b_hi = if hi + 1 < n { gen.v.b[hi].clone() } else { CMat::zeros(r_next, 0) };
    let (hv, bv) = basis_map(&zk, &gen.v.h[hi], &b_hi);
    gen.v.h[k] = hv;
    gen.v.b[k] = bv;
    let r_after = b_hi.cols();
    gen.v.h[hi] = CMat::unit_col(1 + r_after);
    if hi + 1 < n {
        gen.v.b[hi] = CMat::shifted_identity(r_after);
    }

    let mut l0 = prepend2(f_u, phi_u.dot(&gen.u.h[hi]), &phi_u.mul(&gen.u.b[hi]));
    let mut l1 = prepend2(gen.p[hi] * theta.conj(), d_uh, &gen.u.g[hi]);
    rotate_pair(&q_prev, &mut l0, &mut l1);
    rotate_head(&zk, &mut l0);
    rotate_head(&zk, &mut l1);
    gen.u.g[k] = tail(&l0, 1);
    gen.u.g[hi] = tail(&l1, 2);
    if k >= 1 {
        let (hu, bu) = basis_map(&zk, &gen.u.h[hi], &gen.u.b[hi]);
        gen.u.h[k] = hu;
        gen.u.b[k] = bu;
    }
    let r_hi = gen.u.g[hi].cols();
    gen.u.h[hi] = CMat::unit_col(1 + r_hi);
    gen.u.b[hi] = CMat::shifted_identity(r_hi);

    let (wk, wh) = zk.apply_adjoint(gamma, gen.w[hi]);
    gen.w[k] = wk;
    gen.w[hi] = wh;
    let (pk, ph) = q_prev.apply_adjoint(c, gen.p[hi]);
    gen.p[k] = pk;
    gen.p[hi] = ph;
    let (qk, qh) = zk.apply_adjoint(theta, gen.q[hi]);
    gen.q[k] = qk;
    gen.q[hi] = qh;
    gen.z[hi] = chi;
    gen.sigma[k] = v_sub - chi * wk.conj();
    gen.d_b[k] = b_kk;
    gen.d_b[hi] = b_hh;

    if lo == 0 {
        gen.u.b[0] = CMat::zeros(0, gen.u.g[0].cols());
    }
    debug_assert!(gen.validate().is_ok());
    let _ = f_a;
    for x in [gen.sigma[k], gen.d_b[k], gen.d_b[hi]] {
        if !(x.re.is_finite() && x.im.is_finite()) {
            return Err(Error::Numerical { step: hi, detail: format!("non-finite output {x}") });
        }
    }
    Ok(())
}
