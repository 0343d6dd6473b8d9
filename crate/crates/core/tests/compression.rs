mod common;

use fastqz::compression::{
    compress_pencil_generic,
    compress_pencil, compress_unitary, compress_unitary_with_factors, compressed_strict_upper, u_block_form,
    v_block_form, wf_factorization_check, BlockUnitary,
};
use fastqz::qs_core::{build_companion_pencil, PencilGenerators};
use fastqz::structured_qz::{qz_sweep_uncompressed, wilkinson_shift};
use fastqz::{CMat, Error, C64};
use proptest::prelude::*;

fn swept(seed: u64, n: usize, sweeps: usize) -> PencilGenerators {
    let mut r = common::rng(seed);
    let mut gen = build_companion_pencil(&common::random_poly(&mut r, n), true).unwrap();
    for s in 0..sweeps {
        gen = qz_sweep_uncompressed(&gen, wilkinson_shift(&gen).unwrap(), false).unwrap().0;
        if s + 1 < sweeps {
            compress_pencil(&mut gen, None).unwrap();
        }
    }
    gen
}

fn strict_upper(m: &CMat) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| if i < j { m[(i, j)] } else { C64::new(0.0, 0.0) })
}

/// Upper part of the block matrix in its own block convention.
fn block_strict_upper(u: &BlockUnitary) -> CMat {
    let dense = u.dense();
    let (mut ro, mut co) = (vec![0], vec![0]);
    for k in 0..u.m.len() {
        ro.push(ro[k] + u.m[k]);
        co.push(co[k] + u.n[k]);
    }
    CMat::from_fn(dense.rows(), dense.cols(), |i, j| {
        let bi = ro.iter().rposition(|&o| o <= i).unwrap();
        let bj = co.iter().rposition(|&o| o <= j).unwrap();
        if bi < bj { dense[(i, j)] } else { C64::new(0.0, 0.0) }
    })
}

#[test]
fn identity_with_padded_order_two_generators() {
    let n = 6;
    let z = C64::new(0.0, 0.0);
    let ord = |k: usize| if k + 1 < n { 2 } else { 0 };
    let lo = |k: usize| usize::from(k + 1 < n);
    let u = BlockUnitary {
        m: vec![1; n],
        n: vec![1; n],
        p: (0..n).map(|k| CMat::zeros(1, if k == 0 { 0 } else { lo(k - 1) })).collect(),
        q: (0..n).map(|k| CMat::zeros(lo(k), 1)).collect(),
        a: (0..n).map(|k| CMat::zeros(lo(k), if k == 0 { 0 } else { lo(k - 1) })).collect(),
        d: (0..n).map(|_| CMat::scalar(C64::new(1.0, 0.0))).collect(),
        g: (0..n).map(|k| CMat::zeros(1, ord(k))).collect(),
        h: (0..n).map(|k| CMat::zeros(if k == 0 { 0 } else { ord(k - 1) }, 1)).collect(),
        b: (0..n).map(|k| CMat::zeros(if k == 0 { 0 } else { ord(k - 1) }, ord(k))).collect(),
    };
    assert_eq!(u.dense(), CMat::identity(n));
    let c = compress_unitary(&u).unwrap();
    assert!(c.orders[..n - 1].iter().all(|&o| o == 1));
    let up = compressed_strict_upper(&c, &u.m, &u.n);
    assert!(up.as_slice().iter().all(|x| *x == z));
}

#[test]
fn u_from_sweep_compresses_to_order_one() {
    for seed in 0..10 {
        let gen = swept(seed, 9, 2);
        let u = u_block_form(&gen);
        assert!(u.g.iter().take(8).any(|g| g.cols() == 2), "input must be redundant");
        let dense = u.dense();
        assert!(dense.mul(&dense.adjoint()).max_abs_diff(&CMat::identity(9)) < 1e-12);
        let c = compress_unitary(&u).unwrap();
        assert!(c.orders[..8].iter().all(|&o| o == 1), "{:?}", c.orders);
        assert!(compressed_strict_upper(&c, &u.m, &u.n).max_abs_diff(&strict_upper(&dense)) <= 1e-13);
    }
}

#[test]
fn v_from_sweep_compresses_to_one_then_twos() {
    for seed in 0..10 {
        let gen = swept(seed, 9, 2);
        let v = v_block_form(&gen);
        assert!(v.g.iter().any(|g| g.cols() == 3), "input must be redundant");
        let c = compress_unitary(&v).unwrap();
        let mut expect = [2; 9];
        expect[0] = 1;
        assert_eq!(&c.orders[..9], &expect[..]);
        let up = compressed_strict_upper(&c, &v.m, &v.n);
        assert!(up.max_abs_diff(&block_strict_upper(&v)) <= 1e-13);
    }
}

#[test]
fn compression_is_idempotent() {
    let mut gen = swept(3, 10, 2);
    compress_pencil(&mut gen, None).unwrap();
    let once = gen.clone();
    compress_pencil(&mut gen, None).unwrap();
    assert_eq!(gen.v_orders(), once.v_orders());
    assert_eq!(gen.u_orders(), once.u_orders());
    let (a, b) = (gen.reconstruct().unwrap(), once.reconstruct().unwrap());
    assert!(a.a.max_abs_diff(&b.a) < 1e-14 && a.b.max_abs_diff(&b.b) < 1e-14);
}

#[test]
fn factorization_trivial_size() {
    let gen = build_companion_pencil(&fastqz::Polynomial::from_real(&[1.0, 2.0]).unwrap(), true).unwrap();
    let u = u_block_form(&gen);
    let (_, f) = compress_unitary_with_factors(&u).unwrap();
    assert_eq!(wf_factorization_check(&u.dense(), &f), 0.0);
}

#[test]
fn factorization_of_u_and_v() {
    for seed in 0..5 {
        let gen = swept(seed, 8, 2);
        for blocks in [u_block_form(&gen), v_block_form(&gen)] {
            let (_, f) = compress_unitary_with_factors(&blocks).unwrap();
            assert!(wf_factorization_check(&blocks.dense(), &f) <= 1e-13);
        }
    }
}

#[test]
fn non_unitary_input_is_detected() {
    let mut gen = swept(1, 8, 2);
    for x in gen.z.iter_mut() {
        *x *= 3.0;
    }
    let err = compress_unitary(&v_block_form(&gen)).unwrap_err();
    assert!(matches!(err, Error::Consistency { .. }), "{err}");
    assert!(compress_pencil(&mut gen, None).is_err());
}

#[test]
fn dimension_mismatch_is_structural() {
    let gen = swept(2, 6, 1);
    let mut u = u_block_form(&gen);
    u.g[2] = CMat::zeros(1, 3);
    assert!(matches!(compress_unitary(&u), Err(Error::Structural(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn compressed_pencil_keeps_matrices_and_orders(seed in 0u64..10_000, n in 3usize..14, sweeps in 1usize..4) {
        let raw = swept(seed, n, sweeps);
        let mut gen = raw.clone();
        compress_pencil(&mut gen, None).unwrap();
        let mut expect_v = vec![2; n];
        expect_v[0] = 1;
        prop_assert_eq!(gen.v_orders(), expect_v);
        prop_assert!(gen.u_orders().iter().all(|&o| o == 1));
        let (a, b) = (gen.reconstruct().unwrap(), raw.reconstruct().unwrap());
        prop_assert!(a.a.max_abs_diff(&b.a) <= 1e-13);
        prop_assert!(a.b.max_abs_diff(&b.b) <= 1e-13);
        prop_assert!(a.v.mul(&a.v.adjoint()).max_abs_diff(&CMat::identity(n)) <= 100.0 * n as f64 * f64::EPSILON);
    }
}
#[test]
fn specialized_compression_matches_generic() {
    let mut r = common::rng(11);
    for trial in 0..24 {
        let n = 3 + trial % 11;
        let poly = common::random_poly(&mut r, n);
        let gen = build_companion_pencil(&poly, true).unwrap();
        let alpha = wilkinson_shift(&gen).unwrap();
        let (swept, _) = qz_sweep_uncompressed(&gen, alpha, false).unwrap();
        for through in [None, Some(n / 2), Some(n - 1)] {
            let mut fast = swept.clone();
            let mut slow = swept.clone();
            compress_pencil(&mut fast, through).unwrap();
            compress_pencil_generic(&mut slow, through).unwrap();
            assert_eq!(fast.v_orders(), slow.v_orders());
            assert_eq!(fast.u_orders(), slow.u_orders());
            let (df, ds, d0) = (fast.reconstruct().unwrap(), slow.reconstruct().unwrap(), swept.reconstruct().unwrap());
            assert!(df.a.max_abs_diff(&ds.a) < 1e-12, "n={n} {through:?}");
            assert!(df.b.max_abs_diff(&ds.b) < 1e-12);
            assert!(df.a.max_abs_diff(&d0.a) < 1e-12);
            assert!(df.b.max_abs_diff(&d0.b) < 1e-12);
        }
    }
}
