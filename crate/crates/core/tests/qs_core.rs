mod common;

use fastqz::qs_core::{build_companion_pencil, companion_dense, diag_entries_a, reconstruct_dense, trailing_block, Polynomial};
use fastqz::structured_qz::{qz_sweep, wilkinson_shift};
use fastqz::{CMat, GivensRotation, TriangularGenerators, C64};
use proptest::prelude::*;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn cyclic3() -> CMat {
    CMat::from_rows(3, 3, &[c(0.0), c(0.0), c(1.0), c(1.0), c(0.0), c(0.0), c(0.0), c(1.0), c(0.0)])
}

#[test]
fn givens_examples() {
    let (g, r) = GivensRotation::new(c(1.0), c(0.0)).unwrap();
    assert_eq!((g.c, g.s, r), (c(1.0), c(0.0), 1.0));
    let (g, r) = GivensRotation::new(c(0.0), c(1.0)).unwrap();
    assert_eq!((g.c, g.s, r), (c(0.0), c(1.0), 1.0));
    assert_eq!(g.apply_adjoint(c(0.0), c(1.0)), (c(1.0), c(0.0)));
    let (g, r) = GivensRotation::new(c(3.0), c(4.0)).unwrap();
    assert!((r - 5.0).abs() < 1e-15);
    assert!((g.c.norm() - 0.6).abs() < 1e-15 && (g.s.norm() - 0.8).abs() < 1e-15);
    let (x, y) = g.apply_adjoint(c(3.0), c(4.0));
    assert!((x - c(5.0)).norm() < 1e-15 && y.norm() < 1e-15);
    assert_eq!(GivensRotation::new(c(0.0), c(0.0)).unwrap().0, GivensRotation::IDENTITY);
    let (g, _) = GivensRotation::new(C64::new(0.0, -2.0), c(0.0)).unwrap();
    assert_eq!((g.c, g.s), (C64::new(0.0, -1.0), c(0.0)));
    assert!(GivensRotation::new(c(f64::NAN), c(1.0)).is_err());
    assert!(GivensRotation::new(c(1.0), C64::new(0.0, f64::INFINITY)).is_err());
}

proptest! {
    #[test]
    fn givens_zeroes_second_component(a in -1e3..1e3f64, b in -1e3..1e3f64, x in -1e3..1e3f64, y in -1e3..1e3f64) {
        let (v1, v2) = (C64::new(a, b), C64::new(x, y));
        let (g, r) = GivensRotation::new(v1, v2).unwrap();
        let norm = v1.norm().hypot(v2.norm());
        prop_assert!(g.unitarity_defect() <= 4.0 * f64::EPSILON);
        let (top, bottom) = g.apply_adjoint(v1, v2);
        prop_assert!(bottom.norm() <= 4.0 * f64::EPSILON * norm);
        prop_assert!((top - C64::new(r, 0.0)).norm() <= 4.0 * f64::EPSILON * norm);
        prop_assert!(r >= 0.0);
    }

    #[test]
    fn companion_reconstruction_matches_dense_assembly(seed in 0u64..1000, n in 1usize..12, normalize: bool) {
        let mut r = common::rng(seed);
        let poly = common::random_poly(&mut r, n);
        let d = reconstruct_dense(&build_companion_pencil(&poly, normalize).unwrap()).unwrap();
        let (a, b) = companion_dense(&poly, normalize).unwrap();
        // Only A(0, N-1) = 1 - (a_0 + 1) involves rounding.
        prop_assert!(d.a.max_abs_diff(&a) <= 2.0 * f64::EPSILON);
        prop_assert_eq!(&d.b, &b);
        let tol = 100.0 * n as f64 * f64::EPSILON;
        prop_assert!(d.v.mul(&d.v.adjoint()).max_abs_diff(&CMat::identity(n)) <= tol);
        prop_assert!(d.u.mul(&d.u.adjoint()).max_abs_diff(&CMat::identity(n)) <= tol);
    }
}

#[test]
fn x_cubed_minus_one() {
    let p = Polynomial::from_real(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
    let gen = build_companion_pencil(&p, false).unwrap();
    assert!(gen.z.iter().all(|z| *z == c(0.0)));
    let d = gen.reconstruct().unwrap();
    assert_eq!(d.a, cyclic3());
    assert_eq!(d.v, cyclic3());
    assert_eq!(d.b, CMat::identity(3));
    assert_eq!(d.u, CMat::identity(3));
    assert_eq!(diag_entries_a(&gen), vec![c(0.0); 3]);
    let (at, bt) = trailing_block(&gen).unwrap();
    assert_eq!(at, [[c(0.0), c(0.0)], [c(1.0), c(0.0)]]);
    assert_eq!(bt, [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]);
}

#[test]
fn monic_input_gives_identity_b() {
    let mut r = common::rng(4);
    let mut coeffs: Vec<C64> = (0..6).map(|_| common::unit_square(&mut r)).collect();
    coeffs.push(c(1.0));
    let gen = build_companion_pencil(&Polynomial::new(coeffs).unwrap(), false).unwrap();
    assert!(gen.d_b.iter().all(|d| *d == c(1.0)));
    assert!(gen.q.iter().all(|q| *q == c(0.0)));
}

#[test]
fn random_degree_five_is_exact_except_top_right() {
    let mut r = common::rng(5);
    let poly = common::random_poly(&mut r, 5);
    let d = build_companion_pencil(&poly, false).unwrap().reconstruct().unwrap();
    let (a, b) = companion_dense(&poly, false).unwrap();
    assert_eq!(d.b, b);
    for i in 0..5 {
        for j in 0..5 {
            if (i, j) != (0, 4) {
                assert_eq!(d.a[(i, j)], a[(i, j)], "({i}, {j})");
            }
        }
    }
    assert!((d.a[(0, 4)] - a[(0, 4)]).norm() <= f64::EPSILON);
}

#[test]
fn degree_one_pencil() {
    let p = Polynomial::from_real(&[-3.0, 2.0]).unwrap();
    let gen = build_companion_pencil(&p, false).unwrap();
    assert_eq!(gen.n, 1);
    assert!(gen.sigma.is_empty());
    let d = gen.reconstruct().unwrap();
    assert_eq!(d.a, CMat::scalar(c(3.0)));
    assert_eq!(d.b, CMat::scalar(c(2.0)));
    assert!(trailing_block(&gen).is_err());
}

#[test]
fn invalid_polynomials_rejected() {
    assert!(build_companion_pencil(&Polynomial::from_real(&[0.0, 0.0, 0.0]).unwrap(), true).is_err());
    assert!(build_companion_pencil(&Polynomial::from_real(&[2.0]).unwrap(), true).is_err());
    assert!(Polynomial::from_real(&[1.0, f64::NAN]).is_err());
}

#[test]
fn last_diagonal_entry_is_minus_a_n_minus_1() {
    let p = Polynomial::from_real(&[2.0, -1.0, 0.5, 5.0, 1.0]).unwrap();
    let gen = build_companion_pencil(&p, false).unwrap();
    assert_eq!(diag_entries_a(&gen)[3], c(-5.0));
}

#[test]
fn quadratic_trailing_block_is_whole_pencil() {
    let (b0, b1) = (c(-0.25), c(3.5));
    let p = Polynomial::new(vec![b0, b1, c(1.0)]).unwrap();
    let gen = build_companion_pencil(&p, false).unwrap();
    let (at, bt) = trailing_block(&gen).unwrap();
    assert!((at[0][0]).norm() < 1e-16 && (at[0][1] + b0).norm() < 1e-16);
    assert_eq!(at[1], [c(1.0), -b1]);
    assert_eq!(bt, [[c(1.0), c(0.0)], [c(0.0), c(1.0)]]);
}

/// Brute-force entry oracle with an independent loop.
fn entry_by_loop(t: &TriangularGenerators, i: usize, j: usize) -> C64 {
    let mut row: Vec<C64> = t.g[i].as_slice().to_vec();
    for k in i..j {
        let b = &t.b[k];
        row = (0..b.cols()).map(|col| (0..b.rows()).map(|r| row[r] * b[(r, col)]).sum()).collect();
    }
    row.iter().zip(t.h[j].as_slice()).map(|(x, y)| x * y).sum()
}

#[test]
fn triangular_generator_entries_match_loop() {
    let mut r = common::rng(6);
    let n = 7;
    let ord = |i: usize| if i == 0 { 1 } else { 2 };
    let rand_mat = |r: &mut _, rows, cols| CMat::from_fn(rows, cols, |_, _| common::unit_square(r));
    let t = TriangularGenerators {
        g: (0..n).map(|i| rand_mat(&mut r, 1, ord(i))).collect(),
        h: (0..n).map(|j| rand_mat(&mut r, ord(j), 1)).collect(),
        b: (0..n - 1).map(|k| rand_mat(&mut r, ord(k), ord(k + 1))).collect(),
    };
    t.validate().unwrap();
    let dense = t.upper_dense();
    for i in 0..n {
        for j in i..n {
            let e = entry_by_loop(&t, i, j);
            assert!((dense[(i, j)] - e).norm() < 1e-14);
            assert!((t.entry(i, j) - e).norm() < 1e-14);
        }
    }
}

#[test]
fn inconsistent_generators_rejected() {
    let p = Polynomial::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
    let mut gen = build_companion_pencil(&p, true).unwrap();
    gen.v.b[1] = CMat::zeros(2, 2);
    assert!(matches!(gen.reconstruct(), Err(fastqz::Error::Structural(_))));
    let mut gen = build_companion_pencil(&p, true).unwrap();
    gen.z.pop();
    assert!(matches!(gen.reconstruct(), Err(fastqz::Error::Structural(_))));
}

#[test]
fn diagonal_and_trailing_block_match_dense_after_sweeps() {
    let mut r = common::rng(8);
    for n in [8usize, 10] {
        let mut gen = build_companion_pencil(&common::random_poly(&mut r, n), true).unwrap();
        for _ in 0..3 {
            gen = qz_sweep(&gen, wilkinson_shift(&gen).unwrap(), false).unwrap().0;
        }
        let d = gen.reconstruct().unwrap();
        for (k, x) in diag_entries_a(&gen).into_iter().enumerate() {
            assert!((x - d.a[(k, k)]).norm() < 1e-14);
        }
        let (at, bt) = trailing_block(&gen).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((at[i][j] - d.a[(n - 2 + i, n - 2 + j)]).norm() < 1e-14);
                assert!((bt[i][j] - d.b[(n - 2 + i, n - 2 + j)]).norm() < 1e-14);
            }
        }
        let s = 100.0 * n as f64 * f64::EPSILON;
        let amax = d.a.as_slice().iter().fold(0.0f64, |m, x| m.max(x.norm()));
        for i in 0..n {
            for j in 0..n {
                if i > j + 1 {
                    assert!(d.a[(i, j)].norm() <= s * amax);
                }
                if i > j {
                    assert!(d.b[(i, j)].norm() <= s);
                }
            }
        }
    }
}
