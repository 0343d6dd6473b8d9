mod common;

use fastqz::backward_error::polish_roots;
use fastqz::dd::CDD;
use fastqz::dense_reference::{dense_eigenvalues, dense_qz_sweep, DenseMatrixPair};
use fastqz::families::{generate, seeded_rng, Family};
use fastqz::qs_core::{companion_dense, Polynomial};
use fastqz::structured_qz::SolverOptions;
use fastqz::{CMat, Error, C64};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn max_match(found: &[C64], exact: &[C64]) -> f64 {
    exact.iter().map(|x| found.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

fn hessenberg_triangular(r: &mut rand_chacha::ChaCha8Rng, n: usize, b_identity: bool) -> DenseMatrixPair {
    let a = CMat::from_fn(n, n, |i, j| if i <= j + 1 { common::unit_square(r) } else { c(0.0) });
    let b = if b_identity {
        CMat::identity(n)
    } else {
        CMat::from_fn(n, n, |i, j| if i <= j { common::unit_square(r) + if i == j { c(2.0) } else { c(0.0) } } else { c(0.0) })
    };
    DenseMatrixPair::new(a, b).unwrap()
}

fn nonzero_below(m: &CMat, offset: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i >= j + offset && m[(i, j)].norm() > 1e-14 {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn bulge_appears_where_expected() {
    let mut r = common::rng(3);
    let pair = hessenberg_triangular(&mut r, 4, false);
    let alpha = C64::new(0.3, -0.2);
    let (_, rot) = dense_qz_sweep(&pair, alpha).unwrap();
    let (mut a, mut b) = (pair.a.clone(), pair.b.clone());

    let (x, y) = rot.q[0].apply_adjoint(a[(0, 0)] - alpha * b[(0, 0)], a[(1, 0)]);
    assert!(y.norm() <= 1e-15 * x.norm());

    a.rotate_rows(0, 1, &rot.q[0], 0, 4);
    b.rotate_rows(0, 1, &rot.q[0], 0, 4);
    assert_eq!(nonzero_below(&b, 1), vec![(1, 0)]);
    assert!(nonzero_below(&a, 2).is_empty());

    a.rotate_cols(0, 1, &rot.z[0], 0, 4);
    b.rotate_cols(0, 1, &rot.z[0], 0, 4);
    assert!(b[(1, 0)].norm() <= 1e-15);
    assert_eq!(nonzero_below(&a, 2), vec![(2, 0)]);

    a.rotate_rows(1, 2, &rot.q[1], 0, 4);
    b.rotate_rows(1, 2, &rot.q[1], 0, 4);
    assert!(a[(2, 0)].norm() <= 1e-15);
    assert_eq!(nonzero_below(&b, 1), vec![(2, 1)]);
}

#[test]
fn sweep_keeps_form_and_unitary_transforms() {
    for (seed, ident) in [(5, false), (6, true)] {
        let mut r = common::rng(seed);
        let pair = hessenberg_triangular(&mut r, 9, ident);
        let (out, rot) = dense_qz_sweep(&pair, C64::new(0.1, 0.4)).unwrap();
        assert!(out.hessenberg_defect() <= 1e-15 && out.triangular_defect() <= 1e-15);
        let (q, z) = rot.accumulate(9);
        assert!(q.unitarity_defect() <= 1e-14 && z.unitarity_defect() <= 1e-14);
        assert!(q.adjoint().mul(&pair.a).mul(&z).max_abs_diff(&out.a) <= 1e-13);
        assert!(q.adjoint().mul(&pair.b).mul(&z).max_abs_diff(&out.b) <= 1e-13);
        if ident {
            // With B = I, Q and Z agree up to the last column.
            assert!(q.block(0, 0, 9, 8).max_abs_diff(&z.block(0, 0, 9, 8)) <= 1e-13);
        }
    }
}

#[test]
fn exact_shift_deflates_last_entry() {
    // Upper triangular A with eigenvalue 2 at the bottom after a rotation.
    let p = Polynomial::from_real(&[-6.0, 11.0, -6.0, 1.0]).unwrap();
    let (a, b) = companion_dense(&p, false).unwrap();
    let pair = DenseMatrixPair::new(a, b).unwrap();
    for root in [1.0, 2.0, 3.0] {
        let (out, _) = dense_qz_sweep(&pair, c(root)).unwrap();
        assert!(out.a[(2, 1)].norm() <= 1e-10 * pair.a.max_abs(), "{root}: {:e}", out.a[(2, 1)].norm());
        assert!((out.a[(2, 2)] / out.b[(2, 2)] - c(root)).norm() <= 1e-10);
    }
}

#[test]
fn rejects_bad_input() {
    let a = CMat::from_fn(3, 3, |_, _| c(1.0));
    assert!(matches!(dense_qz_sweep(&DenseMatrixPair::new(a.clone(), CMat::identity(3)).unwrap(), c(0.0)), Err(Error::Structural(_))));
    assert!(matches!(DenseMatrixPair::new(a, CMat::identity(2)), Err(Error::Structural(_))));
    let mut nan = CMat::identity(2);
    nan[(0, 0)] = c(f64::NAN);
    assert!(matches!(DenseMatrixPair::new(nan, CMat::identity(2)), Err(Error::InvalidInput(_))));
    let one = DenseMatrixPair::new(CMat::identity(1), CMat::identity(1)).unwrap();
    assert!(matches!(dense_qz_sweep(&one, c(0.0)), Err(Error::Size(_))));
}

#[test]
fn fourth_roots_of_unity() {
    let (a, b) = companion_dense(&Polynomial::from_real(&[-1.0, 0.0, 0.0, 0.0, 1.0]).unwrap(), true).unwrap();
    let res = dense_eigenvalues(&DenseMatrixPair::new(a, b).unwrap(), &SolverOptions::default()).unwrap();
    let exact = [c(1.0), C64::new(0.0, 1.0), c(-1.0), C64::new(0.0, -1.0)];
    assert!(max_match(&res.finite_values(), &exact) <= 1e-13);
}

#[test]
fn diagonal_pencil_needs_no_sweeps() {
    let d = [c(1.0), C64::new(2.0, 1.0), c(-3.0), c(0.5)];
    let a = CMat::from_fn(4, 4, |i, j| if i == j { d[i] } else if i < j { c(1.0) } else { c(0.0) });
    let res = dense_eigenvalues(&DenseMatrixPair::new(a, CMat::identity(4)).unwrap(), &SolverOptions::default()).unwrap();
    assert_eq!(res.total_sweeps, 0);
    assert!(max_match(&res.finite_values(), &d) == 0.0);
}

#[test]
fn singular_b_gives_infinite_eigenvalue() {
    let a = CMat::from_fn(3, 3, |i, j| if i <= j + 1 { c(1.0 + (i + 2 * j) as f64) } else { c(0.0) });
    let mut b = CMat::identity(3);
    b[(2, 2)] = c(0.0);
    let res = dense_eigenvalues(&DenseMatrixPair::new(a, b).unwrap(), &SolverOptions::default()).unwrap();
    assert_eq!(res.infinite_count(), 1);
    assert_eq!(res.finite_values().len(), 2);
}

#[test]
fn power_sum_roots() {
    let g = generate(Family::PowerSum, 20, &mut seeded_rng(1)).unwrap();
    let (a, b) = companion_dense(&g.poly, true).unwrap();
    let res = dense_eigenvalues(&DenseMatrixPair::new(a, b).unwrap(), &SolverOptions::default()).unwrap();
    assert!(max_match(&res.finite_values(), g.roots.as_ref().unwrap()) <= 1e-13);
}

#[test]
fn small_random_polynomials_match_known_roots() {
    let mut r = common::rng(9);
    for n in [2, 5, 10, 25, 50] {
        // Jittered points on the unit circle keep the roots well conditioned.
        let roots: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.1 * common::unit_square(&mut r).re) / n as f64))
            .collect();
        let mut coeffs = vec![c(1.0)];
        for &z in &roots {
            let mut next = vec![c(0.0); coeffs.len() + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= z * a;
            }
            coeffs = next;
        }
        // Rounding the coefficients moves the roots; refine the designed roots
        // against the rounded polynomial in double-double.
        let dd: Vec<CDD> = coeffs.iter().map(|&z| CDD::from(z)).collect();
        let roots = polish_roots(&dd, &roots, 60);
        let (a, b) = companion_dense(&Polynomial::new(coeffs).unwrap(), true).unwrap();
        let res = dense_eigenvalues(&DenseMatrixPair::new(a, b).unwrap(), &SolverOptions::default()).unwrap();
        assert!(max_match(&res.finite_values(), &roots) <= 1e-10, "n = {n}: {:e}", max_match(&res.finite_values(), &roots));
    }
}
