mod common;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use gllog::gallery::{build, forsythe, hanowa_neg, symbol_range, toeplitz_t, GallerySpec, FAMILY_NAMES};
use gllog::io::{format_complex, parse_complex, read_matrix_file, write_matrix_file};
use gllog::krylov::{poles_from_rule, rational_arnoldi};
use gllog::linalg::{sqrtm, LuFactorization};
use gllog::quadrature::gauss_legendre;
use gllog::scalar::{
    eval_r, pade_denominator_coeffs, pade_denominator_exact, pade_denominator_via_legendre, pade_denominator_via_nodes,
    pade_numerator_coeffs, pade_numerator_exact, scalar_error_bound,
};
use gllog::{ComplexMatrix, Error, C64};

use common::*;

proptest! {
    #[test]
    fn gauss_rule_integrates_polynomials(k in 1usize..=20, coeffs in prop::collection::vec(-1.0f64..1.0, 1..40)) {
        let rule = gauss_legendre(k).unwrap();
        let deg = (coeffs.len() - 1).min(2 * k - 1);
        let c = &coeffs[..=deg];
        let exact: f64 = c.iter().enumerate().map(|(d, a)| if d % 2 == 0 { 2.0 * a / (d as f64 + 1.0) } else { 0.0 }).sum();
        let got = rule.integrate(|x| c.iter().rev().fold(0.0, |acc, a| acc * x + a));
        prop_assert!((got - exact).abs() <= 1e-13);
    }

    #[test]
    fn quotient_form_matches_quadrature_form(k in 1usize..=12, re in -0.9f64..5.0, im in -3.0f64..3.0) {
        let z = C64::new(re, im);
        let rule = gauss_legendre(k).unwrap();
        let r = eval_r(z, &rule).unwrap();
        let pq = pade_numerator_coeffs(k).unwrap().eval(z) / pade_denominator_coeffs(k).unwrap().eval(z);
        prop_assert!((r - pq).norm() <= 1e-11 * r.norm());
        let direct = quadrature_log1p(z, rule.nodes(), rule.weights());
        prop_assert!((z * r - direct).norm() <= 1e-13 * direct.norm().max(1e-300));
    }

    #[test]
    fn complex_text_round_trips(re in any::<f64>(), im in any::<f64>()) {
        prop_assume!(re.is_finite() && im.is_finite());
        let z = C64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}

#[test]
fn pade_taylor_coefficients_exact() {
    for k in 1..=8 {
        let p = pade_numerator_exact(k).unwrap();
        let q = pade_denominator_exact(k).unwrap();
        let mut ser: Vec<BigRational> = Vec::new();
        for j in 0..=2 * k {
            let mut acc = p.get(j).cloned().unwrap_or_else(BigRational::zero);
            for i in 1..=j.min(k) {
                acc -= &q[i] * &ser[j - i];
            }
            ser.push(acc / &q[0]);
        }
        for (j, c) in ser.iter().enumerate() {
            let target = BigRational::new(if j % 2 == 0 { 1.into() } else { (-1).into() }, (j as i64 + 1).into());
            assert_eq!(*c == target, j < 2 * k, "k = {k}, order {j}");
        }
    }
}

#[test]
fn three_denominator_forms_agree() {
    for k in 1..=10 {
        let b = pade_denominator_coeffs(k).unwrap();
        let l = pade_denominator_via_legendre(k).unwrap();
        let n = pade_denominator_via_nodes(&gauss_legendre(k).unwrap());
        for j in 0..=k {
            let c = b.coeffs()[j];
            assert!((l.coeffs()[j] - c).abs() <= 1e-12 * c.abs(), "legendre k={k} j={j}");
            assert!((n.coeffs()[j] - c).abs() <= 1e-12 * c.abs(), "nodes k={k} j={j}");
        }
    }
}

#[test]
fn bound_at_three() {
    let b = scalar_error_bound(C64::new(3.0, 0.0), 3).unwrap();
    let want = 2.0 * std::f64::consts::PI / 3f64.powi(7);
    assert!((b - want).abs() <= 1e-15 * want);
    assert!(matches!(scalar_error_bound(C64::new(-1.5, 0.0), 3), Err(Error::BranchCut(_))));
}

#[test]
fn forsythe_power_is_scalar() {
    // F^n = alpha I, so the eigenvalues are the n-th roots of alpha
    let f = forsythe(10, 1e-10, 0.0);
    let mut p = ComplexMatrix::identity(10);
    for _ in 0..10 {
        p = p.matmul(&f);
    }
    assert!((&p - &ComplexMatrix::identity(10).scale_real(1e-10)).max_abs() == 0.0);
}

#[test]
fn hanowa_eigenvalues_are_one_plus_minus_mi() {
    // (A - I)^2 = -diag(1..m, 1..m)^2
    let a = hanowa_neg(10);
    let b = a.shift(C64::new(-1.0, 0.0));
    let sq = b.matmul(&b);
    let d: Vec<f64> = (1..=5).chain(1..=5).map(|m| -((m * m) as f64)).collect();
    assert!((&sq - &ComplexMatrix::from_real_diag(&d)).max_abs() == 0.0);
}

#[test]
fn toeplitz_has_three_diagonals() {
    let t = toeplitz_t(30);
    for i in 0..30 {
        for j in 0..30 {
            let want = match j as i64 - i as i64 {
                0 => 2.5,
                -1 => -1.0,
                5 => 1.0,
                _ => 0.0,
            };
            assert_eq!(t[(i, j)], C64::new(want, 0.0));
        }
    }
}

#[test]
fn symbol_extremes_by_dense_sampling() {
    let r = symbol_range(10_000).unwrap();
    assert!(r.min_abs >= 0.5 && r.max_abs <= 4.5);
    // independent sampling of |2.5 - e^{it} + e^{-5it}|
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..=200_000 {
        let t = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / 200_000.0;
        let v = (C64::new(2.5, 0.0) - C64::from_polar(1.0, t) + C64::from_polar(1.0, -5.0 * t)).norm();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    assert!((r.min_abs - lo).abs() < 1e-3 && (r.max_abs - hi).abs() < 1e-3);
}

#[test]
fn every_family_builds_and_has_a_root() {
    for name in FAMILY_NAMES {
        let (n, params): (usize, &[f64]) = match name {
            "rotation" => (2, &[100.0]),
            "forsythe" => (8, &[1e-10, 1.0]),
            "dorr" => (10, &[0.05]),
            _ => (10, &[]),
        };
        let a = build(&GallerySpec::parse(name, n, params).unwrap()).unwrap();
        let y = sqrtm(&a).unwrap();
        assert!((&y.matmul(&y) - &a).frobenius_norm() <= 1e-11 * a.frobenius_norm(), "{name}");
    }
    assert!(matches!(GallerySpec::parse("magic", 4, &[]), Err(Error::UnknownFamily(_))));
    assert!(matches!(GallerySpec::parse("hanowa_neg", 5, &[]), Err(Error::BadParams(_))));
}

#[test]
fn krylov_basis_on_t100_is_orthonormal() {
    let t = toeplitz_t(100).shift(C64::new(-1.0, 0.0));
    let v = vec![C64::new(1.0, 0.0); 100];
    let poles = poles_from_rule(&gauss_legendre(15).unwrap());
    let basis = rational_arnoldi(&t, &v, &poles).unwrap();
    assert_eq!(basis.dim(), 16);
    assert!(basis.orthonormality_residual() <= 1e-10);
}

#[test]
fn lu_solves_a_known_system() {
    let a = ComplexMatrix::from_real_rows(&[&[4.0, 1.0], &[2.0, 3.0]]).unwrap();
    let lu = LuFactorization::factor(&a).unwrap();
    let mut b = vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
    lu.solve_in_place(&mut b);
    assert!((b[0].re - 0.1).abs() < 1e-15 && (b[1].re - 0.6).abs() < 1e-15);
}

#[test]
fn matrix_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(7);
    let a = random_matrix(&mut r, 4, true);
    for name in ["a.mtx", "a.csv"] {
        let path = dir.path().join(name);
        write_matrix_file(&path, &a).unwrap();
        assert_eq!(read_matrix_file(&path).unwrap(), a);
    }
    assert!(matches!(read_matrix_file(&dir.path().join("missing.mtx")), Err(Error::Io(_))));
}
