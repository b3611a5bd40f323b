mod common;

use proptest::prelude::*;

use gllog::krylov::log_action;
use gllog::linalg::{expm_ref, norm2_eig};
use gllog::logm::{error_functional, logm_auto, logm_fixed, logm_fixed_fast, select_params, ParamChoice};
use gllog::matrix::vec_norm;
use gllog::spectral::{fov_boundary, SpectralSet};
use gllog::{ComplexMatrix, C64};

use common::*;

fn small_perturbation_of_identity(seed: u64, n: usize, size: f64) -> ComplexMatrix {
    let mut r = rng(seed);
    let g = random_matrix(&mut r, n, true);
    g.scale_real(size / norm2_eig(&g).unwrap()).shift(C64::new(1.0, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // diagonal spectra in [0.1, 10]: the bound covers the error in
    // log(A^{1/2^s}), so the error in log(A) is compared after dividing by 2^s
    #[test]
    fn bound_dominates_on_normal_matrices(d in prop::collection::vec(0.1f64..10.0, 2..8), s in 0u32..4, k in 6usize..14) {
        let a = ComplexMatrix::from_real_diag(&d);
        let set = SpectralSet::interval(
            d.iter().copied().fold(f64::INFINITY, f64::min),
            d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            d.len(),
        ).unwrap();
        let bound = error_functional(&set, s, k).unwrap();
        prop_assume!(bound > 1e-14);
        let x = logm_fixed_fast(&a, s, k).unwrap().x;
        let err = d.iter().enumerate().map(|(i, v)| (x[(i, i)].re - v.ln()).abs()).fold(0.0, f64::max) / 2f64.powi(s as i32);
        prop_assert!(err <= bound, "error {err:e} above bound {bound:e}");
    }

    #[test]
    fn squaring_doubles_the_log(seed in any::<u64>(), n in 2usize..7, s in 0u32..3, k in 4usize..12) {
        let a = small_perturbation_of_identity(seed, n, 0.4);
        let x1 = logm_fixed_fast(&a, s, k).unwrap().x;
        let x2 = logm_fixed_fast(&a.matmul(&a), s + 1, k).unwrap().x;
        let scale = x1.frobenius_norm().max(1e-300);
        prop_assert!((&x2 - &x1.scale_real(2.0)).frobenius_norm() <= 1e-11 * 2.0 * scale);
    }

    // brute force over the grid agrees with the selection rule
    #[test]
    fn no_cheaper_feasible_pair(seed in any::<u64>(), n in 2usize..6, size in 0.05f64..3.0, tol_exp in 6i32..16) {
        let a = small_perturbation_of_identity(seed, n, size.min(0.9));
        let set = fov_boundary(&a, 32).unwrap();
        let tol = 10f64.powi(-tol_exp);
        let chosen = select_params(&set, tol, 12, 24).unwrap();
        for s in 0..=12 {
            for k in 1..=24 {
                let cand = ParamChoice { s, k, predicted_error: None };
                if error_functional(&set, s, k).unwrap() <= tol {
                    prop_assert!(cand.cost_thirds() >= chosen.cost_thirds());
                    if cand.cost_thirds() == chosen.cost_thirds() {
                        prop_assert!((s, k) >= (chosen.s, chosen.k));
                    }
                }
            }
        }
    }

    #[test]
    fn logm_inverts_expm(seed in any::<u64>(), n in 2usize..7, size in 0.1f64..1.4) {
        let mut r = rng(seed);
        let g = random_matrix(&mut r, n, true);
        let x = g.scale_real(size / norm2_eig(&g).unwrap());
        let got = logm_auto(&expm_ref(&x).unwrap(), 1e-15).unwrap().x;
        prop_assert!(norm2_eig(&(&got - &x)).unwrap() <= 1e-12 * norm2_eig(&x).unwrap());
    }

    // with the full space the Krylov projection is exact
    #[test]
    fn krylov_exact_at_full_dimension(seed in any::<u64>(), n in 2usize..12) {
        let a = small_perturbation_of_identity(seed, n, 0.7);
        let mut r = rng(seed ^ 0x5eed);
        let v = random_matrix(&mut r, n, true).col(0).to_vec();
        let act = log_action(&a, &v, n + 2).unwrap();
        let dense = logm_auto(&a, 1e-15).unwrap().x.matvec(&v);
        let diff: Vec<C64> = act.f.iter().zip(&dense).map(|(x, y)| x - y).collect();
        prop_assert!(vec_norm(&diff) <= 1e-11 * vec_norm(&dense));
    }
}

#[test]
fn log_of_e_on_the_diagonal() {
    let e = std::f64::consts::E;
    let a = ComplexMatrix::from_real_diag(&[e, e, e]);
    let ten = logm_fixed(&a, 0, 10).unwrap().x;
    let twelve = logm_fixed(&a, 0, 12).unwrap().x;
    for i in 0..3 {
        // ten nodes leave about 9e-13 at the point e
        assert!((ten[(i, i)].re - 1.0).abs() <= 1e-12);
        assert!((twelve[(i, i)].re - 1.0).abs() <= 1e-14);
    }
}

#[test]
fn real_input_gives_real_output() {
    let a = gllog::gallery::parter(6);
    let rep = logm_auto(&a, 1e-15).unwrap();
    assert!(rep.x.is_real());
    assert!(rep.kappa.unwrap() >= 1.0);
}

#[test]
fn table_references_agree_with_each_other() {
    // the closed form and the series reference agree on -hanowa
    let a = gllog::gallery::hanowa_neg(8);
    let closed = hanowa_neg_log(8);
    let series = gregory_log(&a);
    assert!(norm2_eig(&(&closed - &series)).unwrap() <= 1e-13 * norm2_eig(&closed).unwrap());
}
