use nalgebra::Matrix4;
use proptest::prelude::*;
use qcorr::gaussian::*;
use qcorr::CovarianceMatrix;
use qcorr_oracles::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn invariant_formulas_match_matrix_eigenvalues() {
    let mut rng = rng(7);
    for _ in 0..1000 {
        let state = random_physical_state(&mut rng, 4.0);
        let sigma = sigma_of(&state);
        let spec = spectrum(&state);
        let (lo, hi) = symplectic_eigenvalues_oracle(&sigma);
        assert!((spec.nu_minus - lo).abs() <= 1e-12 * lo.max(1.0), "{} vs {lo}", spec.nu_minus);
        assert!((spec.nu_plus - hi).abs() <= 1e-12 * hi.max(1.0), "{} vs {hi}", spec.nu_plus);
        let (tlo, thi) = symplectic_eigenvalues_oracle(&partial_transpose(&sigma));
        assert!((spec.nu_tilde_minus - tlo).abs() <= 1e-12 * tlo.max(1.0));
        assert!((spec.nu_tilde_plus - thi).abs() <= 1e-12 * thi.max(1.0));
    }
}

#[test]
fn discord_closed_form_matches_brute_force() {
    let mut rng = rng(11);
    for _ in 0..50 {
        let state = random_physical_state(&mut rng, 2.0);
        let closed = gaussian_discord_mode2(&state).unwrap();
        let brute = discord_brute_force(&state);
        assert!((closed - brute).abs() < 1e-4, "closed {closed} brute {brute}");
    }
}

#[test]
fn squeezed_vacuum_negativity() {
    for r in [0.1, 0.5, 1.0, 2.0] {
        let state = two_mode_squeezed_vacuum(r);
        assert!((log_negativity(&state).unwrap() - 2.0 * r).abs() < 1e-10);
        let (lo, hi) = symplectic_eigenvalues(&state).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }
}

#[test]
fn local_symplectic_invariance() {
    let mut rng = rng(3);
    for _ in 0..100 {
        let state = random_physical_state(&mut rng, 2.0);
        let s = random_local_symplectic(&mut rng, 0.6);
        let moved = from_sigma(s * sigma_of(&state) * s.transpose());
        let (a, b) = (correlation_report(&state).unwrap(), correlation_report(&moved).unwrap());
        assert!((a.log_negativity - b.log_negativity).abs() < 1e-9);
        assert!((a.discord_mode2 - b.discord_mode2).abs() < 1e-8);
        assert!((a.nu_minus - b.nu_minus).abs() < 1e-9 * a.nu_minus);
        assert!((a.purity_mode2 - b.purity_mode2).abs() < 1e-9);
    }
}

#[test]
fn discord_is_continuous() {
    let mut rng = rng(5);
    for _ in 0..50 {
        let state = random_physical_state(&mut rng, 2.0);
        let base = gaussian_discord_mode2(&state).unwrap();
        // nudge towards the maximally mixed direction, staying physical
        let bumped = CovarianceMatrix::from_matrix(state.matrix() + Matrix4::identity() * 1e-7);
        let d = gaussian_discord_mode2(&bumped).unwrap();
        assert!((d - base).abs() < 1e-5, "{base} -> {d}");
    }
}

#[test]
fn mode_entropy_agrees() {
    for x in [1.0, 1.5, 3.0, 40.0] {
        assert!((entropy_function(x) - mode_entropy(x)).abs() < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measures_are_physical(seed in any::<u64>(), excess in 0.0f64..5.0) {
        let state = random_physical_state(&mut rng(seed), excess + 1e-3);
        let report = correlation_report(&state).unwrap();
        prop_assert!(report.nu_minus >= 1.0 - SYMPLECTIC_TOL);
        prop_assert!(report.nu_plus >= report.nu_minus);
        prop_assert!(report.log_negativity >= 0.0);
        prop_assert!(report.discord_mode2 >= 0.0);
        for mu in [report.purity_global, report.purity_mode1, report.purity_mode2] {
            prop_assert!(mu > 0.0 && mu <= 1.0 + 1e-9);
        }
        // separable states have the PPT eigenvalue above 1
        prop_assert_eq!(report.log_negativity == 0.0, report.nu_tilde_minus >= 1.0);
    }

    #[test]
    fn discord_symmetric_for_swapped_modes(seed in any::<u64>()) {
        let state = random_physical_state(&mut rng(seed), 2.0);
        let sigma = sigma_of(&state);
        let swap = Matrix4::new(
            0.0, 0.0, 1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
        );
        let swapped = from_sigma(swap * sigma * swap.transpose());
        let a = gaussian_discord_mode1(&state).unwrap();
        let b = gaussian_discord_mode2(&swapped).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }
}
