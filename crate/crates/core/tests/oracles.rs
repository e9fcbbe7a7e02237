//! Tests for the brute-force qubit checks: grid minimization of the measured
//! overlap must converge to the closed-form fidelity from above, and the
//! error-probability bound must hold for every sampled pointer.

use approx::assert_abs_diff_eq;
use qmlab_core::linalg::{c64, fidelity, DensityMatrix, StateVector};
use qmlab_core::models::two_level_apparatus_model;
use qmlab_core::oracles::{
    fidelity_by_pvm_minimization, lemma2_bound_check, measured_overlap, PvmGrid,
};
use qmlab_core::random::{random_density, random_process};
use qmlab_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn grid_rejects_too_coarse_resolutions() {
    assert!(matches!(
        PvmGrid::new(7),
        Err(Error::InvalidParameter { name: "resolution", .. })
    ));
    let grid = PvmGrid::new(8).unwrap();
    assert_eq!(grid.resolution(), 8);
    // Poles collapse to the same projector pair, so the count stays modest.
    assert_eq!(grid.pvms().len(), 9 * 8);
}

#[test]
fn measured_overlap_upper_bounds_fidelity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let grid = PvmGrid::new(16).unwrap();
    for _ in 0..10 {
        let rho = random_density(&mut rng, 2);
        let sigma = random_density(&mut rng, 2);
        let f = fidelity(&rho, &sigma).unwrap();
        for pvm in grid.pvms() {
            let overlap = measured_overlap(&rho, &sigma, pvm).unwrap();
            assert!(
                overlap >= f - 1e-9,
                "overlap {overlap} dipped below fidelity {f}"
            );
        }
    }
}

#[test]
fn minimization_on_identical_states_returns_one() {
    let grid = PvmGrid::new(8).unwrap();
    let rho = DensityMatrix::maximally_mixed(2);
    let (min, _) = fidelity_by_pvm_minimization(&rho, &rho, &grid).unwrap();
    assert_abs_diff_eq!(min, 1.0, epsilon = 1e-12);
}

#[test]
fn minimization_separates_orthogonal_pure_states() {
    let grid = PvmGrid::new(200).unwrap();
    let rho = DensityMatrix::from_pure(&StateVector::basis(2, 0));
    let sigma = DensityMatrix::from_pure(&StateVector::basis(2, 1));
    let (min, best) = fidelity_by_pvm_minimization(&rho, &sigma, &grid).unwrap();
    assert!(min <= 1e-3, "grid minimum {min} too far from zero");
    // The minimizing pointer distinguishes the states almost perfectly.
    let p0 = best.projectors()[0].expectation(&rho);
    let p0_other = best.projectors()[0].expectation(&sigma);
    assert!((p0 - p0_other).abs() >= 1.0 - 1e-3);
}

#[test]
fn minimization_recovers_pure_state_overlap() {
    let grid = PvmGrid::new(400).unwrap();
    let rho = DensityMatrix::from_pure(&StateVector::basis(2, 0));
    let sigma = DensityMatrix::from_pure(
        &StateVector::from_slice(&[c64(SQRT_HALF, 0.0), c64(SQRT_HALF, 0.0)]).unwrap(),
    );
    let (min, _) = fidelity_by_pvm_minimization(&rho, &sigma, &grid).unwrap();
    assert_abs_diff_eq!(min, SQRT_HALF, epsilon = 2e-3);
    assert!(min >= SQRT_HALF - 1e-9);
}

#[test]
fn refinement_never_increases_the_minimum() {
    // Doubling the resolution keeps every existing grid point, so the
    // minimum can only move down.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let rho = random_density(&mut rng, 2);
        let sigma = random_density(&mut rng, 2);
        let mut last = f64::INFINITY;
        for resolution in [8, 16, 32] {
            let grid = PvmGrid::new(resolution).unwrap();
            let (min, _) = fidelity_by_pvm_minimization(&rho, &sigma, &grid).unwrap();
            assert!(
                min <= last + 1e-12,
                "refinement raised the minimum: {min} > {last}"
            );
            last = min;
        }
    }
}

#[test]
fn minimization_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rho = random_density(&mut rng, 2);
    let sigma = random_density(&mut rng, 2);
    let grid = PvmGrid::new(32).unwrap();
    let (a, pvm_a) = fidelity_by_pvm_minimization(&rho, &sigma, &grid).unwrap();
    let (b, pvm_b) = fidelity_by_pvm_minimization(&rho, &sigma, &grid).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        pvm_a.projectors()[0]
            .matrix()
            .max_abs_diff(pvm_b.projectors()[0].matrix()),
        0.0
    );
}

#[test]
fn error_bound_margin_vanishes_for_identical_branches() {
    // With no interaction both branches stay at Omega: every pointer gives
    // p_error = 1/2, saturating 2 sqrt(p - p^2) = 1 = F exactly.
    let p = qmlab_core::models::two_level_apparatus_model(1.0).unwrap();
    let idle = qmlab_core::process::MeasurementProcess::new(
        p.h_s().clone(),
        p.h_a().clone(),
        qmlab_core::linalg::HermitianOperator::zeros(4),
        p.q0().clone(),
        p.q1().clone(),
        p.omega().clone(),
        p.tau(),
        p.hbar(),
    )
    .unwrap();
    let worst = lemma2_bound_check(&idle, 40, 7).unwrap();
    assert_abs_diff_eq!(worst, 0.0, epsilon = 1e-10);
}

#[test]
fn error_bound_holds_for_the_two_level_scenario() {
    let p = two_level_apparatus_model(1.0).unwrap();
    let worst = lemma2_bound_check(&p, 60, 11).unwrap();
    assert!(worst >= -1e-9, "margin {worst} broke the bound");
}

#[test]
fn error_bound_holds_on_random_scenarios() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..100 {
        let p = random_process(&mut rng, 4, 5.0);
        let worst = lemma2_bound_check(&p, 20, k).unwrap();
        assert!(
            worst >= -1e-9,
            "margin {worst} broke the bound at sample {k}"
        );
    }
}

#[test]
fn error_bound_check_requires_samples() {
    let p = two_level_apparatus_model(1.0).unwrap();
    assert!(matches!(
        lemma2_bound_check(&p, 0, 0),
        Err(Error::InvalidParameter { name: "z_samples", .. })
    ));
}
