//! Unit tests for the dense linear algebra layer. Expected values come from
//! closed forms small enough to derive by hand (2x2 characteristic
//! polynomials, diagonal cases, explicit index contractions); each is frozen
//! as a literal.

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use qmlab_core::linalg::{
    c64, commutator, fidelity, hermitian_eig, kron, operator_norm, partial_trace_system, pauli_x,
    pauli_y, pauli_z, psd_sqrt, trace_norm, unitary_exp, ComplexMatrix, DensityMatrix,
    HermitianOperator, StateVector, C64,
};
use qmlab_core::Error;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn herm_from_rows(rows: &[&[C64]]) -> HermitianOperator {
    let dim = rows.len();
    let flat: Vec<C64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    HermitianOperator::new(ComplexMatrix::from_row_slice(dim, dim, &flat).unwrap()).unwrap()
}

fn assert_matrix_close(actual: &ComplexMatrix, expected: &ComplexMatrix, tol: f64) {
    assert!(
        actual.max_abs_diff(expected) <= tol,
        "matrices differ by {:.3e} (tolerance {tol:.1e})",
        actual.max_abs_diff(expected)
    );
}

#[test]
fn eig_of_diagonal_is_sorted_ascending() {
    let h = HermitianOperator::from_real_diagonal(&[3.0, 1.0]);
    let eig = hermitian_eig(&h).unwrap();
    assert_abs_diff_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(eig.eigenvalues[1], 3.0, epsilon = 1e-12);
}

#[test]
fn eig_of_pauli_x_is_plus_minus_one() {
    // Characteristic polynomial of [[0,1],[1,0]] is l^2 - 1.
    let eig = hermitian_eig(&pauli_x()).unwrap();
    assert_abs_diff_eq!(eig.eigenvalues[0], -1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(eig.eigenvalues[1], 1.0, epsilon = 1e-12);
}

#[test]
fn eig_of_zero_matrix_is_all_zeros() {
    let eig = hermitian_eig(&HermitianOperator::zeros(4)).unwrap();
    for &l in &eig.eigenvalues {
        assert_abs_diff_eq!(l, 0.0, epsilon = 1e-15);
    }
}

#[test]
fn eig_reconstructs_input_and_vectors_are_unitary() {
    let h = herm_from_rows(&[
        &[c64(1.0, 0.0), c64(0.3, -0.4), c64(0.0, 0.2)],
        &[c64(0.3, 0.4), c64(-2.0, 0.0), c64(0.5, 0.0)],
        &[c64(0.0, -0.2), c64(0.5, 0.0), c64(0.7, 0.0)],
    ]);
    let eig = hermitian_eig(&h).unwrap();
    let rebuilt = eig.reconstruct_with(|l| c64(l, 0.0));
    assert_matrix_close(&rebuilt, h.matrix(), 1e-9);
    let v = eig.eigenvectors.as_dmatrix();
    let gram = ComplexMatrix::new(v.adjoint() * v).unwrap();
    assert_matrix_close(&gram, &ComplexMatrix::identity(3), 1e-9);
    assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn unitary_exp_of_diagonal_gives_scalar_phases() {
    // exp(i * (-pi/2) * diag(1, -1)) = diag(-i, +i).
    let h = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
    let u = unitary_exp(&h, -std::f64::consts::FRAC_PI_2).unwrap();
    let expected = ComplexMatrix::from_row_slice(
        2,
        2,
        &[c64(0.0, -1.0), C64::ZERO, C64::ZERO, c64(0.0, 1.0)],
    )
    .unwrap();
    assert_matrix_close(&u, &expected, 1e-12);
}

#[test]
fn unitary_exp_at_scale_zero_is_identity() {
    let h = herm_from_rows(&[
        &[c64(0.4, 0.0), c64(1.0, 2.0)],
        &[c64(1.0, -2.0), c64(-0.9, 0.0)],
    ]);
    let u = unitary_exp(&h, 0.0).unwrap();
    assert_matrix_close(&u, &ComplexMatrix::identity(2), 1e-12);
}

#[test]
fn unitary_exp_of_pauli_x_at_minus_pi_is_minus_identity() {
    // Eigenvalues of sigma_x are +-1, so the phases are both exp(-i pi) = -1.
    let u = unitary_exp(&pauli_x(), -std::f64::consts::PI).unwrap();
    let expected = ComplexMatrix::identity(2).scaled(c64(-1.0, 0.0));
    assert_matrix_close(&u, &expected, 1e-12);
}

#[test]
fn psd_sqrt_of_diagonal_state() {
    let rho = DensityMatrix::new(HermitianOperator::from_real_diagonal(&[0.25, 0.75])).unwrap();
    let root = psd_sqrt(&rho).unwrap();
    let expected = HermitianOperator::from_real_diagonal(&[0.5, 0.75f64.sqrt()]);
    assert_matrix_close(root.matrix(), expected.matrix(), 1e-12);
}

#[test]
fn psd_sqrt_of_projector_is_itself() {
    let rho = DensityMatrix::from_pure(&StateVector::basis(2, 0));
    let root = psd_sqrt(&rho).unwrap();
    assert_matrix_close(root.matrix(), rho.matrix(), 1e-12);
}

#[test]
fn psd_sqrt_of_maximally_mixed() {
    let rho = DensityMatrix::maximally_mixed(2);
    let root = psd_sqrt(&rho).unwrap();
    let expected = HermitianOperator::from_real_diagonal(&[SQRT_HALF, SQRT_HALF]);
    assert_matrix_close(root.matrix(), expected.matrix(), 1e-12);
}

#[test]
fn operator_norm_of_pauli_x_is_one() {
    assert_abs_diff_eq!(operator_norm(pauli_x().matrix()), 1.0, epsilon = 1e-12);
}

#[test]
fn operator_norm_of_diagonal_is_max_abs() {
    let m = HermitianOperator::from_real_diagonal(&[2.0, -5.0]);
    assert_abs_diff_eq!(operator_norm(m.matrix()), 5.0, epsilon = 1e-12);
}

#[test]
fn operator_norm_of_projector_commutator_with_pauli_x() {
    // [|0><0|, sigma_x] = [[0, 1], [-1, 0]], singular values both 1.
    let q = StateVector::basis(2, 0).projector();
    let comm = commutator(q.matrix(), pauli_x().matrix()).unwrap();
    assert_abs_diff_eq!(comm.get(0, 1).re, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(comm.get(1, 0).re, -1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(operator_norm(&comm), 1.0, epsilon = 1e-12);
}

#[test]
fn kron_of_identities_is_identity() {
    let result = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
    assert_matrix_close(&result, &ComplexMatrix::identity(6), 0.0);
}

#[test]
fn kron_projects_first_factor_block() {
    // diag(1,0) x diag(a,b) places the second factor in the leading block.
    let a = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
    let b = HermitianOperator::from_real_diagonal(&[0.3, 0.8]);
    let result = a.kron(&b);
    let expected = HermitianOperator::from_real_diagonal(&[0.3, 0.8, 0.0, 0.0]);
    assert_matrix_close(result.matrix(), expected.matrix(), 0.0);
}

#[test]
fn kron_of_pauli_x_pair_squares_to_identity() {
    let xx = kron(pauli_x().matrix(), pauli_x().matrix());
    let squared = &xx * &xx;
    assert_matrix_close(&squared, &ComplexMatrix::identity(4), 1e-15);
}

#[test]
fn partial_trace_recovers_apparatus_factor_of_product_state() {
    let rho_s = DensityMatrix::new(HermitianOperator::from_real_diagonal(&[0.2, 0.8])).unwrap();
    let rho_a = DensityMatrix::new(
        HermitianOperator::new(
            ComplexMatrix::from_row_slice(
                2,
                2,
                &[c64(0.6, 0.0), c64(0.1, 0.2), c64(0.1, -0.2), c64(0.4, 0.0)],
            )
            .unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let product = DensityMatrix::new(
        HermitianOperator::new(kron(rho_s.matrix(), rho_a.matrix())).unwrap(),
    )
    .unwrap();
    let reduced = partial_trace_system(&product, 2, 2).unwrap();
    assert_matrix_close(reduced.matrix(), rho_a.matrix(), 1e-10);
}

#[test]
fn partial_trace_of_bell_state_is_maximally_mixed() {
    // |phi+> = (|00> + |11>)/sqrt(2); contracting the first index by hand:
    // (rho_A)_ab = rho[(0,a),(0,b)] + rho[(1,a),(1,b)] = delta_ab / 2.
    let bell = StateVector::from_slice(&[
        c64(SQRT_HALF, 0.0),
        C64::ZERO,
        C64::ZERO,
        c64(SQRT_HALF, 0.0),
    ])
    .unwrap();
    let reduced = partial_trace_system(&DensityMatrix::from_pure(&bell), 2, 2).unwrap();
    assert_matrix_close(
        reduced.matrix(),
        DensityMatrix::maximally_mixed(2).matrix(),
        1e-15,
    );
}

#[test]
fn partial_trace_preserves_trace_on_rectangular_split() {
    let psi = StateVector::normalized(nalgebra::DVector::from_fn(6, |k, _| {
        c64(1.0 + k as f64, (k as f64) * 0.5 - 1.0)
    }))
    .unwrap();
    let reduced = partial_trace_system(&DensityMatrix::from_pure(&psi), 2, 3).unwrap();
    assert_abs_diff_eq!(reduced.matrix().trace().re, 1.0, epsilon = 1e-12);
    assert_eq!(reduced.dim(), 3);
}

#[test]
fn partial_trace_rejects_dimension_mismatch() {
    let rho = DensityMatrix::maximally_mixed(4);
    assert!(matches!(
        partial_trace_system(&rho, 2, 3),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn fidelity_of_state_with_itself_is_one() {
    let rho = DensityMatrix::new(
        HermitianOperator::new(
            ComplexMatrix::from_row_slice(
                2,
                2,
                &[c64(0.7, 0.0), c64(0.2, -0.1), c64(0.2, 0.1), c64(0.3, 0.0)],
            )
            .unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    assert_abs_diff_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-9);
}

#[test]
fn fidelity_of_basis_state_with_plus_state() {
    // Pure states: F = |<0|+>| = 1/sqrt(2).
    let zero = DensityMatrix::from_pure(&StateVector::basis(2, 0));
    let plus = DensityMatrix::from_pure(
        &StateVector::from_slice(&[c64(SQRT_HALF, 0.0), c64(SQRT_HALF, 0.0)]).unwrap(),
    );
    assert_abs_diff_eq!(fidelity(&zero, &plus).unwrap(), SQRT_HALF, epsilon = 1e-9);
    assert_abs_diff_eq!(
        fidelity(&plus, &zero).unwrap(),
        fidelity(&zero, &plus).unwrap(),
        epsilon = 1e-9
    );
}

#[test]
fn fidelity_of_orthogonal_pure_states_is_zero() {
    let zero = DensityMatrix::from_pure(&StateVector::basis(2, 0));
    let one = DensityMatrix::from_pure(&StateVector::basis(2, 1));
    assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-9);
}

#[test]
fn trace_norm_of_projector_difference() {
    // |0><0| - |+><+| has eigenvalues +-1/sqrt(2).
    let zero = StateVector::basis(2, 0).projector();
    let plus = StateVector::from_slice(&[c64(SQRT_HALF, 0.0), c64(SQRT_HALF, 0.0)])
        .unwrap()
        .projector();
    let diff = &zero - &plus;
    assert_abs_diff_eq!(trace_norm(&diff), 2.0 * SQRT_HALF, epsilon = 1e-12);
}

#[test]
fn pauli_matrices_have_expected_entries() {
    assert_abs_diff_eq!(pauli_x().matrix().get(0, 1).re, 1.0, epsilon = 0.0);
    assert_abs_diff_eq!(pauli_y().matrix().get(0, 1).im, -1.0, epsilon = 0.0);
    assert_abs_diff_eq!(pauli_z().matrix().get(1, 1).re, -1.0, epsilon = 0.0);
}

#[test]
fn hermitian_constructor_rejects_asymmetry() {
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[C64::ZERO, c64(1.0, 0.0), c64(0.9, 0.0), C64::ZERO],
    )
    .unwrap();
    assert!(matches!(
        HermitianOperator::new(m),
        Err(Error::NotHermitian { .. })
    ));
}

#[test]
fn hermitian_constructor_rejects_rectangular() {
    let m = ComplexMatrix::zeros(2, 3);
    assert!(matches!(
        HermitianOperator::new(m),
        Err(Error::NotSquare { rows: 2, cols: 3 })
    ));
}

#[test]
fn complex_matrix_rejects_non_finite_entries() {
    let m = DMatrix::from_row_slice(1, 2, &[c64(1.0, 0.0), c64(f64::NAN, 0.0)]);
    assert!(matches!(
        ComplexMatrix::new(m),
        Err(Error::NonFinite { row: 0, col: 1 })
    ));
}

#[test]
fn state_vector_rejects_wrong_norm() {
    let err = StateVector::from_slice(&[c64(0.5, 0.0), c64(0.5, 0.0)]).unwrap_err();
    assert!(matches!(err, Error::NotUnitNorm { .. }));
    assert!(err.to_string().contains("norm"));
}

#[test]
fn density_matrix_rejects_wrong_trace() {
    let op = HermitianOperator::from_real_diagonal(&[0.7, 0.7]);
    assert!(matches!(
        DensityMatrix::new(op),
        Err(Error::InvalidTrace { .. })
    ));
}

#[test]
fn density_matrix_rejects_negative_eigenvalues() {
    let op = HermitianOperator::from_real_diagonal(&[1.2, -0.2]);
    assert!(matches!(
        DensityMatrix::new(op),
        Err(Error::NotPositive { .. })
    ));
}

#[test]
fn density_matrix_accepts_eigenvalue_noise_floor() {
    let op = HermitianOperator::from_real_diagonal(&[1.0 + 5e-10, -5e-10]);
    assert!(DensityMatrix::new(op).is_ok());
}

#[test]
fn commutator_rejects_mismatched_dimensions() {
    let a = ComplexMatrix::identity(2);
    let b = ComplexMatrix::identity(3);
    assert!(matches!(
        commutator(&a, &b),
        Err(Error::DimensionMismatch { .. })
    ));
}
