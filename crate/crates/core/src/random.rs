//! Seeded random ensembles: Gaussian Hermitian operators, Haar-distributed
//! states, unitaries and subspace projectors, and whole random scenarios for
//! fuzzing the certified inequalities.
//!
//! Every generator takes `&mut impl Rng`; determinism is the caller's
//! responsibility (the test suites and the CLI use `ChaCha8Rng` with explicit
//! seeds).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c64, ComplexMatrix, DensityMatrix, HermitianOperator, StateVector, C64};
use crate::process::MeasurementProcess;

/// Standard complex normal sample: unit total variance, split evenly
/// between the real and imaginary parts.
fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

/// Gaussian Hermitian operator `(G + G†)/2` with standard complex normal
/// entries in `G`. The symmetrization is exact in floating point, so the
/// result needs no hermiticity re-check.
pub fn gue_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = ginibre(rng, dim, dim);
    let h = (&g + g.adjoint()).scale(0.5);
    HermitianOperator::trusted(ComplexMatrix::trusted(h))
}

/// Gaussian Hermitian operator rescaled to a given operator norm.
/// `target_norm` must be nonnegative; zero returns the zero operator.
pub fn gue_hermitian_with_norm<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    target_norm: f64,
) -> HermitianOperator {
    assert!(
        target_norm.is_finite() && target_norm >= 0.0,
        "target norm must be finite and nonnegative"
    );
    if target_norm == 0.0 {
        return HermitianOperator::zeros(dim);
    }
    loop {
        let h = gue_hermitian(rng, dim);
        let norm = crate::linalg::operator_norm(h.matrix());
        if norm > 0.0 {
            return h.scaled(target_norm / norm);
        }
    }
}

/// Haar-distributed pure state: a normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
        if let Ok(state) = StateVector::normalized(v) {
            return state;
        }
    }
}

/// Haar-distributed unitary via QR of a Ginibre matrix, with the phase
/// ambiguity fixed by the signs of the R diagonal so the distribution is
/// exactly uniform.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let r_diag: Vec<C64> = (0..dim).map(|k| qr.r()[(k, k)]).collect();
    let mut q = qr.unpack().0;
    for (k, d) in r_diag.iter().enumerate() {
        let phase = if d.norm() == 0.0 { C64::ONE } else { *d / d.norm() };
        for i in 0..dim {
            q[(i, k)] *= phase;
        }
    }
    ComplexMatrix::trusted(q)
}

/// Projector onto a Haar-random subspace of the given rank, built by
/// orthonormalizing Gaussian columns. Rank 0 and full rank return the zero
/// and identity projectors.
pub fn haar_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> HermitianOperator {
    assert!(rank <= dim, "rank cannot exceed the dimension");
    if rank == 0 {
        return HermitianOperator::zeros(dim);
    }
    if rank == dim {
        return HermitianOperator::identity(dim);
    }
    let q = ginibre(rng, dim, rank).qr().unpack().0;
    let z = &q * q.adjoint();
    HermitianOperator::trusted(ComplexMatrix::trusted(z))
}

/// Random full-rank mixed state `G G† / tr(G G†)` (the Hilbert-Schmidt
/// induced measure).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        let g = ginibre(rng, dim, dim);
        let gram = &g * g.adjoint();
        let trace = gram.trace().re;
        if trace > 0.0 && trace.is_finite() {
            let normalized = gram.map(|z| z / trace);
            return DensityMatrix::trusted(HermitianOperator::trusted(ComplexMatrix::trusted(
                normalized,
            )));
        }
    }
}

/// Unstructured random scenario: Gaussian Hamiltonians, Haar measured basis
/// and apparatus state, uniform duration in `[0, tau_max]`, ħ = 1.
pub fn random_process<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    tau_max: f64,
) -> MeasurementProcess {
    let h_s = gue_hermitian(rng, 2);
    let h_a = gue_hermitian(rng, dim_a);
    let v = gue_hermitian(rng, 2 * dim_a);
    let (q0, q1) = haar_basis_pair(rng);
    let omega = haar_state(rng, dim_a);
    let tau = rng.random::<f64>() * tau_max;
    MeasurementProcess::new(h_s, h_a, v, q0, q1, omega, tau, 1.0)
        .expect("generated scenario satisfies all construction invariants")
}

/// Random scenario whose interaction commutes with the extended system
/// Hamiltonian by construction: `V = H_S ⊗ B + 1 ⊗ C` with Gaussian
/// Hermitian `B`, `C`.
pub fn commuting_v_process<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    tau_max: f64,
) -> MeasurementProcess {
    let h_s = gue_hermitian(rng, 2);
    let h_a = gue_hermitian(rng, dim_a);
    let b = gue_hermitian(rng, dim_a);
    let c = gue_hermitian(rng, dim_a);
    let v = &h_s.kron(&b) + &HermitianOperator::identity(2).kron(&c);
    let (q0, q1) = haar_basis_pair(rng);
    let omega = haar_state(rng, dim_a);
    let tau = rng.random::<f64>() * tau_max;
    MeasurementProcess::new(h_s, h_a, v, q0, q1, omega, tau, 1.0)
        .expect("generated scenario satisfies all construction invariants")
}

/// Haar-random orthonormal basis of the two-level system: the columns of a
/// Haar unitary.
pub fn haar_basis_pair<R: Rng + ?Sized>(rng: &mut R) -> (StateVector, StateVector) {
    let u = haar_unitary(rng, 2);
    let col = |k: usize| {
        StateVector::new(DVector::from_fn(2, |r, _| u.get(r, k)))
            .expect("unitary columns are unit vectors")
    };
    (col(0), col(1))
}
