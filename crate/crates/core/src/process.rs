//! Measurement processes and the quantities they are certified against.
//!
//! A [`MeasurementProcess`] couples a two-level system to a `dim_a`-level
//! apparatus through `H = H_S ⊗ 1 + 1 ⊗ H_A + V` for a duration `tau`. The
//! system observable being measured is the projector `Q = |q1><q1|` onto the
//! second vector of an orthonormal basis `{|q0>, |q1>}`, and the apparatus
//! starts in the pure state `|Ω>`.
//!
//! Feeding the two basis states through the coupling yields the conditional
//! apparatus states `ρ_j = tr_S[U (|q_j><q_j| ⊗ |Ω><Ω|) U†]`. Everything
//! else in this module is a functional of those two states and the process
//! parameters: pointer statistics, minimum-error discrimination, and the
//! trade-off certificate relating
//!
//! ```text
//! ‖[Q, H_S]‖  ≤  ‖H_S‖ · F(ρ0, ρ1)  +  (τ/ħ) · ‖[V, H_S ⊗ 1]‖
//! ```
//!
//! whose right-minus-left slack must be nonnegative (within [`tol::SLACK`])
//! for every valid process.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, fidelity, hermitian_eig, operator_norm, unitary_exp, ComplexMatrix, DensityMatrix,
    HermitianOperator, StateVector, C64,
};
use crate::tol;

/// One measurement scenario: Hamiltonians, measured basis, apparatus state,
/// duration, and the value of ħ.
#[derive(Debug, Clone)]
pub struct MeasurementProcess {
    h_s: HermitianOperator,
    h_a: HermitianOperator,
    v: HermitianOperator,
    q0: StateVector,
    q1: StateVector,
    omega: StateVector,
    tau: f64,
    hbar: f64,
}

impl MeasurementProcess {
    /// Validates and bundles a scenario.
    ///
    /// Dimensions: `h_s` is 2×2, `h_a` is `dim_a`×`dim_a`, `v` acts on the
    /// composite (`2 * dim_a`), `q0`/`q1` are an orthonormal pair on the
    /// system, `omega` lives on the apparatus. `tau` must be finite and
    /// nonnegative, `hbar` finite and positive.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        h_s: HermitianOperator,
        h_a: HermitianOperator,
        v: HermitianOperator,
        q0: StateVector,
        q1: StateVector,
        omega: StateVector,
        tau: f64,
        hbar: f64,
    ) -> Result<Self> {
        if h_s.dim() != 2 {
            return Err(Error::DimensionMismatch {
                what: "system Hamiltonian",
                expected: 2,
                actual: h_s.dim(),
            });
        }
        let dim_a = h_a.dim();
        if v.dim() != 2 * dim_a {
            return Err(Error::DimensionMismatch {
                what: "interaction Hamiltonian",
                expected: 2 * dim_a,
                actual: v.dim(),
            });
        }
        for (what, vec, expected) in [
            ("q0", &q0, 2usize),
            ("q1", &q1, 2),
            ("omega", &omega, dim_a),
        ] {
            if vec.dim() != expected {
                return Err(Error::DimensionMismatch {
                    what: match what {
                        "q0" => "measured basis vector q0",
                        "q1" => "measured basis vector q1",
                        _ => "apparatus state omega",
                    },
                    expected,
                    actual: vec.dim(),
                });
            }
        }
        let overlap = q0.inner(&q1).norm();
        if overlap > tol::ORTHOGONALITY {
            return Err(Error::NotOrthogonal {
                what: "measured basis vectors",
                overlap,
            });
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::InvalidParameter {
                name: "tau",
                reason: format!("duration must be finite and nonnegative, got {tau}"),
            });
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: format!("must be finite and positive, got {hbar}"),
            });
        }
        Ok(Self {
            h_s,
            h_a,
            v,
            q0,
            q1,
            omega,
            tau,
            hbar,
        })
    }

    pub fn h_s(&self) -> &HermitianOperator {
        &self.h_s
    }

    pub fn h_a(&self) -> &HermitianOperator {
        &self.h_a
    }

    pub fn v(&self) -> &HermitianOperator {
        &self.v
    }

    pub fn q0(&self) -> &StateVector {
        &self.q0
    }

    pub fn q1(&self) -> &StateVector {
        &self.q1
    }

    pub fn omega(&self) -> &StateVector {
        &self.omega
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn dim_a(&self) -> usize {
        self.h_a.dim()
    }

    pub fn total_dim(&self) -> usize {
        2 * self.dim_a()
    }

    /// The measured observable `Q = |q1><q1|` on the system.
    pub fn q_projector(&self) -> HermitianOperator {
        self.q1.projector()
    }

    /// `H = H_S ⊗ 1 + 1 ⊗ H_A + V`.
    pub fn total_hamiltonian(&self) -> HermitianOperator {
        let dim_a = self.dim_a();
        let system = self.h_s.kron(&HermitianOperator::identity(dim_a));
        let apparatus = HermitianOperator::identity(2).kron(&self.h_a);
        &(&system + &apparatus) + &self.v
    }

    /// `|q_j> ⊗ |Ω>` for `j ∈ {0, 1}`.
    pub fn initial_branch(&self, j: usize) -> StateVector {
        assert!(j < 2, "branch index must be 0 or 1");
        let q = if j == 0 { &self.q0 } else { &self.q1 };
        q.kron(&self.omega)
    }

    /// The two initial branches evolved by `U(τ) = exp(-iHτ/ħ)`.
    ///
    /// Evolution is applied in the eigenbasis of `H` directly to the vectors;
    /// the full unitary matrix is never formed.
    pub fn evolved_branches(&self) -> Result<(StateVector, StateVector)> {
        let eig = hermitian_eig(&self.total_hamiltonian())?;
        let scale = -self.tau / self.hbar;
        let mut branches = [None, None];
        for (j, slot) in branches.iter_mut().enumerate() {
            let evolved = eig.apply_with(
                |l| C64::from_polar(1.0, scale * l),
                self.initial_branch(j).amplitudes(),
            );
            *slot = Some(StateVector::trusted(evolved));
        }
        let [b0, b1] = branches;
        Ok((b0.unwrap(), b1.unwrap()))
    }

    /// Conditional apparatus states
    /// `ρ_j = tr_S[U (|q_j><q_j| ⊗ |Ω><Ω|) U†]`.
    pub fn apparatus_states(&self) -> Result<(DensityMatrix, DensityMatrix)> {
        let (b0, b1) = self.evolved_branches()?;
        let dim_a = self.dim_a();
        let rho0 = crate::linalg::partial_trace_system(&DensityMatrix::from_pure(&b0), 2, dim_a)?;
        let rho1 = crate::linalg::partial_trace_system(&DensityMatrix::from_pure(&b1), 2, dim_a)?;
        Ok((rho0, rho1))
    }

    /// Conditional outcome statistics of the two-outcome pointer observable
    /// `{1 - Z, Z}` read against the conditional apparatus states. Outcome 1
    /// is the claim "the system was in |q1>".
    pub fn pointer_statistics(&self, z: &HermitianOperator) -> Result<PointerOutcome> {
        let (rho0, rho1) = self.apparatus_states()?;
        pointer_statistics_for(&rho0, &rho1, z)
    }

    /// All terms of the trade-off certificate for this process.
    pub fn bound_report(&self) -> Result<BoundReport> {
        let q = self.q_projector();
        let lhs = operator_norm(&commutator(q.matrix(), self.h_s.matrix())?);
        let h_s_norm = operator_norm(self.h_s.matrix());
        let (rho0, rho1) = self.apparatus_states()?;
        let fid = fidelity(&rho0, &rho1)?;
        let h_s_ext = self.h_s.kron(&HermitianOperator::identity(self.dim_a()));
        let v_comm_norm = operator_norm(&commutator(self.v.matrix(), h_s_ext.matrix())?);
        let drive_term = self.tau / self.hbar * v_comm_norm;
        let fidelity_term = h_s_norm * fid;
        let (_, helstrom_p_error) = optimal_pointer(&rho0, &rho1)?;
        let spread = (helstrom_p_error - helstrom_p_error.powi(2)).max(0.0);
        Ok(BoundReport {
            lhs,
            fidelity: fid,
            fidelity_term,
            drive_term,
            slack: fidelity_term + drive_term - lhs,
            helstrom_p_error,
            corollary1_rhs: 2.0 * h_s_norm * spread.sqrt() + drive_term,
            corollary2_lhs: self.tau * v_comm_norm,
            corollary2_rhs: self.hbar * lhs,
        })
    }

    /// Drift of the Heisenberg-picture system energy against its guaranteed
    /// ceiling: `actual = ‖H_S⊗1 - U†(H_S⊗1)U‖` never exceeds
    /// `bound = (τ/ħ)‖[H_S⊗1, V]‖`.
    pub fn heisenberg_drift_check(&self) -> Result<DriftCheck> {
        let h_s_ext = self.h_s.kron(&HermitianOperator::identity(self.dim_a()));
        let u = unitary_exp(&self.total_hamiltonian(), -self.tau / self.hbar)?;
        let conjugated = &(&u.adjoint() * h_s_ext.matrix()) * &u;
        let actual = operator_norm(&(h_s_ext.matrix() - &conjugated));
        let bound = self.tau / self.hbar
            * operator_norm(&commutator(h_s_ext.matrix(), self.v.matrix())?);
        Ok(DriftCheck { actual, bound })
    }

    /// The four effects `Y_nj = W† (|ε_n><ε_n| ⊗ M_j) W` of the composite
    /// energy/pointer observable induced on the system by the isometry
    /// `W|ψ> = U(τ)(|ψ> ⊗ |Ω>)`, with `|ε_n>` the eigenstates of `H_S`
    /// (ascending) and `{M_0, M_1}` the pointer PVM.
    ///
    /// Rejects a degenerate `H_S` (its spectral projectors would be
    /// ill-defined) and pointers that are not two-element PVMs on the
    /// apparatus.
    pub fn joint_povm(&self, pointer: &Pvm) -> Result<JointPovm> {
        if pointer.len() != 2 {
            return Err(Error::InvalidPvm {
                reason: format!(
                    "pointer must have exactly 2 elements, got {}",
                    pointer.len()
                ),
            });
        }
        if pointer.dim() != self.dim_a() {
            return Err(Error::DimensionMismatch {
                what: "pointer PVM",
                expected: self.dim_a(),
                actual: pointer.dim(),
            });
        }
        let eig = hermitian_eig(&self.h_s)?;
        let gap = eig.eigenvalues[1] - eig.eigenvalues[0];
        if gap.abs() <= tol::DEGENERACY {
            return Err(Error::DegenerateSystemHamiltonian { gap });
        }
        let energy_states: Vec<StateVector> = (0..2)
            .map(|n| {
                StateVector::trusted(nalgebra::DVector::from_fn(2, |r, _| {
                    eig.eigenvectors.get(r, n)
                }))
            })
            .collect();
        let energy_projectors: Vec<HermitianOperator> =
            energy_states.iter().map(StateVector::projector).collect();

        // W as a (2 dim_a) x 2 matrix: column s is U(|s> ⊗ |Ω>).
        let u = unitary_exp(&self.total_hamiltonian(), -self.tau / self.hbar)?;
        let mut embed = nalgebra::DMatrix::<C64>::zeros(self.total_dim(), 2);
        for s in 0..2 {
            for a in 0..self.dim_a() {
                embed[(s * self.dim_a() + a, s)] = self.omega.get(a);
            }
        }
        let w = u.as_dmatrix() * embed;

        let mut effects: Vec<Vec<HermitianOperator>> = Vec::with_capacity(2);
        for proj_n in &energy_projectors {
            let mut row = Vec::with_capacity(2);
            for m_j in pointer.projectors() {
                let target = proj_n.kron(m_j);
                let y = w.adjoint() * target.matrix().as_dmatrix() * &w;
                // Conjugation keeps hermiticity up to rounding; symmetrize
                // so the stored effect is exactly Hermitian.
                let y = (&y + y.adjoint()).scale(0.5);
                row.push(HermitianOperator::trusted(ComplexMatrix::trusted(y)));
            }
            effects.push(row);
        }

        let mut energy_marginal_defects = [0.0; 2];
        for n in 0..2 {
            let marginal = &effects[n][0] + &effects[n][1];
            energy_marginal_defects[n] =
                operator_norm(&(marginal.matrix() - energy_projectors[n].matrix()));
        }
        let mut q_marginal_defects = [0.0; 2];
        for j in 0..2 {
            let marginal = &effects[0][j] + &effects[1][j];
            let q_proj = if j == 0 {
                self.q0.projector()
            } else {
                self.q1.projector()
            };
            q_marginal_defects[j] = operator_norm(&(marginal.matrix() - q_proj.matrix()));
        }
        let total = &(&effects[0][0] + &effects[0][1]) + &(&effects[1][0] + &effects[1][1]);
        let completeness_defect =
            operator_norm(&(total.matrix() - HermitianOperator::identity(2).matrix()));
        let min_eigenvalue = effects
            .iter()
            .flatten()
            .map(|y| {
                y.matrix()
                    .as_dmatrix()
                    .clone()
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(f64::INFINITY, f64::min);

        let mut effects = effects.into_iter();
        let mut row0 = effects.next().unwrap().into_iter();
        let mut row1 = effects.next().unwrap().into_iter();
        Ok(JointPovm {
            effects: [
                [row0.next().unwrap(), row0.next().unwrap()],
                [row1.next().unwrap(), row1.next().unwrap()],
            ],
            energy_eigenvalues: [eig.eigenvalues[0], eig.eigenvalues[1]],
            energy_marginal_defects,
            q_marginal_defects,
            completeness_defect,
            min_eigenvalue,
        })
    }

    /// The off-diagonal coupling correlation
    /// `C(t) = <q0, Ω| U(t)† [H_S⊗1, V] U(t) |q1, Ω>` sampled on an
    /// ascending nonnegative time grid, plus `(1/ħ) ∫ |C(t)| dt` by the
    /// trapezoidal rule on that grid.
    pub fn correlation_function(&self, times: &[f64]) -> Result<CorrelationTrace> {
        for &t in times {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "times",
                    reason: format!("times must be finite and nonnegative, got {t}"),
                });
            }
        }
        if times.windows(2).any(|pair| pair[1] < pair[0]) {
            return Err(Error::InvalidParameter {
                name: "times",
                reason: "time grid must be nondecreasing".into(),
            });
        }
        let h_s_ext = self.h_s.kron(&HermitianOperator::identity(self.dim_a()));
        let coupling = commutator(h_s_ext.matrix(), self.v.matrix())?;
        let eig = hermitian_eig(&self.total_hamiltonian())?;
        let b0 = self.initial_branch(0);
        let b1 = self.initial_branch(1);
        let mut values = Vec::with_capacity(times.len());
        for &t in times {
            let scale = -t / self.hbar;
            let left = eig.apply_with(|l| C64::from_polar(1.0, scale * l), b0.amplitudes());
            let right = eig.apply_with(|l| C64::from_polar(1.0, scale * l), b1.amplitudes());
            let k_right = coupling.as_dmatrix() * right;
            values.push(left.dotc(&k_right));
        }
        let mut integral = 0.0;
        for (pair_t, pair_v) in times.windows(2).zip(values.windows(2)) {
            integral += 0.5 * (pair_v[0].norm() + pair_v[1].norm()) * (pair_t[1] - pair_t[0]);
        }
        Ok(CorrelationTrace {
            times: times.to_vec(),
            values,
            abs_integral_over_hbar: integral / self.hbar,
        })
    }
}

/// Finite projection-valued measure: mutually orthogonal projectors summing
/// to the identity, all checked against [`tol::PROJECTOR`] in max-entry norm.
#[derive(Debug, Clone)]
pub struct Pvm {
    projectors: Vec<HermitianOperator>,
}

impl Pvm {
    pub fn new(projectors: Vec<HermitianOperator>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidPvm {
                reason: "a PVM needs at least one element".into(),
            });
        }
        let dim = projectors[0].dim();
        for (k, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::InvalidPvm {
                    reason: format!("element {k} has dimension {}, expected {dim}", p.dim()),
                });
            }
            let sq = p.matrix() * p.matrix();
            let defect = sq.max_abs_diff(p.matrix());
            if defect > tol::PROJECTOR {
                return Err(Error::NotProjector {
                    what: "PVM element",
                    defect,
                });
            }
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let cross = (projectors[i].matrix() * projectors[j].matrix()).max_abs_entry();
                if cross > tol::PROJECTOR {
                    return Err(Error::InvalidPvm {
                        reason: format!(
                            "elements {i} and {j} are not orthogonal: max |P_i P_j| entry is {cross:.3e}"
                        ),
                    });
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for p in &projectors {
            sum = &sum + p.matrix();
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if completeness > tol::PROJECTOR {
            return Err(Error::InvalidPvm {
                reason: format!(
                    "elements do not sum to identity: max defect entry is {completeness:.3e}"
                ),
            });
        }
        Ok(Self { projectors })
    }

    /// The two-outcome PVM `{1 - Z, Z}` of a single projector. Element 1 is
    /// `Z` itself, matching the pointer-outcome convention.
    pub fn from_pointer(z: &HermitianOperator) -> Result<Self> {
        let complement = &HermitianOperator::identity(z.dim()) - z;
        Self::new(vec![complement, z.clone()])
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projectors(&self) -> &[HermitianOperator] {
        &self.projectors
    }
}

/// Conditional outcome probabilities of a two-outcome pointer and the
/// equal-prior misidentification probability
/// `p_error = (p(1|0) + p(0|1)) / 2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PointerOutcome {
    pub p_1_given_0: f64,
    pub p_0_given_0: f64,
    pub p_1_given_1: f64,
    pub p_0_given_1: f64,
    pub p_error: f64,
}

/// Pointer statistics against a pair of already computed apparatus states.
pub fn pointer_statistics_for(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    z: &HermitianOperator,
) -> Result<PointerOutcome> {
    if z.dim() != rho0.dim() || rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            what: "pointer projector",
            expected: rho0.dim(),
            actual: z.dim(),
        });
    }
    let sq = z.matrix() * z.matrix();
    let defect = sq.max_abs_diff(z.matrix());
    if defect > tol::PROJECTOR {
        return Err(Error::NotProjector {
            what: "pointer observable",
            defect,
        });
    }
    let complement = &HermitianOperator::identity(z.dim()) - z;
    let p_1_given_0 = z.expectation(rho0).clamp(0.0, 1.0);
    let p_0_given_0 = complement.expectation(rho0).clamp(0.0, 1.0);
    let p_1_given_1 = z.expectation(rho1).clamp(0.0, 1.0);
    let p_0_given_1 = complement.expectation(rho1).clamp(0.0, 1.0);
    Ok(PointerOutcome {
        p_1_given_0,
        p_0_given_0,
        p_1_given_1,
        p_0_given_1,
        p_error: 0.5 * (p_1_given_0 + p_0_given_1),
    })
}

/// Minimum-error discrimination of the two conditional apparatus states:
/// the optimal pointer is the projector onto the positive part of
/// `ρ1 - ρ0`, and the achieved error is `(1 - tr|ρ1 - ρ0| / 2) / 2`.
pub fn optimal_pointer(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<(HermitianOperator, f64)> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            what: "discrimination operand",
            expected: rho0.dim(),
            actual: rho1.dim(),
        });
    }
    let delta = rho1.operator() - rho0.operator();
    let eig = hermitian_eig(&delta)?;
    let z = eig.reconstruct_with(|l| if l > 0.0 { C64::ONE } else { C64::ZERO });
    let trace_norm: f64 = eig.eigenvalues.iter().map(|l| l.abs()).sum();
    let p_error = (0.5 * (1.0 - 0.5 * trace_norm)).clamp(0.0, 0.5);
    Ok((HermitianOperator::trusted(z), p_error))
}

/// Every term of the trade-off certificate for one process.
///
/// `slack = fidelity_term + drive_term - lhs` is the certified inequality;
/// the corollary fields restate it through the discrimination error
/// (`corollary1_rhs` is evaluated at the Helstrom-optimal pointer, the
/// tightest of the "any pointer" family) and through the error-free
/// necessary condition (`corollary2_lhs ≥ corollary2_rhs` whenever the
/// process admits an error-free readout).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub fidelity: f64,
    pub fidelity_term: f64,
    pub drive_term: f64,
    pub slack: f64,
    pub helstrom_p_error: f64,
    pub corollary1_rhs: f64,
    pub corollary2_lhs: f64,
    pub corollary2_rhs: f64,
}

/// Heisenberg drift of the extended system energy and its ceiling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriftCheck {
    pub actual: f64,
    pub bound: f64,
}

/// The induced composite observable on the system; `effects[n][j]` is the
/// effect for "energy outcome ε_n and pointer outcome j".
#[derive(Debug, Clone)]
pub struct JointPovm {
    pub effects: [[HermitianOperator; 2]; 2],
    /// Ascending eigenvalues of `H_S` defining the energy outcomes.
    pub energy_eigenvalues: [f64; 2],
    /// `‖Y_n0 + Y_n1 - |ε_n><ε_n|‖` for n = 0, 1.
    pub energy_marginal_defects: [f64; 2],
    /// `‖Y_0j + Y_1j - |q_j><q_j|‖` for j = 0, 1.
    pub q_marginal_defects: [f64; 2],
    /// `‖Σ_nj Y_nj - 1‖`.
    pub completeness_defect: f64,
    /// Smallest eigenvalue over all four effects; ≥ -1e-9 certifies
    /// positivity.
    pub min_eigenvalue: f64,
}

/// Sampled coupling correlation and its accumulated magnitude.
#[derive(Debug, Clone)]
pub struct CorrelationTrace {
    pub times: Vec<f64>,
    pub values: Vec<C64>,
    /// `(1/ħ) ∫ |C(t)| dt` over the grid, trapezoidal.
    pub abs_integral_over_hbar: f64,
}

/// Checks the exact identity `‖[Q, H_S]‖ = |<q0|H_S|q1>|` on a two-level
/// system, returning both sides.
pub fn commutator_identity_check(
    h_s: &HermitianOperator,
    q0: &StateVector,
    q1: &StateVector,
) -> Result<(f64, f64)> {
    if h_s.dim() != 2 || q0.dim() != 2 || q1.dim() != 2 {
        return Err(Error::DimensionMismatch {
            what: "commutator identity operand",
            expected: 2,
            actual: h_s.dim().max(q0.dim()).max(q1.dim()),
        });
    }
    let overlap = q0.inner(q1).norm();
    if overlap > tol::ORTHOGONALITY {
        return Err(Error::NotOrthogonal {
            what: "measured basis vectors",
            overlap,
        });
    }
    let q = q1.projector();
    let norm_commutator = operator_norm(&commutator(q.matrix(), h_s.matrix())?);
    let abs_matrix_element = h_s.matrix_element(q0, q1).norm();
    Ok((norm_commutator, abs_matrix_element))
}

/// The smallest discrimination error compatible with a given fidelity:
/// `(1 - sqrt(1 - F²)) / 2`. Inverting the fidelity/error relation turns an
/// F lower bound into a floor on every pointer's error probability.
pub fn min_p_error_for_fidelity(f: f64) -> f64 {
    let f = f.clamp(0.0, 1.0);
    0.5 * (1.0 - (1.0 - f * f).max(0.0).sqrt())
}
