//! Norm-constrained protocol search: Nelder-Mead over a real parameterization
//! of (V, Omega, tau) with random restarts, minimizing the Helstrom error
//! probability for a fixed system Hamiltonian and measured basis.
//!
//! V is expanded in a Hermitian entry basis and rescaled onto the operator
//! norm budget, so every candidate satisfies the constraint exactly; tau is
//! mapped through tau_max * sin^2(t) so the duration cap is never crossed.

use nalgebra::DVector;
use qmlab_core::linalg::{
    c64, commutator, operator_norm, ComplexMatrix, HermitianOperator, StateVector, C64,
};
use qmlab_core::process::{
    min_p_error_for_fidelity, optimal_pointer, BoundReport, MeasurementProcess,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::simplex::{minimize, SimplexOptions};

fn default_dim_a() -> usize {
    2
}

fn default_restarts() -> usize {
    8
}

fn default_max_iters() -> usize {
    400
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizationSpec {
    #[serde(default = "default_dim_a")]
    pub dim_a: usize,
    /// System Hamiltonian, 2x2 row-major `[re, im]` pairs. Default: zero.
    #[serde(default)]
    pub h_s: Option<Vec<Vec<[f64; 2]>>>,
    /// Apparatus Hamiltonian, dim_a x dim_a. Default: zero.
    #[serde(default)]
    pub h_a: Option<Vec<Vec<[f64; 2]>>>,
    /// Measured basis pair `[q0, q1]`. Default: computational basis.
    #[serde(default)]
    pub q_basis: Option<[Vec<[f64; 2]>; 2]>,
    /// Operator-norm budget for the coupling; zero forces V = 0.
    pub v_max: f64,
    /// Duration cap; candidates use tau = tau_max * sin^2(t).
    pub tau_max: f64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Restrict the search to couplings of the form H_S (x) B + 1 (x) C,
    /// which commute with H_S (x) 1 by construction.
    #[serde(default)]
    pub commuting_only: bool,
}

#[derive(Debug, Serialize)]
pub struct OptimizationReport {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub commuting_only: bool,
    pub best_p_error: f64,
    pub tau: f64,
    pub v_norm: f64,
    pub bound_report: BoundReport,
    /// tau * |[V, H_S (x) 1]| / (hbar * |[Q, H_S]|); absent when the
    /// measured observable already commutes with the system Hamiltonian.
    pub corollary2_ratio: Option<f64>,
    /// Commuting-only search: the error probability no coupling in the
    /// family can beat, from the fidelity floor |[Q, H_S]| / |H_S|.
    pub commuting_error_floor: Option<f64>,
}

pub fn parse_spec(text: &str) -> Result<OptimizationSpec, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: OptimizationSpec = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| format!("optimization spec at {}: {}", e.path(), e.inner()))?;
    if spec.dim_a == 0 {
        return Err("optimization spec: dim_a must be at least 1".into());
    }
    if !(spec.v_max.is_finite() && spec.v_max >= 0.0) {
        return Err("optimization spec: v_max must be finite and nonnegative".into());
    }
    if !(spec.tau_max.is_finite() && spec.tau_max > 0.0) {
        return Err("optimization spec: tau_max must be finite and positive".into());
    }
    if spec.restarts == 0 {
        return Err("optimization spec: restarts must be at least 1".into());
    }
    Ok(spec)
}

struct Fixed {
    h_s: HermitianOperator,
    h_a: HermitianOperator,
    q0: StateVector,
    q1: StateVector,
    dim_a: usize,
    v_max: f64,
    tau_max: f64,
    commuting_only: bool,
}

fn matrix_from_rows(
    rows: &[Vec<[f64; 2]>],
    dim: usize,
    what: &str,
) -> Result<HermitianOperator, String> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(format!("optimization spec: {what} must be {dim}x{dim}"));
    }
    let entries: Vec<C64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|&[re, im]| c64(re, im)))
        .collect();
    ComplexMatrix::from_row_slice(dim, dim, &entries)
        .and_then(HermitianOperator::new)
        .map_err(|e| format!("optimization spec: {what}: {e}"))
}

fn state_from_pairs(pairs: &[[f64; 2]], dim: usize, what: &str) -> Result<StateVector, String> {
    if pairs.len() != dim {
        return Err(format!("optimization spec: {what} must have {dim} entries"));
    }
    let amplitudes: Vec<C64> = pairs.iter().map(|&[re, im]| c64(re, im)).collect();
    StateVector::from_slice(&amplitudes).map_err(|e| format!("optimization spec: {what}: {e}"))
}

fn fixed_from_spec(spec: &OptimizationSpec) -> Result<Fixed, String> {
    let h_s = match &spec.h_s {
        Some(rows) => matrix_from_rows(rows, 2, "h_s")?,
        None => HermitianOperator::zeros(2),
    };
    let h_a = match &spec.h_a {
        Some(rows) => matrix_from_rows(rows, spec.dim_a, "h_a")?,
        None => HermitianOperator::zeros(spec.dim_a),
    };
    let (q0, q1) = match &spec.q_basis {
        Some([a, b]) => (
            state_from_pairs(a, 2, "q_basis[0]")?,
            state_from_pairs(b, 2, "q_basis[1]")?,
        ),
        None => (StateVector::basis(2, 0), StateVector::basis(2, 1)),
    };
    Ok(Fixed {
        h_s,
        h_a,
        q0,
        q1,
        dim_a: spec.dim_a,
        v_max: spec.v_max,
        tau_max: spec.tau_max,
        commuting_only: spec.commuting_only,
    })
}

/// Number of real parameters for a dim x dim Hermitian matrix.
fn hermitian_params(dim: usize) -> usize {
    dim * dim
}

/// Dense Hermitian matrix from `dim^2` reals: diagonal first, then the
/// (re, im) pair of each strictly upper entry in row-major order.
fn hermitian_from_params(dim: usize, params: &[f64]) -> HermitianOperator {
    let mut mat = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    let mut k = 0;
    for i in 0..dim {
        mat[(i, i)] = c64(params[k], 0.0);
        k += 1;
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = c64(params[k], params[k + 1]);
            k += 2;
            mat[(i, j)] = z;
            mat[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(ComplexMatrix::new(mat).expect("finite parameters"))
        .expect("symmetric fill is exactly Hermitian")
}

/// Reads a Hermitian matrix back into the `hermitian_from_params` layout.
fn params_from_hermitian(op: &HermitianOperator) -> Vec<f64> {
    let dim = op.dim();
    let mut params = Vec::with_capacity(hermitian_params(dim));
    for i in 0..dim {
        params.push(op.matrix().get(i, i).re);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let z = op.matrix().get(i, j);
            params.push(z.re);
            params.push(z.im);
        }
    }
    params
}

fn parameter_count(fixed: &Fixed) -> usize {
    let coupling = if fixed.commuting_only {
        2 * hermitian_params(fixed.dim_a)
    } else {
        hermitian_params(2 * fixed.dim_a)
    };
    coupling + 2 * fixed.dim_a + 1
}

/// Decodes one candidate. Returns None when the Omega block is numerically
/// degenerate (all amplitudes near zero).
fn decode(fixed: &Fixed, params: &[f64]) -> Option<MeasurementProcess> {
    let dim_a = fixed.dim_a;
    let (v_raw, rest) = if fixed.commuting_only {
        let m = hermitian_params(dim_a);
        let b = hermitian_from_params(dim_a, &params[..m]);
        let c = hermitian_from_params(dim_a, &params[m..2 * m]);
        let v = &fixed.h_s.kron(&b) + &HermitianOperator::identity(2).kron(&c);
        (v, &params[2 * m..])
    } else {
        let m = hermitian_params(2 * dim_a);
        (hermitian_from_params(2 * dim_a, &params[..m]), &params[m..])
    };

    let norm = operator_norm(v_raw.matrix());
    let v = if norm > fixed.v_max {
        if fixed.v_max == 0.0 {
            HermitianOperator::zeros(2 * dim_a)
        } else {
            v_raw.scaled(fixed.v_max / norm)
        }
    } else {
        v_raw
    };

    let omega_amplitudes: Vec<C64> = (0..dim_a)
        .map(|i| c64(rest[2 * i], rest[2 * i + 1]))
        .collect();
    let omega = StateVector::normalized(DVector::from_column_slice(&omega_amplitudes)).ok()?;

    let t = rest[2 * dim_a];
    let tau = fixed.tau_max * t.sin().powi(2);

    MeasurementProcess::new(
        fixed.h_s.clone(),
        fixed.h_a.clone(),
        v,
        fixed.q0.clone(),
        fixed.q1.clone(),
        omega,
        tau,
        1.0,
    )
    .ok()
}

/// Helstrom error of one candidate; off-manifold candidates score 1, worse
/// than any reachable error probability.
fn objective(fixed: &Fixed, params: &[f64]) -> f64 {
    let Some(process) = decode(fixed, params) else {
        return 1.0;
    };
    let Ok((rho0, rho1)) = process.apparatus_states() else {
        return 1.0;
    };
    match optimal_pointer(&rho0, &rho1) {
        Ok((_, p_error)) => p_error,
        Err(_) => 1.0,
    }
}

/// The known error-free protocol embedded into the search space: couple the
/// measured projector to a two-level pointer rotation. Requires dim_a >= 2,
/// a positive budget, and the full (non-commuting) search space.
fn structured_start(fixed: &Fixed) -> Option<Vec<f64>> {
    if fixed.commuting_only || fixed.dim_a < 2 || fixed.v_max <= 0.0 {
        return None;
    }
    let lambda = fixed.v_max;
    let q = fixed.q1.projector();
    let complement = &HermitianOperator::identity(2) - &q;
    let pointer_1 = StateVector::basis(fixed.dim_a, 1).projector();
    let pointer_0 = StateVector::basis(fixed.dim_a, 0).projector();
    let v = (&q.kron(&pointer_1) + &complement.kron(&pointer_0)).scaled(lambda);
    let mut params = params_from_hermitian(&v);

    let mut omega = vec![0.0; 2 * fixed.dim_a];
    omega[0] = std::f64::consts::FRAC_1_SQRT_2;
    omega[2] = std::f64::consts::FRAC_1_SQRT_2;
    params.extend_from_slice(&omega);

    let tau = (std::f64::consts::FRAC_PI_2 / lambda).min(fixed.tau_max);
    params.push((tau / fixed.tau_max).sqrt().asin());
    Some(params)
}

pub fn run_optimization(
    spec: &OptimizationSpec,
    seed: u64,
) -> Result<(OptimizationReport, MeasurementProcess), String> {
    let fixed = fixed_from_spec(spec)?;
    let count = parameter_count(&fixed);

    // Starting points are drawn serially so the run is seed-deterministic;
    // the restarts themselves are independent and evaluated in parallel.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = Vec::with_capacity(spec.restarts);
    if let Some(start) = structured_start(&fixed) {
        starts.push(start);
    }
    while starts.len() < spec.restarts {
        let start: Vec<f64> = (0..count)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect();
        starts.push(start);
    }

    let options = SimplexOptions {
        max_iters: spec.max_iters,
        initial_step: 0.3,
        value_tolerance: 1e-14,
    };
    let results: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|start| minimize(|p| objective(&fixed, p), start, &options))
        .collect();
    let (best_params, best_value) = results
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .expect("restarts >= 1");

    let process = decode(&fixed, &best_params)
        .ok_or_else(|| "optimizer converged to a degenerate candidate".to_string())?;
    let bound_report = process.bound_report().map_err(|e| e.to_string())?;

    let corollary2_ratio = if bound_report.corollary2_rhs > 1e-15 {
        Some(bound_report.corollary2_lhs / bound_report.corollary2_rhs)
    } else {
        None
    };
    let commuting_error_floor = if fixed.commuting_only {
        let h_s_norm = operator_norm(fixed.h_s.matrix());
        if h_s_norm > 0.0 {
            let lhs = operator_norm(
                &commutator(fixed.q1.projector().matrix(), fixed.h_s.matrix())
                    .map_err(|e| e.to_string())?,
            );
            Some(min_p_error_for_fidelity((lhs / h_s_norm).min(1.0)))
        } else {
            None
        }
    } else {
        None
    };

    let report = OptimizationReport {
        seed,
        restarts: spec.restarts,
        max_iters: spec.max_iters,
        commuting_only: spec.commuting_only,
        best_p_error: best_value,
        tau: process.tau(),
        v_norm: operator_norm(process.v().matrix()),
        bound_report,
        corollary2_ratio,
        commuting_error_floor,
    };
    Ok((report, process))
}
