//! Parameter sweeps: a JSON spec names a model, one swept axis, and fixed
//! parameters; the output is one CSV row per (grid point, sample). Rows are
//! evaluated in parallel but aggregated in input order, and floats print in
//! shortest round-trip form, so identical specs yield identical bytes.

use qmlab_core::linalg::{c64, pauli_x, HermitianOperator, C64};
use qmlab_core::models::{
    modified_two_level_model, standard_model, two_level_apparatus_model, GaussianPacket,
    LatticeApparatus,
};
use qmlab_core::process::MeasurementProcess;
use qmlab_core::random::{gue_hermitian, haar_basis_pair, haar_state, random_process};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;
use std::fmt::Write as _;

/// Columns emitted for every row, in order.
pub const CSV_HEADER: &str =
    "parameter,value,sample,fidelity,helstrom_p_error,lhs,fidelity_term,drive_term,slack,corr_integral";

/// Number of time points for the correlation-integral column: a fixed
/// trapezoid grid on [0, tau] so the column is comparable across rows.
const CORRELATION_POINTS: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Error-free two-level apparatus; sweeps `lambda`.
    TwoLevel,
    /// Two-level apparatus with a retained system Hamiltonian; sweeps
    /// `lambda` with `h_s` fixed (default: Pauli X).
    ModifiedTwoLevel,
    /// Lattice momentum kick; sweeps `tau` or `width`.
    Standard,
    /// Random system and apparatus Hamiltonians with zero coupling; sweeps
    /// `tau`. The fidelity column is identically 1.
    Uncoupled,
    /// Fully random scenarios; sweeps `tau`, `v_norm`, or `dim_a`.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Lambda,
    Tau,
    Width,
    VNorm,
    DimA,
}

impl Parameter {
    fn name(self) -> &'static str {
        match self {
            Parameter::Lambda => "lambda",
            Parameter::Tau => "tau",
            Parameter::Width => "width",
            Parameter::VNorm => "v_norm",
            Parameter::DimA => "dim_a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

fn default_samples() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: ModelKind,
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples_per_point: usize,
    /// System Hamiltonian for `modified_two_level`, row-major `[re, im]`
    /// pairs. Defaults to Pauli X.
    #[serde(default)]
    pub h_s: Option<Vec<Vec<[f64; 2]>>>,
    /// Apparatus dimension for `uncoupled` (default 2) and `random`
    /// (default 4).
    #[serde(default)]
    pub dim_a: Option<usize>,
    /// Fixed duration where it is not the swept axis (`standard` width
    /// sweeps default 3, `random` non-tau sweeps default 1).
    #[serde(default)]
    pub tau: Option<f64>,
    /// Lattice sites for `standard` (default 64).
    #[serde(default)]
    pub n_sites: Option<usize>,
    /// Lattice length for `standard` (default 32).
    #[serde(default)]
    pub length: Option<f64>,
    /// Packet width for `standard` tau sweeps (default 1).
    #[serde(default)]
    pub width: Option<f64>,
}

pub fn parse_spec(text: &str) -> Result<SweepSpec, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: SweepSpec = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| format!("sweep spec at {}: {}", e.path(), e.inner()))?;
    if spec.steps < 1 {
        return Err("sweep spec: steps must be at least 1".into());
    }
    if spec.samples_per_point < 1 {
        return Err("sweep spec: samples_per_point must be at least 1".into());
    }
    if !spec.start.is_finite() || !spec.stop.is_finite() {
        return Err("sweep spec: range endpoints must be finite".into());
    }
    if spec.scale == Scale::Log && (spec.start <= 0.0 || spec.stop <= 0.0) {
        return Err("sweep spec: log scale needs positive endpoints".into());
    }
    let allowed: &[Parameter] = match spec.model {
        ModelKind::TwoLevel | ModelKind::ModifiedTwoLevel => &[Parameter::Lambda],
        ModelKind::Standard => &[Parameter::Tau, Parameter::Width],
        ModelKind::Uncoupled => &[Parameter::Tau],
        ModelKind::Random => &[Parameter::Tau, Parameter::VNorm, Parameter::DimA],
    };
    if !allowed.contains(&spec.parameter) {
        return Err(format!(
            "sweep spec: parameter {} is not sweepable for this model",
            spec.parameter.name()
        ));
    }
    Ok(spec)
}

fn axis_values(spec: &SweepSpec) -> Vec<f64> {
    if spec.steps == 1 {
        return vec![spec.start];
    }
    let n = (spec.steps - 1) as f64;
    (0..spec.steps)
        .map(|k| {
            let t = k as f64 / n;
            match spec.scale {
                Scale::Linear => spec.start + t * (spec.stop - spec.start),
                Scale::Log => spec.start * (spec.stop / spec.start).powf(t),
            }
        })
        .collect()
}

fn h_s_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<HermitianOperator, String> {
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err("sweep spec: h_s must be a 2x2 matrix".into());
    }
    let entries: Vec<C64> = rows
        .iter()
        .flat_map(|r| r.iter().map(|&[re, im]| c64(re, im)))
        .collect();
    qmlab_core::linalg::ComplexMatrix::from_row_slice(2, 2, &entries)
        .and_then(HermitianOperator::new)
        .map_err(|e| format!("sweep spec: h_s: {e}"))
}

/// Rebuilds a drawn scenario with one field replaced; the draw itself stays
/// on the serial RNG stream so the sweep is deterministic.
fn with_tau(p: MeasurementProcess, tau: f64) -> Result<MeasurementProcess, String> {
    MeasurementProcess::new(
        p.h_s().clone(),
        p.h_a().clone(),
        p.v().clone(),
        p.q0().clone(),
        p.q1().clone(),
        p.omega().clone(),
        tau,
        p.hbar(),
    )
    .map_err(|e| e.to_string())
}

fn build_scenarios(spec: &SweepSpec) -> Result<Vec<(f64, usize, MeasurementProcess)>, String> {
    let values = axis_values(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(values.len() * spec.samples_per_point);

    // Fixed structures shared across grid points.
    let h_s_fixed = match &spec.h_s {
        Some(rows) => Some(h_s_from_rows(rows)?),
        None => None,
    };
    let lattice = if spec.model == ModelKind::Standard {
        Some(
            LatticeApparatus::new(spec.n_sites.unwrap_or(64), spec.length.unwrap_or(32.0))
                .map_err(|e| format!("sweep spec: lattice: {e}"))?,
        )
    } else {
        None
    };

    for &value in &values {
        for sample in 0..spec.samples_per_point {
            let process = match (spec.model, spec.parameter) {
                (ModelKind::TwoLevel, Parameter::Lambda) => {
                    two_level_apparatus_model(value).map_err(|e| e.to_string())?
                }
                (ModelKind::ModifiedTwoLevel, Parameter::Lambda) => {
                    let h_s = h_s_fixed.clone().unwrap_or_else(pauli_x);
                    modified_two_level_model(value, h_s).map_err(|e| e.to_string())?
                }
                (ModelKind::Standard, Parameter::Tau) => {
                    let lattice = lattice.as_ref().unwrap();
                    let packet =
                        GaussianPacket::new(lattice, 0.0, spec.width.unwrap_or(1.0))
                            .map_err(|e| e.to_string())?;
                    standard_model(lattice, &packet, value).map_err(|e| e.to_string())?
                }
                (ModelKind::Standard, Parameter::Width) => {
                    let lattice = lattice.as_ref().unwrap();
                    let packet = GaussianPacket::new(lattice, 0.0, value)
                        .map_err(|e| e.to_string())?;
                    standard_model(lattice, &packet, spec.tau.unwrap_or(3.0))
                        .map_err(|e| e.to_string())?
                }
                (ModelKind::Uncoupled, Parameter::Tau) => {
                    let dim_a = spec.dim_a.unwrap_or(2);
                    let h_s = gue_hermitian(&mut rng, 2);
                    let h_a = gue_hermitian(&mut rng, dim_a);
                    let (q0, q1) = haar_basis_pair(&mut rng);
                    let omega = haar_state(&mut rng, dim_a);
                    MeasurementProcess::new(
                        h_s,
                        h_a,
                        HermitianOperator::zeros(2 * dim_a),
                        q0,
                        q1,
                        omega,
                        value,
                        1.0,
                    )
                    .map_err(|e| e.to_string())?
                }
                (ModelKind::Random, Parameter::Tau) => {
                    let dim_a = spec.dim_a.unwrap_or(4);
                    with_tau(random_process(&mut rng, dim_a, 0.0), value)?
                }
                (ModelKind::Random, Parameter::VNorm) => {
                    let dim_a = spec.dim_a.unwrap_or(4);
                    let p = random_process(&mut rng, dim_a, 0.0);
                    let current = qmlab_core::linalg::operator_norm(p.v().matrix());
                    let v = if current > 0.0 {
                        p.v().scaled(value / current)
                    } else {
                        p.v().clone()
                    };
                    MeasurementProcess::new(
                        p.h_s().clone(),
                        p.h_a().clone(),
                        v,
                        p.q0().clone(),
                        p.q1().clone(),
                        p.omega().clone(),
                        spec.tau.unwrap_or(1.0),
                        1.0,
                    )
                    .map_err(|e| e.to_string())?
                }
                (ModelKind::Random, Parameter::DimA) => {
                    let dim_a = value.round() as isize;
                    if dim_a < 1 {
                        return Err(format!(
                            "sweep spec: dim_a axis value {value} rounds below 1"
                        ));
                    }
                    with_tau(
                        random_process(&mut rng, dim_a as usize, 0.0),
                        spec.tau.unwrap_or(1.0),
                    )?
                }
                _ => unreachable!("parameter validated against model"),
            };
            out.push((value, sample, process));
        }
    }
    Ok(out)
}

struct Row {
    value: f64,
    sample: usize,
    fidelity: f64,
    helstrom_p_error: f64,
    lhs: f64,
    fidelity_term: f64,
    drive_term: f64,
    slack: f64,
    corr_integral: f64,
}

fn evaluate(process: &MeasurementProcess, value: f64, sample: usize) -> Result<Row, String> {
    let report = process.bound_report().map_err(|e| e.to_string())?;
    let tau = process.tau();
    let times: Vec<f64> = if tau > 0.0 {
        (0..CORRELATION_POINTS)
            .map(|i| tau * i as f64 / (CORRELATION_POINTS - 1) as f64)
            .collect()
    } else {
        vec![0.0]
    };
    let corr = process
        .correlation_function(&times)
        .map_err(|e| e.to_string())?;
    Ok(Row {
        value,
        sample,
        fidelity: report.fidelity,
        helstrom_p_error: report.helstrom_p_error,
        lhs: report.lhs,
        fidelity_term: report.fidelity_term,
        drive_term: report.drive_term,
        slack: report.slack,
        corr_integral: corr.abs_integral_over_hbar,
    })
}

/// Runs the sweep and renders the full CSV, header included.
pub fn run_sweep(spec: &SweepSpec) -> Result<String, String> {
    let scenarios = build_scenarios(spec)?;
    let rows: Result<Vec<Row>, String> = scenarios
        .par_iter()
        .map(|(value, sample, process)| evaluate(process, *value, *sample))
        .collect();
    let rows = rows?;

    let name = spec.parameter.name();
    let mut csv = String::with_capacity(rows.len() * 96 + CSV_HEADER.len() + 1);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        writeln!(
            csv,
            "{name},{},{},{},{},{},{},{},{},{}",
            r.value,
            r.sample,
            r.fidelity,
            r.helstrom_p_error,
            r.lhs,
            r.fidelity_term,
            r.drive_term,
            r.slack,
            r.corr_integral
        )
        .expect("writing to a String cannot fail");
    }
    Ok(csv)
}
