//! JSON interchange for measurement scenarios.
//!
//! The schema is a single object:
//!
//! ```json
//! {
//!   "dim_a": 2,
//!   "h_s": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
//!   "h_a": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
//!   "v":   [[ ... 4x4 ... ]],
//!   "q_basis": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
//!   "omega": [[0.70710678118654752, 0.0], [0.70710678118654752, 0.0]],
//!   "tau": 1.5707963267948966,
//!   "hbar": 1.0
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs, matrices nested row-major arrays,
//! `q_basis` the pair `[q0, q1]`, and `hbar` defaults to 1 when absent.
//! Serialization uses shortest round-trip float formatting (17 significant
//! digits when needed), so parse → serialize → parse is bit-lossless.
//!
//! Structural errors carry the JSON path of the offending field; semantic
//! errors (norms, hermiticity, orthogonality) carry the field name and the
//! measured value.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, HermitianOperator, StateVector, C64};
use crate::process::MeasurementProcess;

type ComplexPair = [f64; 2];

fn one() -> f64 {
    1.0
}

/// The on-disk shape of one scenario. Conversion to [`MeasurementProcess`]
/// performs all physical validation; this struct is pure structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub dim_a: usize,
    pub h_s: Vec<Vec<ComplexPair>>,
    pub h_a: Vec<Vec<ComplexPair>>,
    pub v: Vec<Vec<ComplexPair>>,
    pub q_basis: [Vec<ComplexPair>; 2],
    pub omega: Vec<ComplexPair>,
    pub tau: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn rows_to_matrix(rows: &[Vec<ComplexPair>], dim: usize, path: &str) -> Result<ComplexMatrix> {
    if rows.len() != dim {
        return Err(schema_err(
            path,
            format!("has {} rows, expected {dim}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(schema_err(
                path,
                format!("row {i} has {} entries, expected {dim}", row.len()),
            ));
        }
        entries.extend(row.iter().map(|&[re, im]| c64(re, im)));
    }
    ComplexMatrix::from_row_slice(dim, dim, &entries).map_err(|e| schema_err(path, e.to_string()))
}

fn pairs_to_state(pairs: &[ComplexPair], dim: usize, path: &str) -> Result<StateVector> {
    if pairs.len() != dim {
        return Err(schema_err(
            path,
            format!("has {} entries, expected {dim}", pairs.len()),
        ));
    }
    let amplitudes: Vec<C64> = pairs.iter().map(|&[re, im]| c64(re, im)).collect();
    StateVector::from_slice(&amplitudes).map_err(|e| schema_err(path, e.to_string()))
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

fn state_to_pairs(s: &StateVector) -> Vec<ComplexPair> {
    s.amplitudes().iter().map(|z| [z.re, z.im]).collect()
}

impl ScenarioFile {
    pub fn from_process(process: &MeasurementProcess) -> Self {
        Self {
            dim_a: process.dim_a(),
            h_s: matrix_to_rows(process.h_s().matrix()),
            h_a: matrix_to_rows(process.h_a().matrix()),
            v: matrix_to_rows(process.v().matrix()),
            q_basis: [state_to_pairs(process.q0()), state_to_pairs(process.q1())],
            omega: state_to_pairs(process.omega()),
            tau: process.tau(),
            hbar: process.hbar(),
        }
    }

    pub fn to_process(&self) -> Result<MeasurementProcess> {
        if self.dim_a == 0 {
            return Err(schema_err("dim_a", "must be at least 1"));
        }
        let hermitian = |rows: &[Vec<ComplexPair>], dim: usize, path: &str| {
            rows_to_matrix(rows, dim, path)
                .and_then(|m| HermitianOperator::new(m).map_err(|e| schema_err(path, e.to_string())))
        };
        let h_s = hermitian(&self.h_s, 2, "h_s")?;
        let h_a = hermitian(&self.h_a, self.dim_a, "h_a")?;
        let v = hermitian(&self.v, 2 * self.dim_a, "v")?;
        let q0 = pairs_to_state(&self.q_basis[0], 2, "q_basis[0]")?;
        let q1 = pairs_to_state(&self.q_basis[1], 2, "q_basis[1]")?;
        let omega = pairs_to_state(&self.omega, self.dim_a, "omega")?;
        MeasurementProcess::new(h_s, h_a, v, q0, q1, omega, self.tau, self.hbar)
    }
}

/// Parses one scenario from JSON text. Structural failures report the JSON
/// path; semantic failures name the field.
pub fn parse_scenario(text: &str) -> Result<MeasurementProcess> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile =
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    file.to_process()
}

pub fn read_scenario(path: impl AsRef<Path>) -> Result<MeasurementProcess> {
    parse_scenario(&fs::read_to_string(path)?)
}

/// Pretty-printed JSON for one scenario, with a trailing newline.
pub fn scenario_to_string(process: &MeasurementProcess) -> String {
    let mut text = serde_json::to_string_pretty(&ScenarioFile::from_process(process))
        .expect("scenario schema has no unserializable values");
    text.push('\n');
    text
}

pub fn write_scenario(path: impl AsRef<Path>, process: &MeasurementProcess) -> Result<()> {
    fs::write(path, scenario_to_string(process))?;
    Ok(())
}
