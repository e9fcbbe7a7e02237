//! Brute-force verifiers for the two fidelity characterizations.
//!
//! The closed-form fidelity in [`crate::linalg`] is cross-checked two ways:
//!
//! * as a minimum over projective measurements of the classical Bhattacharyya
//!   overlap of outcome distributions, scanned exhaustively over a Bloch
//!   half-sphere grid (qubit states only), and
//! * against the discrimination error of randomly sampled pointer
//!   projectors, which can never beat the fidelity floor
//!   `F ≤ 2 sqrt(P_err - P_err²)`.
//!
//! These are deliberately slow, independent recomputations: they share no
//! code path with `fidelity` beyond basic matrix arithmetic.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{c64, DensityMatrix, StateVector, C64};
use crate::process::{pointer_statistics_for, MeasurementProcess, Pvm};
use crate::random::haar_projector;

/// Exhaustive grid of two-element rank-1 PVMs on a qubit, indexed by Bloch
/// direction.
///
/// The polar angle takes `resolution + 1` values `θ_i = iπ/resolution` and
/// the azimuth `resolution` values `φ_j = jπ/resolution`. The azimuth stops
/// at π because a PVM is an unordered pair: antipodal directions give the
/// same two projectors, so the half-sphere already covers every measurement
/// axis. Doubling the resolution produces a superset of the angles, which
/// makes refinement monotone.
///
/// Restricting to two-element rank-1 PVMs loses nothing on a qubit: any
/// finer PVM is a relabeling, and coarse-graining outcomes can only increase
/// the Bhattacharyya overlap (Cauchy-Schwarz on the merged outcomes), so the
/// minimum is attained on this family.
pub struct PvmGrid {
    resolution: usize,
    pvms: Vec<Pvm>,
}

impl PvmGrid {
    /// Builds the grid. Resolutions below 8 are rejected: the grid-error
    /// guarantees quoted by the oracle assume at least that density.
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 8 {
            return Err(Error::InvalidParameter {
                name: "resolution",
                reason: format!("must be at least 8, got {resolution}"),
            });
        }
        let step = std::f64::consts::PI / resolution as f64;
        let mut pvms = Vec::with_capacity((resolution + 1) * resolution);
        for i in 0..=resolution {
            let theta = i as f64 * step;
            for j in 0..resolution {
                let phi = j as f64 * step;
                let up = StateVector::from_slice(&[
                    c64((theta / 2.0).cos(), 0.0),
                    C64::from_polar((theta / 2.0).sin(), phi),
                ])
                .expect("Bloch direction vectors are unit norm");
                let proj = up.projector();
                pvms.push(
                    Pvm::from_pointer(&proj)
                        .expect("rank-1 projector and complement form a valid PVM"),
                );
            }
        }
        Ok(Self { resolution, pvms })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn pvms(&self) -> &[Pvm] {
        &self.pvms
    }
}

/// Bhattacharyya overlap `Σ_i sqrt(tr ρE_i) sqrt(tr σE_i)` of the outcome
/// distributions of one PVM. Never smaller than the closed-form fidelity.
pub fn measured_overlap(rho: &DensityMatrix, sigma: &DensityMatrix, pvm: &Pvm) -> Result<f64> {
    if rho.dim() != sigma.dim() || pvm.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            what: "measured overlap operands",
            expected: rho.dim(),
            actual: pvm.dim().max(sigma.dim()),
        });
    }
    Ok(bhattacharyya(rho, sigma, pvm))
}

fn bhattacharyya(rho: &DensityMatrix, sigma: &DensityMatrix, pvm: &Pvm) -> f64 {
    pvm.projectors()
        .iter()
        .map(|e| {
            let p = e.expectation(rho).max(0.0);
            let q = e.expectation(sigma).max(0.0);
            (p * q).sqrt()
        })
        .sum()
}

/// Minimizes the measured overlap over the whole grid. The result can never
/// undercut the closed-form fidelity and converges to it from above as the
/// resolution grows.
///
/// Grid candidates are evaluated in parallel; ties are broken toward the
/// lowest grid index, so the argmin is deterministic under any scheduling.
pub fn fidelity_by_pvm_minimization(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    grid: &PvmGrid,
) -> Result<(f64, Pvm)> {
    if rho.dim() != 2 || sigma.dim() != 2 {
        return Err(Error::DimensionMismatch {
            what: "PVM minimization oracle state",
            expected: 2,
            actual: rho.dim().max(sigma.dim()),
        });
    }
    let (best_index, best_value) = grid
        .pvms
        .par_iter()
        .enumerate()
        .map(|(k, pvm)| (k, bhattacharyya(rho, sigma, pvm)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("grid is nonempty");
    Ok((best_value, grid.pvms[best_index].clone()))
}

/// Samples random apparatus pointers and returns the worst observed margin
/// `2 sqrt(P_err - P_err²) - F` over the samples. A correct implementation
/// keeps this nonnegative up to eigensolver rounding for every process.
///
/// Projector ranks cycle through `0..=dim_a` so every subspace dimension is
/// exercised, with a Haar-random subspace drawn for each sample.
pub fn lemma2_bound_check(
    process: &MeasurementProcess,
    z_samples: usize,
    seed: u64,
) -> Result<f64> {
    if z_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "z_samples",
            reason: "at least one pointer sample is required".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim_a = process.dim_a();
    let (rho0, rho1) = process.apparatus_states()?;
    let fid = crate::linalg::fidelity(&rho0, &rho1)?;
    let mut worst = f64::INFINITY;
    for k in 0..z_samples {
        let rank = k % (dim_a + 1);
        let z = haar_projector(&mut rng, dim_a, rank);
        let outcome = pointer_statistics_for(&rho0, &rho1, &z)?;
        let spread = (outcome.p_error - outcome.p_error.powi(2)).max(0.0);
        let margin = 2.0 * spread.sqrt() - fid;
        worst = worst.min(margin);
    }
    Ok(worst)
}
