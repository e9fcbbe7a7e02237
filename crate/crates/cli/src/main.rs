//! Command-line explorer for two-level measurement trade-off scenarios.
//!
//! Subcommands: `verify` a scenario file against every certified inequality,
//! `fuzz` random scenarios for counterexamples, `sweep` a model parameter to
//! CSV, `optimize` a protocol under norm and duration budgets, and
//! `examples` to emit the reference scenarios.
//!
//! Exit status: 0 when all checked invariants hold, 1 when a checked
//! invariant is violated (a potential counterexample, which is dumped), and
//! 2 for unreadable or malformed input.

mod optimize;
mod simplex;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qmlab_core::linalg::{operator_norm, pauli_x};
use qmlab_core::models::{
    centered_packet, modified_standard_model, modified_two_level_model, standard_model,
    two_level_apparatus_model,
};
use qmlab_core::process::{BoundReport, MeasurementProcess};
use qmlab_core::random::{commuting_v_process, random_process};
use qmlab_core::scenario::{read_scenario, write_scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "qmlab",
    about = "Explore the interaction-strength / duration / accuracy trade-off of two-level measurements",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file against every certified inequality.
    Verify {
        /// Scenario JSON file.
        file: PathBuf,
        /// Slack below -tolerance counts as a violation.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Stress the inequalities with random scenarios.
    Fuzz {
        /// Number of scenarios to draw.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Apparatus dimension.
        #[arg(long = "dim-a", default_value_t = 4)]
        dim_a: usize,
        /// RNG seed; identical seeds reproduce identical output bytes.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        /// Draw couplings commuting with the extended system Hamiltonian
        /// and additionally check the fidelity floor they imply.
        #[arg(long)]
        commuting: bool,
        /// Where to write the worst scenario if an invariant breaks.
        #[arg(long, default_value = "counterexample.json")]
        out: PathBuf,
    },
    /// Evaluate a model along one swept parameter and write a CSV.
    Sweep {
        /// Sweep specification JSON file.
        spec: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for low-error protocols under norm and duration budgets.
    Optimize {
        /// Optimization specification JSON file.
        spec: PathBuf,
        /// RNG seed for the random restarts.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Where to write the best scenario found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the reference example scenarios as JSON files.
    Examples {
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify { file, tolerance } => cmd_verify(&file, tolerance),
        Command::Fuzz {
            samples,
            dim_a,
            seed,
            tolerance,
            commuting,
            out,
        } => cmd_fuzz(samples, dim_a, seed, tolerance, commuting, &out),
        Command::Sweep { spec, out } => cmd_sweep(&spec, &out),
        Command::Optimize { spec, seed, out } => cmd_optimize(&spec, seed, out.as_deref()),
        Command::Examples { out } => cmd_examples(&out),
    };
    ExitCode::from(code)
}

fn fail_input(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    2
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports contain only finite numbers")
    );
}

/// Error-bound margin at the Helstrom pointer, the tightest pointer the
/// inequality must survive: 2 sqrt(P - P^2) - F.
fn lemma2_margin(report: &BoundReport) -> f64 {
    let p = report.helstrom_p_error;
    2.0 * (p - p * p).max(0.0).sqrt() - report.fidelity
}

#[derive(Serialize)]
struct VerifyChecks {
    slack_ok: bool,
    corollary1_ok: bool,
    drift_ok: bool,
    error_bound_ok: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    bound_report: BoundReport,
    drift_actual: f64,
    drift_bound: f64,
    error_bound_margin: f64,
    tolerance: f64,
    checks: VerifyChecks,
    pass: bool,
}

fn cmd_verify(file: &Path, tolerance: f64) -> u8 {
    let process = match read_scenario(file) {
        Ok(p) => p,
        Err(e) => return fail_input(e),
    };
    let report = match process.bound_report() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: could not evaluate the scenario: {e}");
            return 1;
        }
    };
    let drift = match process.heisenberg_drift_check() {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: could not evaluate the scenario: {e}");
            return 1;
        }
    };
    let margin = lemma2_margin(&report);
    let checks = VerifyChecks {
        slack_ok: report.slack >= -tolerance,
        corollary1_ok: report.lhs <= report.corollary1_rhs + tolerance,
        drift_ok: drift.actual <= drift.bound + tolerance,
        error_bound_ok: margin >= -tolerance,
    };
    let pass = checks.slack_ok && checks.corollary1_ok && checks.drift_ok && checks.error_bound_ok;
    print_json(&VerifyReport {
        bound_report: report,
        drift_actual: drift.actual,
        drift_bound: drift.bound,
        error_bound_margin: margin,
        tolerance,
        checks,
        pass,
    });
    if pass {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct FuzzSummary {
    samples: usize,
    dim_a: usize,
    seed: u64,
    tau_max: f64,
    commuting: bool,
    tolerance: f64,
    min_slack: f64,
    min_slack_index: usize,
    min_error_bound_margin: f64,
    min_error_bound_index: usize,
    /// Commuting mode only: minimum of F - |[Q,H_S]| / |H_S| across samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    min_fidelity_floor_margin: Option<f64>,
    /// Full report of the worst-slack sample.
    worst_report: BoundReport,
    violation: bool,
}

fn cmd_fuzz(
    samples: usize,
    dim_a: usize,
    seed: u64,
    tolerance: f64,
    commuting: bool,
    out: &Path,
) -> u8 {
    if samples == 0 {
        return fail_input("--samples must be at least 1");
    }
    if dim_a == 0 {
        return fail_input("--dim-a must be at least 1");
    }
    let tau_max = 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scenarios: Vec<MeasurementProcess> = (0..samples)
        .map(|_| {
            if commuting {
                commuting_v_process(&mut rng, dim_a, tau_max)
            } else {
                random_process(&mut rng, dim_a, tau_max)
            }
        })
        .collect();

    let evaluated: Result<Vec<(BoundReport, f64)>, String> = scenarios
        .par_iter()
        .map(|p| {
            let report = p.bound_report().map_err(|e| e.to_string())?;
            let floor_margin = if commuting {
                report.fidelity - report.lhs / operator_norm(p.h_s().matrix())
            } else {
                f64::INFINITY
            };
            Ok((report, floor_margin))
        })
        .collect();
    let evaluated = match evaluated {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: could not evaluate sample: {e}");
            return 1;
        }
    };

    let (mut min_slack, mut min_slack_index) = (f64::INFINITY, 0);
    let (mut min_margin, mut min_margin_index) = (f64::INFINITY, 0);
    let mut min_floor = f64::INFINITY;
    for (k, (report, floor_margin)) in evaluated.iter().enumerate() {
        if report.slack < min_slack {
            min_slack = report.slack;
            min_slack_index = k;
        }
        let margin = lemma2_margin(report);
        if margin < min_margin {
            min_margin = margin;
            min_margin_index = k;
        }
        min_floor = min_floor.min(*floor_margin);
    }

    let floor_violated = commuting && min_floor < -tolerance;
    let violation = min_slack < -tolerance || min_margin < -tolerance || floor_violated;
    let summary = FuzzSummary {
        samples,
        dim_a,
        seed,
        tau_max,
        commuting,
        tolerance,
        min_slack,
        min_slack_index,
        min_error_bound_margin: min_margin,
        min_error_bound_index: min_margin_index,
        min_fidelity_floor_margin: commuting.then_some(min_floor),
        worst_report: evaluated[min_slack_index].0,
        violation,
    };
    print_json(&summary);

    if violation {
        let offender = if min_slack < -tolerance {
            min_slack_index
        } else {
            min_margin_index
        };
        match write_scenario(out, &scenarios[offender]) {
            Ok(()) => eprintln!("counterexample written to {}", out.display()),
            Err(e) => eprintln!("error: could not write counterexample: {e}"),
        }
        return 1;
    }
    0
}

fn cmd_sweep(spec_path: &Path, out: &Path) -> u8 {
    let text = match std::fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => return fail_input(format_args!("{}: {e}", spec_path.display())),
    };
    let spec = match sweep::parse_spec(&text) {
        Ok(s) => s,
        Err(e) => return fail_input(e),
    };
    let csv = match sweep::run_sweep(&spec) {
        Ok(c) => c,
        Err(e) => return fail_input(e),
    };
    if let Err(e) = std::fs::write(out, &csv) {
        return fail_input(format_args!("{}: {e}", out.display()));
    }
    eprintln!(
        "wrote {} rows to {}",
        csv.lines().count() - 1,
        out.display()
    );
    0
}

fn cmd_optimize(spec_path: &Path, seed: u64, out: Option<&Path>) -> u8 {
    let text = match std::fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => return fail_input(format_args!("{}: {e}", spec_path.display())),
    };
    let spec = match optimize::parse_spec(&text) {
        Ok(s) => s,
        Err(e) => return fail_input(e),
    };
    let (report, process) = match optimize::run_optimization(&spec, seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    print_json(&report);
    if let Some(path) = out {
        if let Err(e) = write_scenario(path, &process) {
            return fail_input(format_args!("{}: {e}", path.display()));
        }
        eprintln!("best scenario written to {}", path.display());
    }
    0
}

#[derive(Serialize)]
struct ExamplesReport {
    written: Vec<String>,
}

fn cmd_examples(out_dir: &Path) -> u8 {
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        return fail_input(format_args!("{}: {e}", out_dir.display()));
    }
    let build = || -> qmlab_core::Result<Vec<(&'static str, MeasurementProcess)>> {
        let two_level = two_level_apparatus_model(1.0)?;
        let modified_two_level = modified_two_level_model(100.0, pauli_x())?;
        let (lattice, packet) = centered_packet(64, 32.0, 1.0)?;
        let standard = standard_model(&lattice, &packet, 4.0)?;
        let tau = 0.05;
        let (kick_lattice, kick_packet) = centered_packet(64, 4.0 * tau, tau / 8.0)?;
        let (modified_standard, _) =
            modified_standard_model(&kick_lattice, &kick_packet, tau, pauli_x().scaled(0.1))?;
        Ok(vec![
            ("two_level_lambda1.json", two_level),
            ("modified_two_level_lambda100.json", modified_two_level),
            ("standard_n64.json", standard),
            ("modified_standard_n64.json", modified_standard),
        ])
    };
    let scenarios = match build() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: could not build example scenario: {e}");
            return 1;
        }
    };
    let mut written = Vec::new();
    for (name, process) in &scenarios {
        let path = out_dir.join(name);
        if let Err(e) = write_scenario(&path, process) {
            return fail_input(format_args!("{}: {e}", path.display()));
        }
        written.push(path.display().to_string());
    }
    print_json(&ExamplesReport { written });
    0
}
