//! The experiment workflows behind the CLI subcommands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use varsense_core::bounds::bounds_table_for;
use varsense_core::{
    directional_cfi, ee_bound, layerwise_optimize, prepare_probe_flat, sql_bound, BoundsRow,
    EncodingKind, StateVector,
};

use crate::config::RunConfig;
use crate::emit::{emit_plot_data, fmt_f64, PlotSeries};
use crate::error::HarnessError;
use crate::record::{
    CellOutcome, CellResult, CellStatus, EvaluationRecord, ProbeSource, RobustnessPoint, RunRecord,
    TraceSummary,
};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const RECORD_FILE: &str = "record.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const BOUNDS_FILE: &str = "bounds.tsv";

fn now() -> String {
    chrono::Utc::now().to_rfc3339()
}

pub fn run_bounds(
    n_min: usize,
    n_max: usize,
    encodings: &[EncodingKind],
) -> Result<Vec<BoundsRow>, HarnessError> {
    bounds_table_for(n_min, n_max, encodings).map_err(|e| HarnessError::Config(e.to_string()))
}

pub fn format_bounds(rows: &[BoundsRow]) -> String {
    let mut out = String::from("# bounds on F(q): sql = 1/|alpha|^2, ee = S^2/|alpha|^4\n");
    out.push_str("# columns: encoding\tnum_qubits\tsql\tee\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.encoding,
            r.num_qubits,
            fmt_f64(r.sql),
            fmt_f64(r.ee)
        );
    }
    out
}

pub fn write_bounds(rows: &[BoundsRow], out_dir: &Path) -> Result<PathBuf, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(BOUNDS_FILE);
    std::fs::write(&path, format_bounds(rows))?;
    Ok(path)
}

/// Scores one probe at the configured working point. For
/// [`ProbeSource::Ansatz`] the depth is `ansatz.max_depth` and `params`
/// must hold exactly three values per layer.
pub fn run_evaluate(
    cfg: &RunConfig,
    num_qubits: usize,
    params: &[f64],
    probe: ProbeSource,
) -> Result<EvaluationRecord, HarnessError> {
    cfg.validate()?;
    if !cfg.qubit_range().contains(&num_qubits) {
        return Err(HarnessError::Config(format!(
            "qubit count {num_qubits} is outside the configured range {}..={}",
            cfg.geometry.n_min, cfg.geometry.n_max
        )));
    }
    let alpha = cfg.weights(num_qubits)?;
    let (state, depth) = match probe {
        ProbeSource::Ansatz => {
            let depth = cfg.ansatz.max_depth;
            if params.len() != 3 * depth {
                return Err(HarnessError::Config(format!(
                    "params: a depth-{depth} ansatz takes {} values, got {}",
                    3 * depth,
                    params.len()
                )));
            }
            let h = cfg.hamiltonian(num_qubits)?;
            let ansatz = varsense_core::AnsatzConfig {
                num_layers: depth,
                evolution: cfg.ansatz.evolution,
            };
            (prepare_probe_flat(&h, &ansatz, params)?, depth)
        }
        ProbeSource::Ghz => (StateVector::ghz(num_qubits)?, 0),
        ProbeSource::Product => (StateVector::plus(num_qubits)?, 0),
    };
    let setup = cfg.measurement.setup();
    let report = directional_cfi(&state, &alpha, setup.theta0, &setup)?;
    let fid = state.ghz_fidelity();
    Ok(EvaluationRecord {
        code_version: CODE_VERSION.into(),
        created_at: now(),
        num_qubits,
        depth,
        probe,
        theta0: setup.theta0,
        params: if probe == ProbeSource::Ansatz {
            params.to_vec()
        } else {
            Vec::new()
        },
        sql: sql_bound(&alpha),
        ee: ee_bound(&alpha),
        fidelity_raw: fid.raw,
        fidelity_phase_optimized: fid.phase_optimized,
        report,
    })
}

pub fn write_evaluation(
    record: &EvaluationRecord,
    out_dir: &Path,
) -> Result<PathBuf, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("evaluate_n{}.json", record.num_qubits));
    let text =
        serde_json::to_string_pretty(record).map_err(|e| HarnessError::Runtime(e.to_string()))?;
    std::fs::write(&path, text)?;
    Ok(path)
}

fn optimize_cells(cfg: &RunConfig, n: usize) -> Vec<CellResult> {
    let (sql, ee) = match cfg.weights(n) {
        Ok(a) => (sql_bound(&a), ee_bound(&a)),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let error_cells = |message: String| {
        (1..=cfg.ansatz.max_depth)
            .map(|depth| CellResult {
                num_qubits: n,
                depth,
                sql,
                ee,
                outcome: CellStatus::Error {
                    message: message.clone(),
                },
            })
            .collect()
    };
    let problem = match cfg.problem(n) {
        Ok(p) => p,
        Err(e) => return error_cells(e.to_string()),
    };
    let results = match layerwise_optimize(&problem, cfg.ansatz.max_depth, &cfg.layerwise()) {
        Ok(r) => r,
        Err(e) => return error_cells(e.to_string()),
    };
    results
        .into_iter()
        .map(|r| {
            let outcome = (|| -> varsense_core::Result<CellOutcome> {
                let probe = prepare_probe_flat(
                    &problem.hamiltonian,
                    &problem.ansatz(r.depth),
                    &r.best_params,
                )?;
                let setup = cfg.measurement.setup();
                let report = directional_cfi(&probe, &problem.alpha, setup.theta0, &setup)?;
                let robustness = cfg
                    .measurement
                    .robustness_theta0
                    .iter()
                    .map(|&t| {
                        let s = cfg.measurement.setup_at(t);
                        Ok(RobustnessPoint {
                            theta0: t,
                            cfi_q: directional_cfi(&probe, &problem.alpha, t, &s)?.cfi_q,
                        })
                    })
                    .collect::<varsense_core::Result<Vec<_>>>()?;
                let fid = probe.ghz_fidelity();
                Ok(CellOutcome {
                    cfi_q: r.best_fitness,
                    cfi_theta: report.cfi_theta,
                    fidelity_raw: fid.raw,
                    fidelity_phase_optimized: fid.phase_optimized,
                    best_params: r.best_params.clone(),
                    robustness,
                    trace: TraceSummary::from(&r.trace),
                })
            })();
            CellResult {
                num_qubits: n,
                depth: r.depth,
                sql,
                ee,
                outcome: match outcome {
                    Ok(o) => CellStatus::Ok(o),
                    Err(e) => CellStatus::Error {
                        message: e.to_string(),
                    },
                },
            }
        })
        .collect()
}

/// Runs the layerwise optimization for every qubit count in the config.
/// Qubit counts run in parallel; failures are recorded per cell.
pub fn run_optimize(cfg: &RunConfig) -> Result<RunRecord, HarnessError> {
    cfg.validate()?;
    if cfg.ansatz.max_depth < 1 {
        return Err(HarnessError::Config(
            "ansatz.max_depth: optimization needs depth ≥ 1".into(),
        ));
    }
    let started_at = now();
    let ns: Vec<usize> = cfg.qubit_range().collect();
    let per_n: Vec<Vec<CellResult>> = if cfg.optimizer.parallel {
        ns.par_iter().map(|&n| optimize_cells(cfg, n)).collect()
    } else {
        ns.iter().map(|&n| optimize_cells(cfg, n)).collect()
    };
    Ok(RunRecord {
        code_version: CODE_VERSION.into(),
        started_at,
        finished_at: now(),
        encoding: cfg.encoding.kind,
        config: cfg.clone(),
        cells: per_n.into_iter().flatten().collect(),
    })
}

/// Writes `record.json`, `config.toml` and both plot series into `out_dir`.
pub fn persist_run(record: &RunRecord, out_dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = vec![out_dir.join(RECORD_FILE), out_dir.join(CONFIG_FILE)];
    record.save(&written[0])?;
    record.config.save(&written[1])?;
    for which in [PlotSeries::CfiVsN, PlotSeries::FidelityVsDepth] {
        match emit_plot_data(record, which, out_dir) {
            Ok(paths) => written.extend(paths),
            Err(HarnessError::NotComputed(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(written)
}
