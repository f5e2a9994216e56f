use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use varsense_cli::runner::{format_bounds, write_bounds, write_evaluation, RECORD_FILE};
use varsense_cli::{
    emit_plot_data, persist_run, run_bounds, run_evaluate, run_optimize, HarnessError, PlotSeries,
    ProbeSource, RunConfig, RunRecord,
};
use varsense_core::EncodingKind;

#[derive(Parser)]
#[command(
    name = "varsense",
    version,
    about = "Variational probe design for weighted phase sensing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsEncoding {
    Uniform,
    WeightedCentral,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitWhich {
    CfiVsN,
    FidelityVsDepth,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Print the SQL / entanglement-enhanced bound table.
    Bounds {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_enum)]
        encoding: Option<BoundsEncoding>,
    },
    /// Score a single probe at the configured working point.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Qubit count (defaults to geometry.n_min).
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated layer-major parameters (t1, theta2, t3, ...).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
        #[arg(long, value_enum, default_value = "ansatz")]
        probe: ProbeSource,
    },
    /// Layerwise CMA-ES optimization over the configured qubit range.
    Optimize {
        #[command(flatten)]
        common: Common,
    },
    /// Write plot series from a stored run record.
    Emit {
        #[command(flatten)]
        common: Common,
        /// Run record; defaults to <output_dir>/record.json of the config.
        #[arg(long)]
        record: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "both")]
        which: EmitWhich,
    },
}

fn load_config(common: &Common) -> Result<RunConfig, HarnessError> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| HarnessError::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn parse_params(text: &str) -> Result<Vec<f64>, HarnessError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| HarnessError::Config(format!("params: '{s}': {e}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Bounds {
            common,
            n_min,
            n_max,
            encoding,
        } => {
            let cfg = common
                .config
                .as_ref()
                .map(|_| load_config(&common))
                .transpose()?;
            let lo = n_min
                .or(cfg.as_ref().map(|c| c.geometry.n_min))
                .unwrap_or(2);
            let hi = n_max
                .or(cfg.as_ref().map(|c| c.geometry.n_max))
                .unwrap_or(5);
            let kinds = match encoding {
                Some(BoundsEncoding::Uniform) => vec![EncodingKind::Uniform],
                Some(BoundsEncoding::WeightedCentral) => vec![EncodingKind::WeightedCentral],
                Some(BoundsEncoding::Both) | None => {
                    vec![EncodingKind::Uniform, EncodingKind::WeightedCentral]
                }
            };
            let rows = run_bounds(lo, hi, &kinds)?;
            print!("{}", format_bounds(&rows));
            if let Some(out) = common.out.as_deref() {
                write_bounds(&rows, out)?;
            }
        }
        Command::Evaluate {
            common,
            n,
            params,
            probe,
        } => {
            let cfg = load_config(&common)?;
            let n = n.unwrap_or(cfg.geometry.n_min);
            let record = run_evaluate(&cfg, n, &parse_params(&params)?, probe)?;
            let path = write_evaluation(&record, &cfg.output_dir)?;
            println!(
                "N={} depth={} F(q)={} F(theta)={} SQL={} EE={} GHZ fidelity raw={} phase-optimized={}",
                record.num_qubits,
                record.depth,
                record.report.cfi_q,
                record.report.cfi_theta,
                record.sql,
                record.ee,
                record.fidelity_raw,
                record.fidelity_phase_optimized
            );
            eprintln!("wrote {}", path.display());
        }
        Command::Optimize { common } => {
            let cfg = load_config(&common)?;
            let record = run_optimize(&cfg)?;
            for cell in &record.cells {
                match cell.ok() {
                    Some(o) => println!(
                        "N={} depth={} F(q)={:.6} EE={:.6} ratio={:.4} fidelity={:.4}",
                        cell.num_qubits,
                        cell.depth,
                        o.cfi_q,
                        cell.ee,
                        o.cfi_q / cell.ee,
                        o.fidelity_phase_optimized
                    ),
                    None => println!("N={} depth={} failed", cell.num_qubits, cell.depth),
                }
            }
            for path in persist_run(&record, &cfg.output_dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Emit {
            common,
            record,
            which,
        } => {
            let record_path = match record {
                Some(p) => p,
                // --out names the plot directory here, not the run directory.
                None => load_config(&Common {
                    out: None,
                    ..common.clone()
                })?
                .output_dir
                .join(RECORD_FILE),
            };
            let run = RunRecord::load(&record_path)?;
            let out = common.out.clone().unwrap_or_else(|| {
                record_path
                    .parent()
                    .map_or_else(|| Path::new(".").into(), Path::to_path_buf)
            });
            let series = match which {
                EmitWhich::CfiVsN => vec![PlotSeries::CfiVsN],
                EmitWhich::FidelityVsDepth => vec![PlotSeries::FidelityVsDepth],
                EmitWhich::Both => vec![PlotSeries::CfiVsN, PlotSeries::FidelityVsDepth],
            };
            for s in series {
                for path in emit_plot_data(&run, s, &out)? {
                    println!("{}", path.display());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
