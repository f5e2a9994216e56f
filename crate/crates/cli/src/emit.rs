//! Plot-ready tab-separated series with `#` header lines.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::record::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum PlotSeries {
    /// One file per depth, one row per qubit count.
    CfiVsN,
    /// One file per qubit count, one row per depth.
    FidelityVsDepth,
}

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_plot_data(
    record: &RunRecord,
    which: PlotSeries,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, HarnessError> {
    let ok: Vec<_> = record
        .cells
        .iter()
        .filter_map(|c| c.ok().map(|o| (c, o)))
        .collect();
    if ok.is_empty() {
        return Err(HarnessError::NotComputed(format!(
            "{which:?}: record holds no completed cells"
        )));
    }
    std::fs::create_dir_all(out_dir)?;
    let encoding = record.encoding;
    let mut written = Vec::new();
    match which {
        PlotSeries::CfiVsN => {
            let depths: BTreeSet<usize> = ok.iter().map(|(c, _)| c.depth).collect();
            for depth in depths {
                let mut text = format!("# cfi_vs_n depth={depth} encoding={encoding}\n");
                text.push_str("# columns: num_qubits\tcfi_q\tcfi_theta\tsql\tee\tcfi_over_ee\n");
                for (c, o) in ok.iter().filter(|(c, _)| c.depth == depth) {
                    let _ = writeln!(
                        text,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        c.num_qubits,
                        fmt_f64(o.cfi_q),
                        fmt_f64(o.cfi_theta),
                        fmt_f64(c.sql),
                        fmt_f64(c.ee),
                        fmt_f64(o.cfi_q / c.ee)
                    );
                }
                let path = out_dir.join(format!("cfi_vs_n_depth{depth}.tsv"));
                std::fs::write(&path, text)?;
                written.push(path);
            }
        }
        PlotSeries::FidelityVsDepth => {
            let ns: BTreeSet<usize> = ok.iter().map(|(c, _)| c.num_qubits).collect();
            for n in ns {
                let mut text = format!("# fidelity_vs_depth num_qubits={n} encoding={encoding}\n");
                text.push_str(
                    "# columns: depth\tfidelity_raw\tfidelity_phase_optimized\tcfi_q\tsql\tee\n",
                );
                for (c, o) in ok.iter().filter(|(c, _)| c.num_qubits == n) {
                    let _ = writeln!(
                        text,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        c.depth,
                        fmt_f64(o.fidelity_raw),
                        fmt_f64(o.fidelity_phase_optimized),
                        fmt_f64(o.cfi_q),
                        fmt_f64(c.sql),
                        fmt_f64(c.ee)
                    );
                }
                let path = out_dir.join(format!("fidelity_vs_depth_n{n}.tsv"));
                std::fs::write(&path, text)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

/// Parses the data rows of an emitted series file.
pub fn read_series(path: &Path) -> Result<Vec<Vec<f64>>, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            l.split('\t')
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| HarnessError::Runtime(format!("{}: {e}", path.display())))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_f64(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        let x = 1.0 / 3.0;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
