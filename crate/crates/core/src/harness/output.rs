//! File formats written by the harness.
//!
//! All reals in machine-readable files use [`format_real`] (17 significant
//! digits), so every value reads back bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::clustering::ClusterRecord;
use crate::metrics::MetricReport;
use crate::problems::format_real;
use crate::{Error, Result};

use super::stats::{sci4, Metric, StatRow};

pub const TRACE_HEADER: &str = "generation,igd,hv,wall_time";
pub const SUMMARY_HEADER: &str = "algorithm,problem,metric,runs,failures,mean,std_dev,rank,mark";
pub const CONVERGENCE_HEADER: &str = "generation,runs,mean_igd,mean_hv";

pub const TRACES_DIR: &str = "traces";
pub const FRONTS_DIR: &str = "fronts";
pub const CLUSTERS_DIR: &str = "clusters";
pub const CONVERGENCE_DIR: &str = "convergence";

/// `<alg>__<PROBLEM>__run<r>`, the stem shared by a run's files.
pub fn run_stem(algorithm: &str, problem: &str, run: usize) -> String {
    format!("{algorithm}__{problem}__run{run}")
}

/// Inverse of [`run_stem`].
pub fn parse_run_stem(stem: &str) -> Option<(String, String, usize)> {
    let mut parts = stem.split("__");
    let algorithm = parts.next()?;
    let problem = parts.next()?;
    let run = parts.next()?.strip_prefix("run")?.parse().ok()?;
    if parts.next().is_some() || algorithm.is_empty() || problem.is_empty() {
        return None;
    }
    Some((algorithm.to_string(), problem.to_string(), run))
}

pub fn trace_to_csv(reports: &[MetricReport]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.generation,
            format_real(r.igd),
            format_real(r.hv),
            format_real(r.wall_time)
        );
    }
    out
}

pub fn parse_trace_csv(text: &str) -> std::result::Result<Vec<MetricReport>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == TRACE_HEADER => {}
        other => return Err(format!("expected header `{TRACE_HEADER}`, found {other:?}")),
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!(
                "line {}: expected 4 fields, found {}",
                i + 2,
                fields.len()
            ));
        }
        let real = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("line {}: {e}", i + 2))
        };
        out.push(MetricReport {
            generation: fields[0]
                .trim()
                .parse()
                .map_err(|e| format!("line {}: {e}", i + 2))?,
            igd: real(fields[1])?,
            hv: real(fields[2])?,
            wall_time: real(fields[3])?,
        });
    }
    Ok(out)
}

pub fn load_trace(path: &Path) -> Result<Vec<MetricReport>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace_csv(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })
}

/// One JSON object per line.
pub fn clusters_to_jsonl(records: &[ClusterRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("cluster record serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_clusters_jsonl(text: &str) -> std::result::Result<Vec<ClusterRecord>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

/// Mean IGD and HV per recorded generation over several traces of one cell.
/// Generations missing from some traces average over the rest.
pub fn convergence_csv(traces: &[Vec<MetricReport>]) -> String {
    let mut generations: Vec<usize> = traces.iter().flatten().map(|r| r.generation).collect();
    generations.sort_unstable();
    generations.dedup();
    let mut out = String::from(CONVERGENCE_HEADER);
    out.push('\n');
    for g in generations {
        let rows: Vec<&MetricReport> = traces
            .iter()
            .filter_map(|t| t.iter().find(|r| r.generation == g))
            .collect();
        let n = rows.len() as f64;
        let igd = rows.iter().map(|r| r.igd).sum::<f64>() / n;
        let hv = rows.iter().map(|r| r.hv).sum::<f64>() / n;
        let _ = writeln!(
            out,
            "{g},{},{},{}",
            rows.len(),
            format_real(igd),
            format_real(hv)
        );
    }
    out
}

pub fn summary_csv(rows: &[StatRow]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.problem,
            r.metric.name(),
            r.runs,
            r.failures,
            format_real(r.mean),
            format_real(r.std_dev),
            r.rank,
            r.mark.map_or(String::new(), |m| m.to_string())
        );
    }
    out
}

/// Human-readable table: one block per metric, one row per problem, entries
/// `mean(std)[rank]` followed by the significance mark.
pub fn summary_table(
    rows: &[StatRow],
    algorithms: &[String],
    problems: &[String],
    reference: Option<&str>,
) -> String {
    let mut out = String::new();
    for metric in Metric::ALL {
        let mut table: Vec<Vec<String>> =
            vec![
                std::iter::once(format!("{} / problem", metric.name().to_uppercase()))
                    .chain(algorithms.iter().cloned())
                    .collect(),
            ];
        for problem in problems {
            let mut line = vec![problem.clone()];
            for algorithm in algorithms {
                let cell = rows
                    .iter()
                    .find(|r| {
                        &r.algorithm == algorithm && &r.problem == problem && r.metric == metric
                    })
                    .map_or_else(
                        || "-".to_string(),
                        |r| {
                            format!(
                                "{}({})[{}]{}",
                                sci4(r.mean),
                                sci4(r.std_dev),
                                r.rank,
                                r.mark.map_or("", |m| m.mark())
                            )
                        },
                    );
                line.push(cell);
            }
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| {
                table
                    .iter()
                    .map(|row| row[c].chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, &w)| format!("{cell}{}", " ".repeat(w - cell.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", cells.join("  ").trim_end());
        }
        out.push('\n');
    }
    if let Some(reference) = reference {
        let _ = writeln!(
            out,
            "{} against each other algorithm (rank-sum test, 5% level): † better, § worse, ≈ similar.",
            reference
        );
    }
    out
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Creates `dir` and its output subdirectories and proves it writable.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    for sub in [TRACES_DIR, FRONTS_DIR, CLUSTERS_DIR, CONVERGENCE_DIR] {
        let path = dir.join(sub);
        std::fs::create_dir_all(&path).map_err(|e| Error::io(&path, e))?;
    }
    let probe: PathBuf = dir.join(".write-probe");
    std::fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    std::fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}
