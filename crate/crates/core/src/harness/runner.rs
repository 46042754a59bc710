use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{run, Algorithm, RunTrace};
use crate::metrics::MetricReport;
use crate::problems::{nondominated_filter, points_to_text};
use crate::rng::GENERATOR_NAME;
use crate::{Error, Result};

use super::output::{
    clusters_to_jsonl, convergence_csv, load_trace, prepare_output_dir, run_stem, summary_csv,
    summary_table, trace_to_csv, write_atomic, CLUSTERS_DIR, CONVERGENCE_DIR, FRONTS_DIR,
    TRACES_DIR,
};
use super::spec::{ExperimentSpec, Params, ResolvedRun, SweepPoint, FORMAT_VERSION};
use super::stats::{summarize, CellValues, Metric, StatRow};

/// Significance level of the rank-sum marks.
pub const ALPHA: f64 = 0.05;

pub const SPEC_FILE: &str = "spec.toml";

/// Outcome of one run as listed in `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub run: usize,
    pub seed: u64,
    pub evaluations: usize,
    pub igd: Option<f64>,
    pub hv: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunRecord {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub format_version: String,
    pub crate_version: String,
    pub spec_name: String,
    pub spec_hash: String,
    pub generator: String,
    pub base_seed: u64,
    pub seed_rule: String,
    pub reference: Option<String>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub rank: usize,
    pub mark: Option<super::stats::Significance>,
}

/// One structured record per (algorithm, problem) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: String,
    pub problem: String,
    pub runs: usize,
    pub failures: usize,
    pub igd: MetricSummary,
    pub hv: MetricSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub provenance: Provenance,
    pub cells: Vec<CellSummary>,
    pub runs: Vec<RunRecord>,
}

/// What [`run_experiment`] returns besides the files it writes.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub output: PathBuf,
    pub rows: Vec<StatRow>,
    pub records: Vec<RunRecord>,
}

impl ExperimentReport {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.failed()).count()
    }
}

/// Runs every cell of `spec` and writes traces, fronts, cluster dumps,
/// per-cell convergence means and the summaries under `output`.
///
/// The spec is validated and `output` proven writable before any run starts.
/// A failing run is recorded in the summary and leaves no files of its own;
/// the other runs proceed. Every numeric output is independent of `workers`.
pub fn run_experiment(
    spec: &ExperimentSpec,
    output: &Path,
    workers: Option<usize>,
) -> Result<ExperimentReport> {
    spec.validate()?;
    let runs = spec.resolve_runs(&Params::default())?;
    prepare_output_dir(output)?;
    write_atomic(&output.join(SPEC_FILE), &spec.to_toml())?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(spec.workers))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<(RunRecord, Option<Vec<MetricReport>>)> =
        pool.install(|| runs.par_iter().map(|job| execute(job, output)).collect());

    let mut records = Vec::with_capacity(outcomes.len());
    let mut traces = Vec::with_capacity(outcomes.len());
    for (record, trace) in outcomes {
        records.push(record);
        traces.push(trace);
    }

    for algorithm in &spec.algorithms {
        for problem in &spec.problems {
            let cell: Vec<Vec<MetricReport>> = records
                .iter()
                .zip(&traces)
                .filter(|(r, _)| {
                    r.algorithm == canonical_algorithm(algorithm)
                        && r.problem.eq_ignore_ascii_case(problem)
                })
                .filter_map(|(_, t)| t.clone())
                .collect();
            let path = output.join(CONVERGENCE_DIR).join(format!(
                "{}__{}.csv",
                canonical_algorithm(algorithm),
                problem.to_ascii_uppercase()
            ));
            if cell.is_empty() {
                let _ = std::fs::remove_file(&path);
            } else {
                write_atomic(&path, &convergence_csv(&cell))?;
            }
        }
    }

    let rows = rows_from_records(spec, &records);
    write_summaries(spec, output, &rows, &records)?;
    Ok(ExperimentReport {
        output: output.to_path_buf(),
        rows,
        records,
    })
}

/// Runs the experiment once per sweep point, each in `output/<label>`, and
/// writes `output/sweep_summary.csv`. Seeds do not depend on the point.
pub fn run_sweep(
    spec: &ExperimentSpec,
    output: &Path,
    workers: Option<usize>,
) -> Result<Vec<(SweepPoint, ExperimentReport)>> {
    spec.validate()?;
    let points = spec.sweep_points();
    if points.is_empty() {
        return Err(Error::Config("the spec declares no [sweep] axes".into()));
    }
    prepare_output_dir(output)?;
    let mut reports = Vec::new();
    let mut text = String::from("point,algorithm,problem,metric,runs,failures,mean,std_dev\n");
    for point in points {
        let point_spec = spec_at(spec, &point);
        let report = run_experiment(&point_spec, &output.join(&point.label), workers)?;
        for r in &report.rows {
            text.push_str(&format!(
                "\"{}\",{},{},{},{},{},{},{}\n",
                point.label,
                r.algorithm,
                r.problem,
                r.metric.name(),
                r.runs,
                r.failures,
                crate::problems::format_real(r.mean),
                crate::problems::format_real(r.std_dev)
            ));
        }
        reports.push((point, report));
    }
    write_atomic(&output.join("sweep_summary.csv"), &text)?;
    Ok(reports)
}

/// The plain experiment a sweep point stands for: the point's values
/// override every other parameter source.
pub fn spec_at(spec: &ExperimentSpec, point: &SweepPoint) -> ExperimentSpec {
    let mut out = spec.clone();
    out.sweep.clear();
    out.params = out.params.overlay(&point.params);
    for overrides in out.algorithm_params.values_mut() {
        *overrides = overrides.overlay(&point.params);
    }
    if !point.label.is_empty() {
        out.name = format!("{} [{}]", spec.name, point.label);
    }
    out
}

/// Recomputes the summary rows of a finished experiment from its persisted
/// spec and trace files. A missing trace counts as a failed run.
pub fn stats_from_dir(dir: &Path) -> Result<(ExperimentSpec, Vec<StatRow>)> {
    let spec = ExperimentSpec::load(dir.join(SPEC_FILE))?;
    spec.validate()?;
    let mut cells = Vec::new();
    for algorithm in &spec.algorithms {
        let algorithm = canonical_algorithm(algorithm);
        for problem in &spec.problems {
            let problem = problem.to_ascii_uppercase();
            let mut cell = CellValues {
                algorithm: algorithm.to_string(),
                problem: problem.clone(),
                igd: Vec::new(),
                hv: Vec::new(),
                failures: 0,
            };
            for r in 0..spec.runs {
                let path = dir
                    .join(TRACES_DIR)
                    .join(format!("{}.csv", run_stem(algorithm, &problem, r)));
                if !path.exists() {
                    cell.failures += 1;
                    continue;
                }
                let trace = load_trace(&path)?;
                let last = trace.last().ok_or_else(|| Error::Parse {
                    path: path.clone(),
                    message: "trace has no rows".into(),
                })?;
                cell.igd.push(last.igd);
                cell.hv.push(last.hv);
            }
            cells.push(cell);
        }
    }
    let (algorithms, problems) = table_axes(&spec);
    let reference = spec.reference_algorithm().map(canonical_algorithm);
    Ok((
        spec.clone(),
        summarize(&cells, &algorithms, &problems, reference, ALPHA),
    ))
}

/// Loads `summary.json` from a results directory.
pub fn load_summary(dir: &Path) -> Result<Summary> {
    let path = dir.join("summary.json");
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path,
        message: e.to_string(),
    })
}

/// Table-I style text of the given rows.
pub fn render_table(spec: &ExperimentSpec, rows: &[StatRow]) -> String {
    let (algorithms, problems) = table_axes(spec);
    summary_table(
        rows,
        &algorithms,
        &problems,
        spec.reference_algorithm().map(canonical_algorithm),
    )
}

fn execute(job: &ResolvedRun, output: &Path) -> (RunRecord, Option<Vec<MetricReport>>) {
    let algorithm = job.algorithm.name();
    let problem = job.problem.name();
    let stem = run_stem(algorithm, problem, job.run);
    let files = [
        output.join(TRACES_DIR).join(format!("{stem}.csv")),
        output.join(FRONTS_DIR).join(format!("{stem}.txt")),
        output.join(CLUSTERS_DIR).join(format!("{stem}.jsonl")),
    ];
    let mut record = RunRecord {
        algorithm: algorithm.to_string(),
        problem: problem.to_string(),
        run: job.run,
        seed: job.config.seed,
        evaluations: 0,
        igd: None,
        hv: None,
        error: None,
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run(&job.config, &job.problem)))
        .unwrap_or_else(|payload| {
            Err(Error::Contract(format!(
                "run panicked: {}",
                panic_message(&payload)
            )))
        })
        .and_then(|trace| persist(&trace, job.algorithm, &files).map(|()| trace));
    match outcome {
        Ok(trace) => {
            let last = trace.final_report();
            record.evaluations = trace.evaluations;
            record.igd = last.map(|r| r.igd);
            record.hv = last.map(|r| r.hv);
            (record, Some(trace.reports))
        }
        Err(e) => {
            for f in &files {
                let _ = std::fs::remove_file(f);
            }
            record.error = Some(e.to_string());
            (record, None)
        }
    }
}

fn persist(trace: &RunTrace, algorithm: Algorithm, files: &[PathBuf; 3]) -> Result<()> {
    write_atomic(&files[0], &trace_to_csv(&trace.reports))?;
    let front = nondominated_filter(trace.final_archive.iter().map(|s| s.f.clone()).collect());
    write_atomic(&files[1], &points_to_text(&front))?;
    if algorithm == Algorithm::Ocea {
        let records = if trace.cluster_snapshots.is_empty() {
            &trace.final_clusters
        } else {
            &trace.cluster_snapshots
        };
        write_atomic(&files[2], &clusters_to_jsonl(records))?;
    } else {
        let _ = std::fs::remove_file(&files[2]);
    }
    Ok(())
}

fn panic_message(payload: &Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

fn canonical_algorithm(name: &str) -> &'static str {
    Algorithm::parse(name).map_or("unknown", Algorithm::name)
}

fn table_axes(spec: &ExperimentSpec) -> (Vec<String>, Vec<String>) {
    (
        spec.algorithms
            .iter()
            .map(|a| canonical_algorithm(a).to_string())
            .collect(),
        spec.problems
            .iter()
            .map(|p| p.to_ascii_uppercase())
            .collect(),
    )
}

fn rows_from_records(spec: &ExperimentSpec, records: &[RunRecord]) -> Vec<StatRow> {
    let (algorithms, problems) = table_axes(spec);
    let mut cells = Vec::new();
    for algorithm in &algorithms {
        for problem in &problems {
            let runs: Vec<&RunRecord> = records
                .iter()
                .filter(|r| &r.algorithm == algorithm && &r.problem == problem)
                .collect();
            cells.push(CellValues {
                algorithm: algorithm.clone(),
                problem: problem.clone(),
                igd: runs.iter().filter_map(|r| r.igd).collect(),
                hv: runs.iter().filter_map(|r| r.hv).collect(),
                failures: runs.iter().filter(|r| r.failed()).count(),
            });
        }
    }
    summarize(
        &cells,
        &algorithms,
        &problems,
        spec.reference_algorithm().map(canonical_algorithm),
        ALPHA,
    )
}

fn write_summaries(
    spec: &ExperimentSpec,
    output: &Path,
    rows: &[StatRow],
    records: &[RunRecord],
) -> Result<()> {
    write_atomic(&output.join("summary.csv"), &summary_csv(rows))?;
    write_atomic(&output.join("summary.txt"), &render_table(spec, rows))?;
    let metric_summary = |alg: &str, prob: &str, metric: Metric| {
        rows.iter()
            .find(|r| r.algorithm == alg && r.problem == prob && r.metric == metric)
            .map(|r| MetricSummary {
                mean: r.mean,
                std_dev: r.std_dev,
                rank: r.rank,
                mark: r.mark,
            })
            .expect("row for every cell and metric")
    };
    let (algorithms, problems) = table_axes(spec);
    let mut cells = Vec::new();
    for algorithm in &algorithms {
        for problem in &problems {
            let runs = records
                .iter()
                .filter(|r| &r.algorithm == algorithm && &r.problem == problem);
            let failures = runs.clone().filter(|r| r.failed()).count();
            cells.push(CellSummary {
                algorithm: algorithm.clone(),
                problem: problem.clone(),
                runs: runs.count() - failures,
                failures,
                igd: metric_summary(algorithm, problem, Metric::Igd),
                hv: metric_summary(algorithm, problem, Metric::Hv),
            });
        }
    }
    let summary = Summary {
        provenance: Provenance {
            format_version: FORMAT_VERSION.to_string(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            spec_name: spec.name.clone(),
            spec_hash: spec.hash(),
            generator: GENERATOR_NAME.to_string(),
            base_seed: spec.base_seed,
            seed_rule: "base_seed XOR le_u64(sha256(\"<alg>\\0<PROBLEM>\\0<run>\")[0..8])"
                .to_string(),
            reference: spec
                .reference_algorithm()
                .map(|r| canonical_algorithm(r).to_string()),
            alpha: ALPHA,
        },
        cells,
        runs: records.to_vec(),
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_atomic(&output.join("summary.json"), &(json + "\n"))
}
