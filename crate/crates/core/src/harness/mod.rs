//! Experiment runner: TOML experiment specs, seeded multi-run orchestration,
//! summary statistics with rank-sum significance marks, and plot-ready
//! output files.
//!
//! Layout of a results directory:
//!
//! ```text
//! spec.toml                      canonical copy of the experiment spec
//! traces/<alg>__<PROB>__run<r>.csv   generation,igd,hv,wall_time
//! fronts/<alg>__<PROB>__run<r>.txt   final non-dominated objective vectors
//! clusters/ocea__<PROB>__run<r>.jsonl  cluster records (final, or every
//!                                    recorded generation with snapshots on)
//! convergence/<alg>__<PROB>.csv  per-generation means over the cell's runs
//! summary.csv / summary.json / summary.txt
//! ```

mod output;
mod runner;
mod spec;
mod stats;

pub use output::{
    clusters_to_jsonl, convergence_csv, load_trace, parse_clusters_jsonl, parse_run_stem,
    parse_trace_csv, run_stem, summary_csv, summary_table, trace_to_csv, CLUSTERS_DIR,
    CONVERGENCE_DIR, FRONTS_DIR, SUMMARY_HEADER, TRACES_DIR, TRACE_HEADER,
};
pub use runner::{
    load_summary, render_table, run_experiment, run_sweep, spec_at, stats_from_dir, CellSummary,
    ExperimentReport, MetricSummary, Provenance, RunRecord, Summary, ALPHA, SPEC_FILE,
};
pub use spec::{
    derive_seed, ExperimentSpec, Params, ResolvedRun, SweepPoint, TraceSpec, FORMAT_VERSION,
    PARAM_KEYS,
};
pub use stats::{
    mean, median, rank, rank_sum, sci4, std_dev, summarize, wilcoxon_rank_sum, CellValues, Metric,
    RankSum, Sense, Significance, StatRow,
};
