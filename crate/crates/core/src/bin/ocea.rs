use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ocea::harness::{
    render_table, run_experiment, run_sweep, stats_from_dir, summary_csv, ExperimentReport,
    ExperimentSpec,
};

#[derive(Parser)]
#[command(
    name = "ocea",
    version,
    about = "Clustering-guided multiobjective evolutionary experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell of an experiment spec.
    Run(RunArgs),
    /// Run an experiment once per point of its [sweep] grid.
    Sweep(RunArgs),
    /// Recompute the summary table from a results directory.
    Stats {
        dir: PathBuf,
        /// Fail if the recomputed summary differs from summary.csv.
        #[arg(long)]
        check: bool,
    },
    /// Check experiment specs without running them.
    Validate {
        #[arg(required = true)]
        specs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    spec: PathBuf,
    /// Results directory [default: the spec's `output`, else results/<spec name>].
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(short = 'j', long)]
    workers: Option<usize>,
    /// Record metrics every N generations.
    #[arg(long)]
    cadence: Option<usize>,
    /// Replace the spec's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Dump cluster state at every recorded generation.
    #[arg(long)]
    snapshots: bool,
    /// Write zero wall times so reruns are byte-identical.
    #[arg(long)]
    no_wall_time: bool,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> ocea::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => {
            let (spec, output) = prepare(&args)?;
            let report = run_experiment(&spec, &output, args.workers)?;
            print!("{}", render_table(&spec, &report.rows));
            Ok(finish(&[report]))
        }
        Command::Sweep(args) => {
            let (spec, output) = prepare(&args)?;
            let reports = run_sweep(&spec, &output, args.workers)?;
            for (point, report) in &reports {
                println!("== {} ({})", point.label, report.output.display());
            }
            println!(
                "sweep summary: {}",
                output.join("sweep_summary.csv").display()
            );
            let reports: Vec<ExperimentReport> = reports.into_iter().map(|(_, r)| r).collect();
            Ok(finish(&reports))
        }
        Command::Stats { dir, check } => {
            let (spec, rows) = stats_from_dir(&dir)?;
            print!("{}", render_table(&spec, &rows));
            if check {
                let path = dir.join("summary.csv");
                let stored = std::fs::read_to_string(&path)
                    .map_err(|e| ocea::Error::Io { path, source: e })?;
                if stored != summary_csv(&rows) {
                    eprintln!("summary.csv differs from the statistics recomputed from traces");
                    return Ok(ExitCode::from(1));
                }
                println!("summary.csv matches the traces");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { specs } => {
            let mut clean = true;
            for path in specs {
                match ExperimentSpec::load(&path) {
                    Ok(spec) => {
                        let diagnostics = spec.diagnostics();
                        if diagnostics.is_empty() {
                            println!("{}: ok", path.display());
                        } else {
                            clean = false;
                            for d in diagnostics {
                                println!("{}: {d}", path.display());
                            }
                        }
                    }
                    Err(e) => {
                        clean = false;
                        println!("{e}");
                    }
                }
            }
            Ok(if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn prepare(args: &RunArgs) -> ocea::Result<(ExperimentSpec, PathBuf)> {
    let mut spec = ExperimentSpec::load(&args.spec)?;
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    if let Some(cadence) = args.cadence {
        spec.trace.cadence = cadence;
    }
    if args.snapshots {
        spec.trace.cluster_snapshots = true;
    }
    if args.no_wall_time {
        spec.trace.wall_time = false;
    }
    let output = args
        .output
        .clone()
        .or_else(|| spec.output.clone())
        .unwrap_or_else(|| Path::new("results").join(args.spec.file_stem().unwrap_or_default()));
    Ok((spec, output))
}

fn finish(reports: &[ExperimentReport]) -> ExitCode {
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| &r.records)
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| format!("{}/{} run {}: {e}", r.algorithm, r.problem, r.run))
        })
        .collect();
    if failed.is_empty() {
        return ExitCode::SUCCESS;
    }
    for line in &failed {
        eprintln!("failed: {line}");
    }
    ExitCode::from(3)
}
