//! Optimization runs: the clustering-guided steady-state loop and an
//! NSGA-II style generational baseline sharing the same variation operators.

mod nsga2;
mod ocea;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterRecord;
use crate::domain::Solution;
use crate::metrics::{hv_metric, igd, MetricReport};
use crate::problems::{Problem, ReferenceFront};
use crate::rng::GENERATOR_NAME;
use crate::variation::VariationParams;
use crate::{Error, Result};

pub use nsga2::{run_nsga2_baseline, select_by_rank_and_crowding};
pub use ocea::{EngineState, EsocOutcome, Ocea, SELECTION_REFERENCE_POLICY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ocea,
    Nsga2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Ocea, Algorithm::Nsga2];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ocea => "ocea",
            Algorithm::Nsga2 => "nsga2",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "ocea" => Ok(Algorithm::Ocea),
            "nsga2" | "nsga-ii" | "nsga2_baseline" => Ok(Algorithm::Nsga2),
            _ => Err(Error::UnknownName {
                kind: "algorithm",
                name: name.to_string(),
                valid: "ocea, nsga2".into(),
            }),
        }
    }
}

/// What a run records besides its final archive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Record metrics every `cadence` generations (and always at the last one).
    /// Zero records only the initial and final generations.
    pub cadence: usize,
    /// Dump the full cluster state at each recorded generation.
    pub cluster_snapshots: bool,
    /// Reference-front resolution for IGD; `None` uses the problem default.
    pub front_resolution: Option<usize>,
    /// Verify the archive and cluster invariants after every generation.
    /// Always on in debug builds.
    pub check_invariants: bool,
    /// Record wall-clock seconds; when off, the column is written as zero.
    pub wall_time: bool,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            cadence: 1,
            cluster_snapshots: false,
            front_resolution: None,
            check_invariants: false,
            wall_time: true,
        }
    }
}

/// Everything one run needs besides the problem itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub problem: String,
    /// Population and archive size N.
    pub population: usize,
    /// Generations T.
    pub generations: usize,
    /// Cluster cap K_max.
    pub k_max: usize,
    /// Probability of mating inside the parent's own cluster.
    pub beta: f64,
    pub variation: VariationParams,
    pub seed: u64,
    pub trace: TraceOptions,
}

impl RunConfig {
    /// N = 100 (two objectives) or 105 (three), T = 300, K_max = 7,
    /// beta = 0.6, F = 0.6, CR = 1, p_m = 1/n, eta_m = 20.
    pub fn defaults(problem: &Problem, algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            problem: problem.name().to_string(),
            population: default_population(problem.m()),
            generations: 300,
            k_max: 7,
            beta: 0.6,
            variation: VariationParams {
                f: 0.6,
                cr: 1.0,
                pm: 1.0 / problem.n() as f64,
                eta_m: 20.0,
            },
            seed: 0,
            trace: TraceOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.population < 2 {
            problems.push(format!(
                "population must be at least 2, got {}",
                self.population
            ));
        }
        if self.generations < 1 {
            problems.push("generations must be at least 1".to_string());
        }
        if self.k_max < 1 || self.k_max > self.population {
            problems.push(format!(
                "k_max must lie in [1, population = {}], got {}",
                self.population, self.k_max
            ));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            problems.push(format!("beta must lie in [0, 1], got {}", self.beta));
        }
        if let Err(Error::Config(msg)) = self.variation.validate() {
            problems.push(msg);
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

/// 100 for two objectives, 105 for three.
pub fn default_population(m: usize) -> usize {
    if m >= 3 {
        105
    } else {
        100
    }
}

/// The record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub problem: String,
    pub seed: u64,
    pub generator: String,
    /// Metrics at generation 0 and at every recorded generation after it.
    pub reports: Vec<MetricReport>,
    pub final_archive: Vec<Solution>,
    /// Cluster state after the last generation (empty for the baseline).
    pub final_clusters: Vec<ClusterRecord>,
    /// Cluster states at recorded generations, when requested.
    pub cluster_snapshots: Vec<ClusterRecord>,
    /// Cluster count after every generation, starting with generation 0.
    pub cluster_counts: Vec<usize>,
    pub evaluations: usize,
}

impl RunTrace {
    pub fn final_report(&self) -> Option<&MetricReport> {
        self.reports.last()
    }
}

/// Runs the configured algorithm to completion.
pub fn run(config: &RunConfig, problem: &Problem) -> Result<RunTrace> {
    match config.algorithm {
        Algorithm::Ocea => Ocea::new(config.clone(), problem.clone())?.run(),
        Algorithm::Nsga2 => run_nsga2_baseline(config, problem),
    }
}

/// Per-run metric bookkeeping shared by both algorithms.
pub(crate) struct Recorder {
    front: Option<ReferenceFront>,
    started: Instant,
    options: TraceOptions,
    generations: usize,
    pub(crate) reports: Vec<MetricReport>,
}

impl Recorder {
    pub(crate) fn new(config: &RunConfig, problem: &Problem) -> Result<Self> {
        let front = if problem.has_analytic_front() {
            let resolution = config
                .trace
                .front_resolution
                .unwrap_or_else(|| problem.default_front_resolution());
            Some(problem.sample_reference_front(resolution)?)
        } else {
            None
        };
        Ok(Self {
            front,
            started: Instant::now(),
            options: config.trace.clone(),
            generations: config.generations,
            reports: Vec::new(),
        })
    }

    /// Whether generation `t` is recorded.
    pub(crate) fn records(&self, t: usize) -> bool {
        t == 0
            || t == self.generations
            || (self.options.cadence > 0 && t.is_multiple_of(self.options.cadence))
    }

    pub(crate) fn record(
        &mut self,
        t: usize,
        archive: &[Solution],
        problem: &Problem,
    ) -> Result<()> {
        if !self.records(t) {
            return Ok(());
        }
        let objectives: Vec<&[f64]> = archive.iter().map(|s| s.f.as_slice()).collect();
        let igd = match &self.front {
            Some(front) => igd(&objectives, front)?,
            None => f64::NAN,
        };
        let hv = if problem.metric_reference().is_some() && (2..=3).contains(&problem.m()) {
            hv_metric(&objectives, problem)?
        } else {
            f64::NAN
        };
        let wall_time = if self.options.wall_time {
            self.started.elapsed().as_secs_f64()
        } else {
            0.0
        };
        self.reports.push(MetricReport {
            generation: t,
            igd,
            hv,
            wall_time,
        });
        Ok(())
    }
}

pub(crate) fn generator_name() -> String {
    GENERATOR_NAME.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_problem_shape() {
        let zdt = Problem::builtin("ZDT1").unwrap();
        let c = RunConfig::defaults(&zdt, Algorithm::Ocea);
        assert_eq!((c.population, c.generations, c.k_max), (100, 300, 7));
        assert_eq!(
            (c.beta, c.variation.f, c.variation.cr, c.variation.eta_m),
            (0.6, 0.6, 1.0, 20.0)
        );
        assert_eq!(c.variation.pm, 0.1);
        c.validate().unwrap();
        let glt5 = Problem::builtin("GLT5").unwrap();
        assert_eq!(RunConfig::defaults(&glt5, Algorithm::Ocea).population, 105);
    }

    #[test]
    fn validation_collects_every_problem() {
        let zdt = Problem::builtin("ZDT1").unwrap();
        let mut c = RunConfig::defaults(&zdt, Algorithm::Ocea);
        c.population = 1;
        c.beta = 2.0;
        c.variation.cr = -1.0;
        let msg = c.validate().unwrap_err().to_string();
        assert!(
            msg.contains("population") && msg.contains("beta") && msg.contains("CR"),
            "{msg}"
        );
        let mut c = RunConfig::defaults(&zdt, Algorithm::Ocea);
        c.k_max = 101;
        assert!(c.validate().is_err());
    }

    #[test]
    fn algorithm_names() {
        assert_eq!(Algorithm::parse("OCEA").unwrap(), Algorithm::Ocea);
        assert_eq!(Algorithm::parse("nsga2").unwrap(), Algorithm::Nsga2);
        assert!(Algorithm::parse("moead")
            .unwrap_err()
            .to_string()
            .contains("ocea, nsga2"));
    }
}
