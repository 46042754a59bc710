use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{Algorithm, RunConfig, TraceOptions};
use crate::problems::Problem;
use crate::{Error, Result};

/// Version of the experiment file layout and the output formats.
pub const FORMAT_VERSION: &str = "1";

/// Parameter keys accepted in `[params]`, `[algorithm.<name>]` and `[sweep]`.
pub const PARAM_KEYS: &[&str] = &[
    "population",
    "generations",
    "k_max",
    "beta",
    "f",
    "cr",
    "pm",
    "eta_m",
    "dimension",
];

/// Optional run parameters. Unset fields fall back to the problem-dependent
/// defaults of [`RunConfig::defaults`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub population: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cr: Option<f64>,
    /// Defaults to `1/n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_m: Option<f64>,
    /// Decision-space dimension; defaults to the problem's registered size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

impl Params {
    /// Fields set in `other` win.
    pub fn overlay(&self, other: &Params) -> Params {
        Params {
            population: other.population.or(self.population),
            generations: other.generations.or(self.generations),
            k_max: other.k_max.or(self.k_max),
            beta: other.beta.or(self.beta),
            f: other.f.or(self.f),
            cr: other.cr.or(self.cr),
            pm: other.pm.or(self.pm),
            eta_m: other.eta_m.or(self.eta_m),
            dimension: other.dimension.or(self.dimension),
        }
    }

    /// The problem and a validated run configuration: problem defaults with
    /// every set field applied. Seed and trace options keep their defaults.
    pub fn resolve(&self, algorithm: Algorithm, problem: &str) -> Result<(Problem, RunConfig)> {
        let problem = match self.dimension {
            Some(n) => Problem::builtin_with_dimension(problem, n)?,
            None => Problem::builtin(problem)?,
        };
        let mut config = RunConfig::defaults(&problem, algorithm);
        if let Some(v) = self.population {
            config.population = v;
        }
        if let Some(v) = self.generations {
            config.generations = v;
        }
        if let Some(v) = self.k_max {
            config.k_max = v;
        }
        if let Some(v) = self.beta {
            config.beta = v;
        }
        if let Some(v) = self.f {
            config.variation.f = v;
        }
        if let Some(v) = self.cr {
            config.variation.cr = v;
        }
        if let Some(v) = self.pm {
            config.variation.pm = v;
        }
        if let Some(v) = self.eta_m {
            config.variation.eta_m = v;
        }
        config.validate()?;
        Ok((problem, config))
    }

    /// Sets one parameter by key; integer keys reject fractional values.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
                Ok(value as usize)
            } else {
                Err(Error::Config(format!(
                    "{key} must be a non-negative integer, got {value}"
                )))
            }
        };
        match key {
            "population" => self.population = Some(count()?),
            "generations" => self.generations = Some(count()?),
            "k_max" => self.k_max = Some(count()?),
            "dimension" => self.dimension = Some(count()?),
            "beta" => self.beta = Some(value),
            "f" => self.f = Some(value),
            "cr" => self.cr = Some(value),
            "pm" => self.pm = Some(value),
            "eta_m" => self.eta_m = Some(value),
            _ => {
                return Err(Error::UnknownName {
                    kind: "parameter",
                    name: key.to_string(),
                    valid: PARAM_KEYS.join(", "),
                })
            }
        }
        Ok(())
    }
}

/// What each run records; mirrors [`TraceOptions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSpec {
    #[serde(default = "one")]
    pub cadence: usize,
    #[serde(default)]
    pub cluster_snapshots: bool,
    #[serde(default = "yes")]
    pub wall_time: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub front_resolution: Option<usize>,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

impl Default for TraceSpec {
    fn default() -> Self {
        Self {
            cadence: 1,
            cluster_snapshots: false,
            wall_time: true,
            front_resolution: None,
        }
    }
}

/// One experiment: every listed algorithm on every listed problem, `runs`
/// times each.
///
/// Run `r` of cell `(alg, prob)` uses [`derive_seed`]`(base_seed, alg, prob, r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub name: String,
    pub algorithms: Vec<String>,
    pub problems: Vec<String>,
    pub runs: usize,
    #[serde(default)]
    pub base_seed: u64,
    /// Algorithm the significance marks compare against; defaults to the first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    /// Output directory, relative to the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub trace: TraceSpec,
    #[serde(default)]
    pub params: Params,
    #[serde(default, rename = "algorithm")]
    pub algorithm_params: BTreeMap<String, Params>,
    /// Value lists per parameter key; `sweep` runs their cartesian product.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sweep: BTreeMap<String, Vec<f64>>,
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub algorithm: Algorithm,
    pub problem: Problem,
    pub run: usize,
    pub config: RunConfig,
}

impl ExperimentSpec {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Canonical TOML form; comments and key order of the source are dropped.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment spec serializes")
    }

    /// SHA-256 of the canonical form, hex encoded.
    pub fn hash(&self) -> String {
        hex(&Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn reference_algorithm(&self) -> Option<&str> {
        self.reference
            .as_deref()
            .or_else(|| self.algorithms.first().map(String::as_str))
    }

    /// Every problem found, as human-readable diagnostics. Empty means valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.algorithms.is_empty() {
            out.push("algorithms: at least one algorithm is required".to_string());
        }
        if self.problems.is_empty() {
            out.push("problems: at least one problem is required".to_string());
        }
        if self.runs == 0 {
            out.push("runs: must be at least 1".to_string());
        }
        let mut algorithms = Vec::new();
        for name in &self.algorithms {
            match Algorithm::parse(name) {
                Ok(a) if algorithms.contains(&a) => {
                    out.push(format!("algorithms: `{name}` is listed twice"))
                }
                Ok(a) => algorithms.push(a),
                Err(e) => out.push(format!("algorithms: {e}")),
            }
        }
        if let Some(reference) = &self.reference {
            match Algorithm::parse(reference) {
                Ok(a) if !algorithms.contains(&a) => out.push(format!(
                    "reference: `{reference}` is not among the listed algorithms"
                )),
                Err(e) => out.push(format!("reference: {e}")),
                Ok(_) => {}
            }
        }
        for name in self.algorithm_params.keys() {
            match Algorithm::parse(name) {
                Ok(a) if !algorithms.contains(&a) => {
                    out.push(format!("algorithm.{name}: not among the listed algorithms"))
                }
                Err(e) => out.push(format!("algorithm.{name}: {e}")),
                Ok(_) => {}
            }
        }
        if self.base_seed > i64::MAX as u64 {
            out.push(format!("base_seed: must not exceed {}", i64::MAX));
        }
        if self.trace.front_resolution == Some(0) {
            out.push("trace.front_resolution: must be positive".to_string());
        }
        for (key, values) in &self.sweep {
            if !PARAM_KEYS.contains(&key.as_str()) {
                out.push(format!(
                    "sweep.{key}: unknown parameter; valid: {}",
                    PARAM_KEYS.join(", ")
                ));
                continue;
            }
            if values.is_empty() {
                out.push(format!("sweep.{key}: empty value list"));
            }
            for &v in values {
                if let Err(e) = Params::default().set(key, v) {
                    out.push(format!("sweep.{key}: {e}"));
                }
            }
        }
        let points = if out.is_empty() {
            self.sweep_points()
        } else {
            Vec::new()
        };
        let points = if points.is_empty() {
            vec![SweepPoint::default()]
        } else {
            points
        };
        for problem in &self.problems {
            for point in &points {
                for &algorithm in &algorithms {
                    if let Err(e) = self.resolve_config(algorithm, problem, &point.params, 0) {
                        let at = if point.label.is_empty() {
                            String::new()
                        } else {
                            format!(" at {}", point.label)
                        };
                        let line = format!("{}/{problem}{at}: {e}", algorithm.name());
                        if !out.contains(&line) {
                            out.push(line);
                        }
                    }
                }
            }
        }
        out
    }

    /// Fails with every diagnostic joined when the spec is invalid.
    pub fn validate(&self) -> Result<()> {
        let diagnostics = self.diagnostics();
        if diagnostics.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(diagnostics.join("\n")))
        }
    }

    /// Grid points of the sweep, in lexicographic key order with the last key
    /// varying fastest. Empty when no sweep is declared.
    pub fn sweep_points(&self) -> Vec<SweepPoint> {
        if self.sweep.is_empty() {
            return Vec::new();
        }
        let mut points = vec![SweepPoint::default()];
        for (key, values) in &self.sweep {
            let mut next = Vec::with_capacity(points.len() * values.len());
            for point in &points {
                for &v in values {
                    let mut p = point.clone();
                    // Invalid values are reported by `diagnostics`.
                    let _ = p.params.set(key, v);
                    p.values.push((key.clone(), v));
                    p.label = p
                        .values
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(",");
                    next.push(p);
                }
            }
            points = next;
        }
        points
    }

    /// Problem and run configuration for one run, with `extra` applied last.
    pub fn resolve_config(
        &self,
        algorithm: Algorithm,
        problem: &str,
        extra: &Params,
        run: usize,
    ) -> Result<(Problem, RunConfig)> {
        let mut params = self.params.clone();
        for (name, overrides) in &self.algorithm_params {
            if Algorithm::parse(name).ok() == Some(algorithm) {
                params = params.overlay(overrides);
            }
        }
        let (problem, mut config) = params.overlay(extra).resolve(algorithm, problem)?;
        config.trace = TraceOptions {
            cadence: self.trace.cadence,
            cluster_snapshots: self.trace.cluster_snapshots,
            front_resolution: self.trace.front_resolution,
            check_invariants: false,
            wall_time: self.trace.wall_time,
        };
        config.seed = derive_seed(self.base_seed, algorithm, problem.name(), run);
        Ok((problem, config))
    }

    /// Every run of the experiment at one sweep point, cell by cell.
    pub fn resolve_runs(&self, extra: &Params) -> Result<Vec<ResolvedRun>> {
        let mut out = Vec::new();
        for name in &self.algorithms {
            let algorithm = Algorithm::parse(name)?;
            for problem in &self.problems {
                for run in 0..self.runs {
                    let (problem, config) = self.resolve_config(algorithm, problem, extra, run)?;
                    out.push(ResolvedRun {
                        algorithm,
                        problem,
                        run,
                        config,
                    });
                }
            }
        }
        Ok(out)
    }
}

/// One point of a parameter sweep.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepPoint {
    /// `key=value` pairs joined by commas; also the point's directory name.
    pub label: String,
    pub values: Vec<(String, f64)>,
    pub params: Params,
}

/// `base_seed` XOR the first eight bytes (little endian) of
/// SHA-256(`"<alg>\0<PROBLEM>\0<run>"`).
pub fn derive_seed(base_seed: u64, algorithm: Algorithm, problem: &str, run: usize) -> u64 {
    let text = format!(
        "{}\0{}\0{run}",
        algorithm.name(),
        problem.to_ascii_uppercase()
    );
    let digest = Sha256::digest(text.as_bytes());
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    base_seed ^ u64::from_le_bytes(head)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
