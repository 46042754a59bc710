use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// The two reported indicators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Igd,
    Hv,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Igd, Metric::Hv];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Igd => "igd",
            Metric::Hv => "hv",
        }
    }

    pub fn parse(name: &str) -> Option<Metric> {
        match name {
            "igd" => Some(Metric::Igd),
            "hv" => Some(Metric::Hv),
            _ => None,
        }
    }

    /// IGD is minimized, HV maximized.
    pub fn sense(self) -> Sense {
        match self {
            Metric::Igd => Sense::Minimize,
            Metric::Hv => Sense::Maximize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Whether `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

/// Outcome of a two-sample comparison, from the first sample's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Significance {
    Better,
    Worse,
    Similar,
}

impl Significance {
    /// Table mark: `†` better, `§` worse, `≈` similar.
    pub fn mark(self) -> &'static str {
        match self {
            Significance::Better => "†",
            Significance::Worse => "§",
            Significance::Similar => "≈",
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Significance::Better => "better",
            Significance::Worse => "worse",
            Significance::Similar => "similar",
        })
    }
}

/// Rank-sum statistics of sample `a` against `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSum {
    /// Mann-Whitney U of `a`: its rank sum minus `n_a (n_a + 1) / 2`.
    pub u: f64,
    /// Standardized U; zero when every value is tied.
    pub z: f64,
    /// Two-sided p-value from the normal approximation.
    pub p_value: f64,
}

/// Two-sided rank-sum test with midranks for ties, the tie-corrected
/// variance and the normal approximation (no continuity correction).
pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<RankSum> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::Contract(format!(
            "rank-sum test needs at least two values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Contract("rank-sum test sample holds NaN".into()));
    }
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let total = pooled.len();
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < total {
        let mut end = start + 1;
        while end < total && pooled[end].0 == pooled[start].0 {
            end += 1;
        }
        let t = (end - start) as f64;
        let midrank = (start + end + 1) as f64 / 2.0;
        rank_sum_a += midrank * pooled[start..end].iter().filter(|p| p.1).count() as f64;
        tie_term += t * t * t - t;
        start = end;
    }
    let (n1, n2, n) = (a.len() as f64, b.len() as f64, total as f64);
    let u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return Ok(RankSum {
            u,
            z: 0.0,
            p_value: 1.0,
        });
    }
    let z = (u - n1 * n2 / 2.0) / variance.sqrt();
    let normal = Normal::standard();
    let p_value = (2.0 * normal.cdf(-z.abs())).min(1.0);
    Ok(RankSum { u, z, p_value })
}

/// Whether `a` is significantly better than, worse than or similar to `b` at
/// level `alpha`. Direction follows the medians, and the rank sums when the
/// medians coincide.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64, sense: Sense) -> Result<Significance> {
    let test = rank_sum(a, b)?;
    if test.p_value >= alpha {
        return Ok(Significance::Similar);
    }
    let (ma, mb) = (median(a), median(b));
    let a_better = if ma != mb {
        sense.better(ma, mb)
    } else {
        // Positive z: `a` tends to the larger values.
        match sense {
            Sense::Minimize => test.z < 0.0,
            Sense::Maximize => test.z > 0.0,
        }
    };
    Ok(if a_better {
        Significance::Better
    } else {
        Significance::Worse
    })
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// NaN for an empty sample.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (`n - 1` denominator); zero for one value.
pub fn std_dev(values: &[f64]) -> f64 {
    match values.len() {
        0 => f64::NAN,
        1 => 0.0,
        n => {
            let mu = mean(values);
            (values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (n - 1) as f64).sqrt()
        }
    }
}

/// Ranks 1..=len of `means` under `sense`. Ties and NaNs keep input order;
/// NaNs rank last.
pub fn rank(means: &[f64], sense: Sense) -> Vec<usize> {
    let mut order: Vec<usize> = (0..means.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (means[i], means[j]);
        match (a.is_nan(), b.is_nan()) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            _ => match sense {
                Sense::Minimize => a.total_cmp(&b),
                Sense::Maximize => b.total_cmp(&a),
            },
        }
    });
    let mut ranks = vec![0; means.len()];
    for (position, &i) in order.iter().enumerate() {
        ranks[i] = position + 1;
    }
    ranks
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub algorithm: String,
    pub problem: String,
    pub metric: Metric,
    /// Successful runs contributing values.
    pub runs: usize,
    pub failures: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub rank: usize,
    /// The reference algorithm against this one: `better` means the
    /// reference is significantly better. `None` on the reference's own row
    /// and where a sample is too small to test.
    pub mark: Option<Significance>,
}

/// Final metric values of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellValues {
    pub algorithm: String,
    pub problem: String,
    pub igd: Vec<f64>,
    pub hv: Vec<f64>,
    pub failures: usize,
}

impl CellValues {
    pub fn values(&self, metric: Metric) -> &[f64] {
        match metric {
            Metric::Igd => &self.igd,
            Metric::Hv => &self.hv,
        }
    }
}

/// Summary rows in `problems x metrics x algorithms` order. Cells must be
/// given for every (algorithm, problem) pair.
pub fn summarize(
    cells: &[CellValues],
    algorithms: &[String],
    problems: &[String],
    reference: Option<&str>,
    alpha: f64,
) -> Vec<StatRow> {
    let mut rows = Vec::new();
    for problem in problems {
        for metric in Metric::ALL {
            let samples: Vec<(&String, Option<&CellValues>)> = algorithms
                .iter()
                .map(|a| {
                    (
                        a,
                        cells
                            .iter()
                            .find(|c| &c.algorithm == a && &c.problem == problem),
                    )
                })
                .collect();
            // NaN values (no reference front or point) are left out of the statistics.
            let finite: Vec<Vec<f64>> = samples
                .iter()
                .map(|(_, c)| {
                    c.map_or(Vec::new(), |c| {
                        c.values(metric)
                            .iter()
                            .copied()
                            .filter(|v| !v.is_nan())
                            .collect()
                    })
                })
                .collect();
            let means: Vec<f64> = finite.iter().map(|v| mean(v)).collect();
            let ranks = rank(&means, metric.sense());
            let reference_values = reference
                .and_then(|r| algorithms.iter().position(|a| a == r))
                .map(|i| &finite[i]);
            for (i, (algorithm, cell)) in samples.iter().enumerate() {
                let mark = match reference_values {
                    Some(ref_values) if Some(algorithm.as_str()) != reference => {
                        wilcoxon_rank_sum(ref_values, &finite[i], alpha, metric.sense()).ok()
                    }
                    _ => None,
                };
                rows.push(StatRow {
                    algorithm: (*algorithm).clone(),
                    problem: problem.clone(),
                    metric,
                    runs: finite[i].len(),
                    failures: cell.map_or(0, |c| c.failures),
                    mean: means[i],
                    std_dev: std_dev(&finite[i]),
                    rank: ranks[i],
                    mark,
                });
            }
        }
    }
    rows
}

/// Scientific notation with four significant digits and a signed two-digit
/// exponent, e.g. `1.235e-02`.
pub fn sci4(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.3e}");
    let (mantissa, exponent) = s.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}
