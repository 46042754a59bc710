use std::path::Path;

use crate::domain::{dominates, ObjectiveVector};
use crate::{Error, Result};

/// A finite sample of a Pareto front.
///
/// On disk: plaintext, one point per line, the objective values separated by
/// whitespace, no header.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFront {
    points: Vec<ObjectiveVector>,
}

impl ReferenceFront {
    /// Validates that the points are non-empty, share one length and are
    /// mutually non-dominated.
    pub fn new(points: Vec<ObjectiveVector>) -> Result<Self> {
        let m = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Contract("reference front is empty".into()))?;
        if m == 0 || points.iter().any(|p| p.len() != m) {
            return Err(Error::Contract(
                "reference front points differ in length".into(),
            ));
        }
        if let Some(bad) = points.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::Contract(format!(
                "reference front holds non-finite value {bad}"
            )));
        }
        for (i, a) in points.iter().enumerate() {
            if let Some(j) = points.iter().position(|b| dominates(b, a)) {
                return Err(Error::Contract(format!(
                    "reference front point {j} dominates point {i}"
                )));
            }
        }
        Ok(Self { points })
    }

    pub(crate) fn new_unchecked(points: Vec<ObjectiveVector>) -> Self {
        Self { points }
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let point = line
                .split_whitespace()
                .map(|tok| tok.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| format!("line {}: {e}", lineno + 1))?;
            points.push(point);
        }
        Self::new(points).map_err(|e| e.to_string())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Lossless text form, one point per line.
    pub fn to_text(&self) -> String {
        points_to_text(&self.points)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ObjectiveVector> {
        self.points
    }

    /// Number of points (the resolution R).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }
}

/// Formats a real with 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes points in the reference-front file format.
pub fn points_to_text(points: &[ObjectiveVector]) -> String {
    let mut out = String::new();
    for p in points {
        let line: Vec<String> = p.iter().map(|&v| format_real(v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `resolution` points of a curve parameterized over `t` in `[0, 1]`, evenly
/// spaced in `t`. Only for curves whose every point is Pareto-optimal.
pub(super) fn even_curve(
    resolution: usize,
    curve: impl Fn(f64) -> ObjectiveVector,
) -> Vec<ObjectiveVector> {
    (0..resolution)
        .map(|k| curve(grid(k, resolution)))
        .collect()
}

/// Like [`even_curve`] but for curves with dominated stretches: oversamples,
/// keeps the non-dominated subset and thins it evenly.
pub(super) fn filtered_curve(
    resolution: usize,
    curve: impl Fn(f64) -> ObjectiveVector,
) -> Vec<ObjectiveVector> {
    let candidates = 20 * resolution + 1;
    let kept = nondominated_filter(
        (0..candidates)
            .map(|k| curve(grid(k, candidates)))
            .collect(),
    );
    thin_evenly(kept, resolution)
}

/// A surface over `(s, t)` in `[0, 1]^2` sampled on a square grid of at least
/// `resolution` nodes, filtered to its distinct non-dominated points and
/// thinned to `resolution`.
pub(super) fn filtered_surface(
    resolution: usize,
    surface: impl Fn(f64, f64) -> ObjectiveVector,
) -> Vec<ObjectiveVector> {
    let side = ((2 * resolution) as f64).sqrt().ceil().max(1.0) as usize;
    let mut candidates = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            candidates.push(surface(grid(i, side), grid(j, side)));
        }
    }
    thin_evenly(nondominated_filter(candidates), resolution)
}

fn grid(k: usize, count: usize) -> f64 {
    if count <= 1 {
        0.0
    } else {
        k as f64 / (count - 1) as f64
    }
}

/// Keeps the distinct non-dominated points, in lexicographic order.
pub fn nondominated_filter(mut points: Vec<ObjectiveVector>) -> Vec<ObjectiveVector> {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    points.dedup();
    // In lexicographic order a dominator always precedes what it dominates.
    match points.first().map(Vec::len) {
        Some(2) => {
            let mut best = f64::INFINITY;
            points.retain(|p| {
                let keep = p[1] < best;
                best = best.min(p[1]);
                keep
            });
            points
        }
        Some(3) => {
            // Staircase over the last two objectives of everything seen so
            // far: increasing second objective, decreasing third.
            let mut stairs: Vec<(f64, f64)> = Vec::new();
            points.retain(|p| {
                let at = stairs.partition_point(|s| s.0 <= p[1]);
                if at > 0 && stairs[at - 1].1 <= p[2] {
                    return false;
                }
                let end = at + stairs[at..].iter().take_while(|s| s.1 >= p[2]).count();
                stairs.splice(at..end, [(p[1], p[2])]);
                true
            });
            points
        }
        _ => {
            let mut kept: Vec<ObjectiveVector> = Vec::with_capacity(points.len());
            for p in points {
                if !kept.iter().any(|q| dominates(q, &p)) {
                    kept.push(p);
                }
            }
            kept
        }
    }
}

fn thin_evenly(points: Vec<ObjectiveVector>, resolution: usize) -> Vec<ObjectiveVector> {
    let len = points.len();
    if len <= resolution {
        return points;
    }
    if resolution == 1 {
        return points.into_iter().take(1).collect();
    }
    (0..resolution)
        .map(|k| points[(k * (len - 1) + (resolution - 1) / 2) / (resolution - 1)].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let front = ReferenceFront::new(vec![vec![0.1, 0.9], vec![0.5, 0.3], vec![1.0 / 3.0, 0.4]])
            .unwrap();
        let back = ReferenceFront::parse(&front.to_text()).unwrap();
        assert_eq!(front, back);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(ReferenceFront::parse("").is_err());
        assert!(ReferenceFront::parse("1 2\n3\n").is_err());
        assert!(ReferenceFront::parse("1 x\n").is_err());
        assert!(
            ReferenceFront::parse("1 1\n2 2\n").is_err(),
            "dominated point accepted"
        );
    }

    #[test]
    fn filter_drops_dominated_and_duplicates() {
        let kept = nondominated_filter(vec![
            vec![2.0, 2.0],
            vec![1.0, 3.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![0.0, 5.0],
        ]);
        assert_eq!(kept, vec![vec![0.0, 5.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn filter_matches_pairwise_scan() {
        let mut rng = crate::rng::RandomSource::new(11);
        for m in 2..=4 {
            for _ in 0..50 {
                let pts: Vec<Vec<f64>> = (0..60)
                    .map(|_| (0..m).map(|_| (rng.uniform() * 5.0).floor()).collect())
                    .collect();
                let mut brute: Vec<Vec<f64>> = pts
                    .iter()
                    .filter(|p| !pts.iter().any(|q| dominates(q, p)))
                    .cloned()
                    .collect();
                brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
                brute.dedup();
                assert_eq!(nondominated_filter(pts), brute);
            }
        }
    }

    #[test]
    fn thinning_keeps_endpoints() {
        let pts: Vec<_> = (0..11).map(|i| vec![i as f64]).collect();
        let thin = thin_evenly(pts, 3);
        assert_eq!(thin, vec![vec![0.0], vec![5.0], vec![10.0]]);
    }
}
