//! Exact hypervolume for two and three objectives.
//!
//! Boxes are closed-open, `[p, r)`: a point contributes only when it is
//! strictly better than the reference point in every objective.

use crate::domain::{dominates, weakly_dominates};
use crate::rng::RandomSource;
use crate::{Error, Result};

fn check_dims<P: AsRef<[f64]>>(points: &[P], r: &[f64]) -> Result<()> {
    let m = r.len();
    if !(2..=3).contains(&m) {
        return Err(Error::Unsupported(format!(
            "exact hypervolume needs 2 or 3 objectives, got {m}"
        )));
    }
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != m) {
        return Err(Error::Contract(format!(
            "point of length {} against a reference of length {m}",
            p.as_ref().len()
        )));
    }
    Ok(())
}

fn inside(p: &[f64], r: &[f64]) -> bool {
    p.iter().zip(r).all(|(a, b)| a < b)
}

/// Lebesgue measure of the union of the boxes `[p, r)`.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], r: &[f64]) -> Result<f64> {
    check_dims(points, r)?;
    let kept: Vec<&[f64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| inside(p, r))
        .collect();
    Ok(if r.len() == 2 {
        hv2(kept, r)
    } else {
        hv3(kept, r)
    })
}

fn hv2(mut pts: Vec<&[f64]>, r: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut ceiling = r[1];
    let mut area = 0.0;
    for p in pts {
        if p[1] < ceiling {
            area += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    area
}

/// Dimension sweep over the third objective, with the covered area of the
/// first two maintained incrementally.
fn hv3(mut pts: Vec<&[f64]>, r: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].total_cmp(&b[2]));
    let mut stairs = Staircase::new(r[0], r[1]);
    let mut volume = 0.0;
    for (i, p) in pts.iter().enumerate() {
        stairs.insert(p[0], p[1]);
        let next = pts.get(i + 1).map_or(r[2], |q| q[2]);
        volume += stairs.area * (next - p[2]);
    }
    volume
}

/// Mutually non-dominated 2-D points, increasing in x and strictly
/// decreasing in y, with the area they dominate up to `(rx, ry)`.
struct Staircase {
    steps: Vec<(f64, f64)>,
    area: f64,
    rx: f64,
    ry: f64,
}

impl Staircase {
    fn new(rx: f64, ry: f64) -> Self {
        Self {
            steps: Vec::new(),
            area: 0.0,
            rx,
            ry,
        }
    }

    fn insert(&mut self, px: f64, py: f64) {
        let pos = self.steps.partition_point(|s| s.0 <= px);
        // Lowest covered y at x = px before the insertion.
        let mut level = if pos > 0 {
            self.steps[pos - 1].1
        } else {
            self.ry
        };
        if level <= py {
            return;
        }
        let start = if pos > 0 && self.steps[pos - 1].0 == px {
            pos - 1
        } else {
            pos
        };
        let mut x = px;
        let mut j = pos;
        loop {
            let next_x = self.steps.get(j).map_or(self.rx, |s| s.0);
            self.area += (next_x - x) * (level - py);
            match self.steps.get(j) {
                Some(s) if s.1 > py => {
                    level = s.1;
                    x = next_x;
                    j += 1;
                }
                _ => break,
            }
        }
        let end = start + self.steps[start..].iter().take_while(|s| s.1 >= py).count();
        self.steps.splice(start..end, [(px, py)]);
    }
}

/// The hypervolume each point adds on top of all the others.
///
/// Points outside the reference box, dominated points and points with an
/// exact duplicate contribute zero.
pub fn hv_contributions<P: AsRef<[f64]>>(points: &[P], r: &[f64]) -> Result<Vec<f64>> {
    check_dims(points, r)?;
    let pts: Vec<&[f64]> = points.iter().map(AsRef::as_ref).collect();
    let mut out = vec![0.0; pts.len()];
    let candidates: Vec<usize> = (0..pts.len()).filter(|&i| inside(pts[i], r)).collect();
    // Distinct non-dominated points carry the covered region; only those
    // without an equal twin can contribute anything.
    let mut front: Vec<usize> = Vec::new();
    for &i in &candidates {
        let dominated = candidates.iter().any(|&j| dominates(pts[j], pts[i]));
        if !dominated && !front.iter().any(|&j| pts[j] == pts[i]) {
            front.push(i);
        }
    }
    let twinned = |i: usize| candidates.iter().any(|&j| j != i && pts[j] == pts[i]);
    // Removing a point can expose points it dominates, so the closed form
    // only applies when nothing inside `r` is strictly dominated.
    let clean = candidates
        .iter()
        .all(|&i| front.iter().any(|&j| pts[j] == pts[i]));
    if r.len() == 2 && clean {
        let mut order = front;
        order.sort_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0]));
        for (w, &i) in order.iter().enumerate() {
            let right = order.get(w + 1).map_or(r[0], |&j| pts[j][0]);
            let above = if w == 0 { r[1] } else { pts[order[w - 1]][1] };
            if !twinned(i) {
                out[i] = (right - pts[i][0]) * (above - pts[i][1]);
            }
        }
    } else {
        let pool: &[usize] = if clean { &front } else { &candidates };
        let volume = |subset: Vec<&[f64]>| {
            if r.len() == 2 {
                hv2(subset, r)
            } else {
                hv3(subset, r)
            }
        };
        let total = volume(pool.iter().map(|&i| pts[i]).collect());
        for &i in &front {
            if !twinned(i) {
                let others = pool.iter().filter(|&&j| j != i).map(|&j| pts[j]).collect();
                out[i] = (total - volume(others)).max(0.0);
            }
        }
    }
    Ok(out)
}

/// Contribution of `points[index]`; see [`hv_contributions`].
pub fn hv_contribution<P: AsRef<[f64]>>(index: usize, points: &[P], r: &[f64]) -> Result<f64> {
    if index >= points.len() {
        return Err(Error::Contract(format!(
            "index {index} out of {} points",
            points.len()
        )));
    }
    Ok(hv_contributions(points, r)?[index])
}

/// A Monte-Carlo hypervolume estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

/// Uniform sampling of the box spanned by the componentwise minimum of the
/// contributing points and `r`. Works for any number of objectives.
pub fn mc_hypervolume<P: AsRef<[f64]>>(
    points: &[P],
    r: &[f64],
    samples: usize,
    rng: &mut RandomSource,
) -> McEstimate {
    let pts: Vec<&[f64]> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| inside(p, r))
        .collect();
    if pts.is_empty() || samples == 0 {
        return McEstimate {
            value: 0.0,
            std_error: 0.0,
        };
    }
    let m = r.len();
    let low: Vec<f64> = (0..m)
        .map(|d| pts.iter().map(|p| p[d]).fold(f64::INFINITY, f64::min))
        .collect();
    let box_volume: f64 = low.iter().zip(r).map(|(a, b)| b - a).product();
    let mut sample = vec![0.0; m];
    let mut hits = 0usize;
    for _ in 0..samples {
        for d in 0..m {
            sample[d] = rng.uniform_in(low[d], r[d]);
        }
        if pts.iter().any(|p| weakly_dominates(p, &sample)) {
            hits += 1;
        }
    }
    let n = samples as f64;
    let share = hits as f64 / n;
    McEstimate {
        value: box_volume * share,
        std_error: box_volume * (share * (1.0 - share) / n).sqrt(),
    }
}
