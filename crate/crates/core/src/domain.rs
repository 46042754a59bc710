//! Decision and objective vectors, Pareto dominance and box bounds.
//!
//! All objectives are minimized. Reals are `f64` throughout.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point in the decision space, one coordinate per decision variable.
pub type DecisionVector = Vec<f64>;

/// The image of a decision vector under the objective map.
pub type ObjectiveVector = Vec<f64>;

/// Pareto dominance for minimization: `u` is no worse than `v` everywhere and
/// strictly better somewhere.
///
/// Panics when the lengths differ; use [`try_dominates`] for a checked variant.
pub fn dominates(u: &[f64], v: &[f64]) -> bool {
    assert_eq!(
        u.len(),
        v.len(),
        "dominance between vectors of different length"
    );
    let mut strictly_better = false;
    for (a, b) in u.iter().zip(v) {
        if a > b {
            return false;
        }
        if a < b {
            strictly_better = true;
        }
    }
    strictly_better
}

pub fn try_dominates(u: &[f64], v: &[f64]) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Contract(format!(
            "dominance between vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    Ok(dominates(u, v))
}

/// `u` is componentwise no worse than `v` (equality allowed everywhere).
pub fn weakly_dominates(u: &[f64], v: &[f64]) -> bool {
    u.iter().zip(v).all(|(a, b)| a <= b)
}

/// Box constraints `[lower_i, upper_i]` on every decision variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Contract(format!(
                "bounds with {} lower and {} upper limits",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len())
            .find(|&i| lower[i].is_nan() || upper[i].is_nan() || lower[i] > upper[i])
        {
            return Err(Error::Contract(format!(
                "bound {i} has lower {} above upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The same interval on every one of `n` dimensions.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Self {
        Self::new(vec![lower; n], vec![upper; n]).expect("lower <= upper")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (a, b))| a <= v && v <= b)
    }

    /// Clamps every component into its interval in place.
    pub fn clamp_in_place(&self, x: &mut [f64]) {
        for (v, (a, b)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            if *v < *a {
                *v = *a;
            } else if *v > *b {
                *v = *b;
            }
        }
    }
}

/// Boundary repair: components below `a_i` become `a_i`, above `b_i` become `b_i`.
pub fn clamp_to_bounds(x: &[f64], bounds: &Bounds) -> DecisionVector {
    let mut y = x.to_vec();
    bounds.clamp_in_place(&mut y);
    y
}

/// Identity of a solution within one run. Ids are never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionId(pub u64);

/// An evaluated candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub id: SolutionId,
    pub x: DecisionVector,
    pub f: ObjectiveVector,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]));
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]));
        assert!(!dominates(&[0.0, 3.0], &[1.0, 1.0]));
        assert!(!dominates(&[1.0, 1.0], &[0.0, 3.0]));
    }

    #[test]
    fn dominance_length_mismatch_is_an_error() {
        assert!(matches!(
            try_dominates(&[1.0], &[1.0, 2.0]),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn clamp_examples() {
        let unit = Bounds::uniform(2, 0.0, 1.0);
        assert_eq!(clamp_to_bounds(&[1.2, -0.1], &unit), vec![1.0, 0.0]);
        assert_eq!(clamp_to_bounds(&[0.5, 0.5], &unit), vec![0.5, 0.5]);
        let wide = Bounds::uniform(1, -5.0, 5.0);
        assert_eq!(clamp_to_bounds(&[-5.0], &wide), vec![-5.0]);
    }

    #[test]
    fn inverted_bounds_rejected() {
        assert!(Bounds::new(vec![1.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![0.0, 1.0]).is_err());
    }

    fn small_vec(m: usize) -> impl Strategy<Value = Vec<f64>> {
        // A coarse grid so that ties actually occur.
        prop::collection::vec((0i32..4).prop_map(f64::from), m)
    }

    proptest! {
        #[test]
        fn dominance_is_a_strict_partial_order(
            (u, v, w) in (1usize..4).prop_flat_map(|m| (small_vec(m), small_vec(m), small_vec(m)))
        ) {
            prop_assert!(!dominates(&u, &u));
            prop_assert!(!(dominates(&u, &v) && dominates(&v, &u)));
            if dominates(&u, &v) && dominates(&v, &w) {
                prop_assert!(dominates(&u, &w));
            }
        }

        #[test]
        fn clamp_is_idempotent(x in prop::collection::vec(-10.0f64..10.0, 3)) {
            let b = Bounds::new(vec![-1.0, 0.0, 2.0], vec![1.0, 0.0, 5.0]).unwrap();
            let once = clamp_to_bounds(&x, &b);
            prop_assert!(b.contains(&once));
            prop_assert_eq!(clamp_to_bounds(&once, &b), once);
        }
    }
}
