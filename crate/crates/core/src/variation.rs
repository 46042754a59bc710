//! Offspring generation: differential-evolution trial vector, boundary
//! repair, polynomial mutation, repair, evaluation.
//!
//! Random draws are consumed in a fixed order so that runs replay exactly:
//! two parent indices, then one crossover draw per component in index order,
//! then per component in index order a mutation-gate draw followed, when the
//! gate opens on a non-degenerate interval, by one shift draw.

use serde::{Deserialize, Serialize};

use crate::domain::{clamp_to_bounds, Bounds, DecisionVector, Solution, SolutionId};
use crate::problems::Problem;
use crate::rng::RandomSource;
use crate::{Error, Result};

/// Control parameters of the variation operators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationParams {
    /// Differential weight.
    pub f: f64,
    /// Crossover rate.
    pub cr: f64,
    /// Per-component mutation probability.
    pub pm: f64,
    /// Mutation distribution index.
    pub eta_m: f64,
}

impl VariationParams {
    pub fn new(f: f64, cr: f64, pm: f64, eta_m: f64) -> Result<Self> {
        let params = Self { f, cr, pm, eta_m };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !self.f.is_finite() {
            problems.push(format!("F must be finite, got {}", self.f));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            problems.push(format!("CR must lie in [0, 1], got {}", self.cr));
        }
        if !(0.0..=1.0).contains(&self.pm) {
            problems.push(format!("p_m must lie in [0, 1], got {}", self.pm));
        }
        if !(self.eta_m.is_finite() && self.eta_m >= 0.0) {
            problems.push(format!(
                "eta_m must be finite and non-negative, got {}",
                self.eta_m
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }
}

/// DE trial vector: component `i` becomes `x_i + F*(x1_i - x2_i)` when its
/// crossover draw is `<= CR`, and stays `x_i` otherwise.
pub fn de_trial(
    x: &[f64],
    x1: &[f64],
    x2: &[f64],
    params: &VariationParams,
    rng: &mut RandomSource,
) -> DecisionVector {
    x.iter()
        .zip(x1.iter().zip(x2))
        .map(|(&xi, (&a, &b))| {
            if rng.uniform() <= params.cr {
                xi + params.f * (a - b)
            } else {
                xi
            }
        })
        .collect()
}

/// Polynomial-mutation shift of one component for a given draw `r`:
/// returns `y + delta*(upper - lower)`, unclamped.
pub fn mutate_component(y: f64, lower: f64, upper: f64, eta_m: f64, r: f64) -> f64 {
    let width = upper - lower;
    if width.is_nan() || width <= 0.0 {
        return y;
    }
    let exponent = eta_m + 1.0;
    let delta = if r < 0.5 {
        let q = (upper - y) / width;
        (2.0 * r + (1.0 - 2.0 * r) * q.powf(exponent)).powf(1.0 / exponent) - 1.0
    } else {
        let q = (y - lower) / width;
        1.0 - (2.0 - 2.0 * r + (2.0 * r - 1.0) * q.powf(exponent)).powf(1.0 / exponent)
    };
    y + delta * width
}

/// Polynomial mutation of every component with probability `p_m`, followed
/// by boundary repair. Degenerate intervals (`a_i == b_i`) are left alone.
pub fn polynomial_mutation(
    y: &[f64],
    bounds: &Bounds,
    params: &VariationParams,
    rng: &mut RandomSource,
) -> DecisionVector {
    let mut out = y.to_vec();
    for (i, v) in out.iter_mut().enumerate() {
        if rng.uniform() < params.pm {
            let (a, b) = (bounds.lower()[i], bounds.upper()[i]);
            if a < b {
                let r = rng.uniform();
                *v = mutate_component(*v, a, b, params.eta_m, r);
            }
        }
    }
    bounds.clamp_in_place(&mut out);
    out
}

/// Breeds and evaluates one offspring around `base`.
///
/// Two parents are drawn uniformly without replacement from `pool`; pool
/// entries are distinct by position, so equal decision vectors at different
/// positions still count as two parents.
pub fn sol_gen(
    base: &[f64],
    pool: &[&Solution],
    params: &VariationParams,
    rng: &mut RandomSource,
    problem: &Problem,
    id: SolutionId,
) -> Result<Solution> {
    if pool.len() < 2 {
        return Err(Error::DegeneratePool(pool.len()));
    }
    let (i, j) = rng.distinct_pair(pool.len());
    let trial = de_trial(base, &pool[i].x, &pool[j].x, params, rng);
    let repaired = clamp_to_bounds(&trial, problem.bounds());
    let x = polynomial_mutation(&repaired, problem.bounds(), params, rng);
    let f = problem.evaluate(&x)?;
    Ok(Solution { id, x, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(f: f64, cr: f64, pm: f64) -> VariationParams {
        VariationParams::new(f, cr, pm, 20.0).unwrap()
    }

    fn sol(id: u64, x: Vec<f64>) -> Solution {
        Solution {
            id: SolutionId(id),
            x,
            f: vec![],
        }
    }

    #[test]
    fn de_examples() {
        let mut rng = RandomSource::new(0);
        let y = de_trial(
            &[0.5, 0.5],
            &[0.6, 0.2],
            &[0.4, 0.8],
            &params(0.5, 1.0, 0.0),
            &mut rng,
        );
        assert!((y[0] - 0.6).abs() < 1e-15 && (y[1] - 0.2).abs() < 1e-15);

        let y = de_trial(
            &[0.1, 0.9, 0.3],
            &[1.0; 3],
            &[0.0; 3],
            &params(0.5, 0.0, 0.0),
            &mut rng,
        );
        assert_eq!(y, vec![0.1, 0.9, 0.3]);

        let y = de_trial(&[0.3], &[0.3], &[0.3], &params(7.0, 1.0, 0.0), &mut rng);
        assert_eq!(y, vec![0.3]);
    }

    #[test]
    fn mutation_branch_endpoints() {
        // r = 0 lands on the lower bound, r -> 1 on the upper bound.
        assert!((mutate_component(0.3, -1.0, 2.0, 20.0, 0.0) - -1.0).abs() < 1e-12);
        assert!((mutate_component(0.3, -1.0, 2.0, 20.0, 1.0) - 2.0).abs() < 1e-12);
        // r = 0.5 leaves the component where it is.
        assert_eq!(mutate_component(0.3, -1.0, 2.0, 20.0, 0.5), 0.3);
        // Degenerate interval.
        assert_eq!(mutate_component(0.3, 0.3, 0.3, 20.0, 0.1), 0.3);
    }

    #[test]
    fn zero_mutation_probability_is_identity() {
        let b = Bounds::uniform(5, 0.0, 1.0);
        let y = vec![0.1, 0.2, 0.3, 0.4, 0.5];
        for seed in 0..20 {
            let mut rng = RandomSource::new(seed);
            assert_eq!(
                polynomial_mutation(&y, &b, &params(0.5, 1.0, 0.0), &mut rng),
                y
            );
        }
    }

    #[test]
    fn degenerate_box_component_unchanged() {
        let b = Bounds::new(vec![0.0, 0.5], vec![1.0, 0.5]).unwrap();
        let mut rng = RandomSource::new(5);
        for _ in 0..100 {
            let out = polynomial_mutation(&[0.5, 0.5], &b, &params(0.5, 1.0, 1.0), &mut rng);
            assert_eq!(out[1], 0.5);
        }
    }

    #[test]
    fn shift_sign_follows_branch() {
        let mut rng = RandomSource::new(9);
        for _ in 0..10_000 {
            let r = rng.uniform();
            let moved = mutate_component(0.5, 0.0, 1.0, 20.0, r);
            if r < 0.5 {
                assert!(moved < 0.5, "r={r} moved to {moved}");
            } else {
                assert!(moved >= 0.5, "r={r} moved to {moved}");
            }
        }
    }

    #[test]
    fn sol_gen_uses_the_only_pair() {
        let sch = Problem::builtin("SCH").unwrap();
        let p = sol(1, vec![1.0]);
        let q = sol(2, vec![3.0]);
        for seed in 0..50 {
            let mut rng = RandomSource::new(seed);
            // F = 1, CR = 1, no mutation: 0 + (x1 - x2) is either +2 or -2.
            let child = sol_gen(
                &[0.0],
                &[&p, &q],
                &params(1.0, 1.0, 0.0),
                &mut rng,
                &sch,
                SolutionId(9),
            )
            .unwrap();
            assert!(
                child.x == vec![2.0] || child.x == vec![-2.0],
                "{:?}",
                child.x
            );
            assert_eq!(child.f, sch.evaluate(&child.x).unwrap());
        }
    }

    #[test]
    fn sol_gen_equal_parents_clone_base() {
        let zdt = Problem::builtin("ZDT1").unwrap();
        let p = sol(1, vec![0.7; 10]);
        let q = sol(2, vec![0.7; 10]);
        let base = vec![0.25; 10];
        let mut rng = RandomSource::new(4);
        let child = sol_gen(
            &base,
            &[&p, &q],
            &params(0.6, 1.0, 0.0),
            &mut rng,
            &zdt,
            SolutionId(3),
        )
        .unwrap();
        assert_eq!(child.x, base);
    }

    #[test]
    fn sol_gen_forced_to_sch_boundary() {
        // x = 0.5 pushed to 2.0 by DE with F = 1: 0.5 + (2.5 - 1.0).
        let sch = Problem::builtin("SCH").unwrap();
        let p = sol(1, vec![2.5]);
        let q = sol(2, vec![1.0]);
        let mut seen = false;
        for seed in 0..20 {
            let mut rng = RandomSource::new(seed);
            let child = sol_gen(
                &[0.5],
                &[&p, &q],
                &params(1.0, 1.0, 0.0),
                &mut rng,
                &sch,
                SolutionId(3),
            )
            .unwrap();
            if child.x == vec![2.0] {
                assert_eq!(child.f, vec![4.0, 0.0]);
                seen = true;
            }
        }
        assert!(seen);
    }

    #[test]
    fn sol_gen_rejects_small_pool() {
        let sch = Problem::builtin("SCH").unwrap();
        let p = sol(1, vec![0.0]);
        let mut rng = RandomSource::new(0);
        let err = sol_gen(
            &[0.0],
            &[&p],
            &params(0.5, 1.0, 1.0),
            &mut rng,
            &sch,
            SolutionId(2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegeneratePool(1)));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(VariationParams::new(0.5, 1.5, 0.1, 20.0).is_err());
        assert!(VariationParams::new(f64::NAN, 0.5, 0.1, 20.0).is_err());
        assert!(VariationParams::new(0.5, 0.5, -0.1, 20.0).is_err());
        assert!(VariationParams::new(0.5, 0.5, 0.1, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn offspring_stay_in_bounds(
            seed in any::<u64>(),
            f in -10.0f64..10.0,
            cr in 0.0f64..=1.0,
            base in prop::collection::vec(0.0f64..=1.0, 10),
        ) {
            let zdt = Problem::builtin("ZDT1").unwrap();
            let a = sol(1, vec![1.0; 10]);
            let b = sol(2, vec![0.0; 10]);
            let mut rng = RandomSource::new(seed);
            let child = sol_gen(&base, &[&a, &b], &params(f, cr, 0.1), &mut rng, &zdt, SolutionId(3)).unwrap();
            prop_assert!(zdt.bounds().contains(&child.x));
        }

        #[test]
        fn no_crossover_no_mutation_clones(seed in any::<u64>(), base in prop::collection::vec(0.0f64..=1.0, 10)) {
            let zdt = Problem::builtin("ZDT1").unwrap();
            let a = sol(1, vec![1.0; 10]);
            let b = sol(2, vec![0.0; 10]);
            let mut rng = RandomSource::new(seed);
            let child = sol_gen(&base, &[&a, &b], &params(0.6, 0.0, 0.0), &mut rng, &zdt, SolutionId(3)).unwrap();
            prop_assert_eq!(child.x, base);
        }
    }
}
