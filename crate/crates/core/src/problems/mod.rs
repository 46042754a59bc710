//! Problem registry: analytic benchmarks, the GLT and WFG suites, and
//! reference fronts for the IGD metric.
//!
//! Registered names: `SCH`, `ZDT1`, `GLT1`..`GLT6`, `WFG1`..`WFG9`.

mod front;
mod glt;
mod wfg;

use std::fmt;
use std::sync::Arc;

use crate::domain::{Bounds, ObjectiveVector};
use crate::{Error, Result};

pub use front::{format_real, nondominated_filter, points_to_text, ReferenceFront};

/// Every built-in problem name, in registry order.
pub const PROBLEM_NAMES: &[&str] = &[
    "SCH", "ZDT1", "GLT1", "GLT2", "GLT3", "GLT4", "GLT5", "GLT6", "WFG1", "WFG2", "WFG3", "WFG4",
    "WFG5", "WFG6", "WFG7", "WFG8", "WFG9",
];

/// Decision dimension of the GLT slots.
pub const GLT_DIMENSION: usize = 10;
/// Decision dimension of the WFG slots.
pub const WFG_DIMENSION: usize = 30;
/// Position-related WFG parameters for two objectives; the rest are distance-related.
pub const WFG_POSITION_PARAMS: usize = 4;

type ObjectiveFn = dyn Fn(&[f64]) -> ObjectiveVector + Send + Sync;

#[derive(Clone)]
enum Kind {
    Sch,
    Zdt1,
    Glt(u8),
    Wfg {
        index: u8,
        k: usize,
    },
    Custom {
        objectives: Arc<ObjectiveFn>,
        front: Option<Arc<ReferenceFront>>,
    },
}

/// A box-constrained minimization problem.
///
/// Immutable after construction and cheap to clone; evaluation is pure, so one
/// definition can serve many concurrent runs.
#[derive(Clone)]
pub struct Problem {
    name: String,
    m: usize,
    bounds: Bounds,
    metric_reference: Option<Vec<f64>>,
    kind: Kind,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("m", &self.m)
            .finish()
    }
}

impl Problem {
    /// Looks up a registered problem at its default dimension.
    pub fn builtin(name: &str) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        let n = match upper.as_str() {
            "SCH" => 1,
            "ZDT1" => 10,
            s if s.starts_with("GLT") => GLT_DIMENSION,
            s if s.starts_with("WFG") => WFG_DIMENSION,
            _ => return Err(unknown_problem(name)),
        };
        Self::builtin_with_dimension(name, n)
    }

    /// Looks up a registered problem with an explicit decision dimension.
    pub fn builtin_with_dimension(name: &str, n: usize) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        let too_small = |min: usize| {
            Error::Config(format!(
                "{upper} needs at least {min} decision variables, got {n}"
            ))
        };
        let problem = match upper.as_str() {
            "SCH" => {
                if n != 1 {
                    return Err(Error::Config(format!(
                        "SCH has exactly one decision variable, got {n}"
                    )));
                }
                Self {
                    name: upper,
                    m: 2,
                    bounds: Bounds::uniform(1, -10.0, 10.0),
                    metric_reference: Some(vec![4.4, 4.4]),
                    kind: Kind::Sch,
                }
            }
            "ZDT1" => {
                if n < 2 {
                    return Err(too_small(2));
                }
                Self {
                    name: upper,
                    m: 2,
                    bounds: Bounds::uniform(n, 0.0, 1.0),
                    metric_reference: Some(vec![1.1, 1.1]),
                    kind: Kind::Zdt1,
                }
            }
            s if s.len() == 4 && s.starts_with("GLT") => {
                let index: u8 = s[3..].parse().map_err(|_| unknown_problem(name))?;
                if !(1..=6).contains(&index) {
                    return Err(unknown_problem(name));
                }
                let m = glt::objectives(index);
                if n < m + 1 {
                    return Err(too_small(m + 1));
                }
                Self {
                    name: upper,
                    m,
                    bounds: glt::bounds(index, n),
                    metric_reference: Some(glt::metric_reference(index)),
                    kind: Kind::Glt(index),
                }
            }
            s if s.len() == 4 && s.starts_with("WFG") => {
                let index: u8 = s[3..].parse().map_err(|_| unknown_problem(name))?;
                if !(1..=9).contains(&index) {
                    return Err(unknown_problem(name));
                }
                let k = WFG_POSITION_PARAMS;
                let l = n
                    .checked_sub(k)
                    .filter(|&l| l >= 2)
                    .ok_or_else(|| too_small(k + 2))?;
                if matches!(index, 2 | 3) && l % 2 != 0 {
                    return Err(Error::Config(format!(
                        "{upper} needs an even number of distance parameters, got {l}"
                    )));
                }
                Self {
                    name: upper,
                    m: 2,
                    bounds: wfg::bounds(n),
                    metric_reference: Some(wfg::metric_reference()),
                    kind: Kind::Wfg { index, k },
                }
            }
            _ => return Err(unknown_problem(name)),
        };
        Ok(problem)
    }

    /// A user-supplied problem. `front`, when given, serves as its reference front.
    pub fn custom<F>(
        name: impl Into<String>,
        bounds: Bounds,
        m: usize,
        objectives: F,
        metric_reference: Option<Vec<f64>>,
        front: Option<ReferenceFront>,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> ObjectiveVector + Send + Sync + 'static,
    {
        if m == 0 || bounds.dim() == 0 {
            return Err(Error::Contract(
                "problem needs at least one variable and one objective".into(),
            ));
        }
        if let Some(r) = &metric_reference {
            if r.len() != m {
                return Err(Error::Contract(format!(
                    "metric reference has {} components, expected {m}",
                    r.len()
                )));
            }
        }
        if let Some(front) = &front {
            if front.objectives() != m {
                return Err(Error::Contract(format!(
                    "reference front has {} objectives, expected {m}",
                    front.objectives()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            m,
            bounds,
            metric_reference,
            kind: Kind::Custom {
                objectives: Arc::new(objectives),
                front: front.map(Arc::new),
            },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Decision dimension.
    pub fn n(&self) -> usize {
        self.bounds.dim()
    }

    /// Objective count.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// The fixed reference point used by the hypervolume metric.
    pub fn metric_reference(&self) -> Option<&[f64]> {
        self.metric_reference.as_deref()
    }

    /// Default reference-front resolution: 1000 points for two objectives,
    /// 10000 for three or more.
    pub fn default_front_resolution(&self) -> usize {
        if self.m <= 2 {
            1000
        } else {
            10_000
        }
    }

    /// Evaluates `x`, which the caller has already repaired into the box.
    pub fn evaluate(&self, x: &[f64]) -> Result<ObjectiveVector> {
        if x.len() != self.n() {
            return Err(Error::Contract(format!(
                "{}: decision vector of length {}, expected {}",
                self.name,
                x.len(),
                self.n()
            )));
        }
        let f = match &self.kind {
            Kind::Sch => vec![x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)],
            Kind::Zdt1 => zdt1(x),
            Kind::Glt(index) => glt::evaluate(*index, x),
            Kind::Wfg { index, k } => wfg::evaluate(*index, x, *k),
            Kind::Custom { objectives, .. } => objectives(x),
        };
        if f.len() != self.m {
            return Err(Error::Contract(format!(
                "{}: objective map returned {} values, expected {}",
                self.name,
                f.len(),
                self.m
            )));
        }
        if let Some((component, &value)) = f.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Evaluation {
                problem: self.name.clone(),
                component,
                value,
            });
        }
        Ok(f)
    }

    /// Whether [`Problem::sample_reference_front`] can produce a front.
    pub fn has_analytic_front(&self) -> bool {
        match &self.kind {
            Kind::Custom { front, .. } => front.is_some(),
            _ => true,
        }
    }

    /// Samples `resolution` Pareto-front points, evenly spaced in the front's
    /// natural parameterization.
    ///
    /// Fronts with dominated or disconnected stretches are oversampled,
    /// filtered to the non-dominated subset and thinned evenly to
    /// `resolution` points. Degenerate three-objective parameterizations can
    /// collapse onto fewer distinct points.
    pub fn sample_reference_front(&self, resolution: usize) -> Result<ReferenceFront> {
        if resolution == 0 {
            return Err(Error::Contract(
                "reference front resolution must be positive".into(),
            ));
        }
        let points = match &self.kind {
            Kind::Sch => front::even_curve(resolution, |t| {
                let s = 2.0 * t;
                vec![s * s, (s - 2.0) * (s - 2.0)]
            }),
            Kind::Zdt1 => front::even_curve(resolution, |t| vec![t, 1.0 - t.sqrt()]),
            Kind::Glt(index) => glt::front(*index, resolution),
            Kind::Wfg { index, .. } => wfg::front(*index, resolution),
            Kind::Custom {
                front: Some(front), ..
            } => return Ok(front.as_ref().clone()),
            Kind::Custom { front: None, .. } => {
                return Err(Error::Unsupported(format!(
                    "{} has no analytic Pareto front; load one from a file",
                    self.name
                )))
            }
        };
        Ok(ReferenceFront::new_unchecked(points))
    }
}

fn zdt1(x: &[f64]) -> ObjectiveVector {
    let f1 = x[0];
    let g = 1.0 + 9.0 * x[1..].iter().sum::<f64>() / (x.len() - 1) as f64;
    vec![f1, g * (1.0 - (f1 / g).sqrt())]
}

fn unknown_problem(name: &str) -> Error {
    Error::UnknownName {
        kind: "problem",
        name: name.to_string(),
        valid: PROBLEM_NAMES.join(", "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::dominates;
    use crate::rng::RandomSource;

    #[test]
    fn sch_examples() {
        let p = Problem::builtin("SCH").unwrap();
        assert_eq!(p.evaluate(&[0.0]).unwrap(), vec![0.0, 4.0]);
        assert_eq!(p.evaluate(&[2.0]).unwrap(), vec![4.0, 0.0]);
        assert_eq!(p.evaluate(&[1.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn front_examples() {
        let sch = Problem::builtin("SCH").unwrap();
        let f = sch.sample_reference_front(3).unwrap();
        assert_eq!(
            f.points(),
            &[vec![0.0, 4.0], vec![1.0, 1.0], vec![4.0, 0.0]]
        );

        let zdt = Problem::builtin("ZDT1").unwrap();
        let f = zdt.sample_reference_front(2).unwrap();
        assert_eq!(f.points(), &[vec![0.0, 1.0], vec![1.0, 0.0]]);

        for name in PROBLEM_NAMES {
            let p = Problem::builtin(name).unwrap();
            assert_eq!(p.sample_reference_front(1).unwrap().len(), 1, "{name}");
        }
    }

    #[test]
    fn unknown_problem_lists_valid_names() {
        let err = Problem::builtin("DTLZ2").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("GLT3") && msg.contains("WFG9"), "{msg}");
        assert!(Problem::builtin("GLT7").is_err());
        assert!(Problem::builtin("WFG0").is_err());
    }

    #[test]
    fn non_finite_objective_names_component() {
        let p = Problem::custom(
            "bad",
            Bounds::uniform(1, 0.0, 1.0),
            2,
            |x| vec![x[0], f64::NAN],
            None,
            None,
        )
        .unwrap();
        match p.evaluate(&[0.5]) {
            Err(Error::Evaluation { component, .. }) => assert_eq!(component, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            p.sample_reference_front(10),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn registry_dimensions_and_references() {
        for name in PROBLEM_NAMES {
            let p = Problem::builtin(name).unwrap();
            let expected_n = match *name {
                "SCH" => 1,
                "ZDT1" => 10,
                s if s.starts_with("GLT") => 10,
                _ => 30,
            };
            assert_eq!(p.n(), expected_n, "{name}");
            assert_eq!(p.metric_reference().unwrap().len(), p.m(), "{name}");
        }
        assert_eq!(
            Problem::builtin("GLT1").unwrap().metric_reference(),
            Some(&[2.0, 2.0][..])
        );
        assert_eq!(
            Problem::builtin("GLT2").unwrap().metric_reference(),
            Some(&[2.0, 11.0][..])
        );
        assert_eq!(
            Problem::builtin("GLT3").unwrap().metric_reference(),
            Some(&[2.0, 2.0][..])
        );
        assert_eq!(
            Problem::builtin("GLT4").unwrap().metric_reference(),
            Some(&[2.0, 3.0][..])
        );
        assert_eq!(
            Problem::builtin("GLT5").unwrap().metric_reference(),
            Some(&[2.0, 2.0, 2.0][..])
        );
        assert_eq!(
            Problem::builtin("GLT6").unwrap().metric_reference(),
            Some(&[2.0, 2.0, 2.0][..])
        );
    }

    #[test]
    fn random_in_bounds_points_evaluate_finite() {
        let mut rng = RandomSource::new(3);
        for name in PROBLEM_NAMES {
            let p = Problem::builtin(name).unwrap();
            for _ in 0..10_000 / PROBLEM_NAMES.len() + 1 {
                let x: Vec<f64> = (0..p.n())
                    .map(|i| rng.uniform_in(p.bounds().lower()[i], p.bounds().upper()[i]))
                    .collect();
                let f = p.evaluate(&x).unwrap();
                assert_eq!(f.len(), p.m());
            }
            // Corners as well.
            p.evaluate(p.bounds().lower()).unwrap();
            p.evaluate(p.bounds().upper()).unwrap();
        }
    }

    #[test]
    fn sampled_fronts_are_mutually_nondominated() {
        for name in PROBLEM_NAMES {
            let p = Problem::builtin(name).unwrap();
            let resolution = if p.m() == 2 { 500 } else { 900 };
            let front = p.sample_reference_front(resolution).unwrap();
            if p.m() == 2 {
                assert_eq!(front.len(), resolution, "{name}");
            }
            let pts = front.points();
            for a in pts {
                for b in pts {
                    assert!(!dominates(a, b), "{name}: {a:?} dominates {b:?}");
                }
            }
        }
    }
}
