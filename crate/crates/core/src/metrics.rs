//! Performance indicators: inverted generational distance and hypervolume
//! against a problem's fixed metric reference point.
//!
//! No normalization is applied; both work in raw objective units.

use serde::{Deserialize, Serialize};

use crate::problems::{Problem, ReferenceFront};
use crate::selection::hypervolume;
use crate::{Error, Result};

/// Indicator values of one archive at one generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub generation: usize,
    pub igd: f64,
    pub hv: f64,
    /// Seconds since the run started.
    pub wall_time: f64,
}

/// Mean over reference points of the Euclidean distance to the nearest
/// approximation point.
pub fn igd<P: AsRef<[f64]>>(approx: &[P], reference: &ReferenceFront) -> Result<f64> {
    igd_points(approx, reference.points())
}

pub fn igd_points<P: AsRef<[f64]>, Q: AsRef<[f64]>>(approx: &[P], reference: &[Q]) -> Result<f64> {
    if approx.is_empty() || reference.is_empty() {
        return Err(Error::Contract(
            "IGD needs non-empty approximation and reference sets".into(),
        ));
    }
    let m = reference[0].as_ref().len();
    if approx.iter().any(|q| q.as_ref().len() != m)
        || reference.iter().any(|p| p.as_ref().len() != m)
    {
        return Err(Error::Contract(
            "IGD inputs differ in objective count".into(),
        ));
    }
    let total: f64 = reference
        .iter()
        .map(|p| {
            approx
                .iter()
                .map(|q| {
                    p.as_ref()
                        .iter()
                        .zip(q.as_ref())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                })
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// Hypervolume of `approx` against the problem's registered metric reference.
pub fn hv_metric<P: AsRef<[f64]>>(approx: &[P], problem: &Problem) -> Result<f64> {
    let r = problem.metric_reference().ok_or_else(|| {
        Error::Config(format!(
            "{} has no registered hypervolume reference point",
            problem.name()
        ))
    })?;
    hypervolume(approx, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn front(points: Vec<Vec<f64>>) -> ReferenceFront {
        ReferenceFront::new(points).unwrap()
    }

    #[test]
    fn igd_examples() {
        let r = front(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        // Distances 0 and sqrt(2) from (0, 1).
        let v = igd(&[vec![0.0, 1.0]], &r).unwrap();
        assert!((v - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
        assert_eq!(
            igd(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![5.0, 5.0]], &r).unwrap(),
            0.0
        );
        assert_eq!(
            igd_points(&[vec![3.0, 4.0]], &[vec![0.0, 0.0]]).unwrap(),
            5.0
        );
        assert!(igd_points::<Vec<f64>, Vec<f64>>(&[], &[vec![0.0]]).is_err());
        assert!(igd_points(&[vec![0.0]], &[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn two_point_reference_mean() {
        // Reference {(0,0), (1,1)} against {(0,0)}: (0 + sqrt 2) / 2.
        let v = igd_points(&[vec![0.0, 0.0]], &[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn hv_metric_uses_registered_point() {
        let glt1 = Problem::builtin("GLT1").unwrap();
        assert_eq!(hv_metric(&[vec![1.0, 1.0]], &glt1).unwrap(), 1.0);
        assert_eq!(hv_metric(&[vec![2.0, 2.0]], &glt1).unwrap(), 0.0);
        let glt2 = Problem::builtin("GLT2").unwrap();
        assert_eq!(hv_metric(&[vec![1.0, 1.0]], &glt2).unwrap(), 10.0);
        let custom = Problem::custom(
            "c",
            crate::domain::Bounds::uniform(1, 0.0, 1.0),
            2,
            |x| vec![x[0], 1.0 - x[0]],
            None,
            None,
        )
        .unwrap();
        assert!(matches!(
            hv_metric(&[vec![0.0, 0.0]], &custom),
            Err(Error::Config(_))
        ));
    }

    proptest! {
        #[test]
        fn adding_points_never_raises_igd(
            approx in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 2), 1..10),
            extra in prop::collection::vec(0.0f64..2.0, 2),
            reference in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 2), 1..10),
        ) {
            let before = igd_points(&approx, &reference).unwrap();
            let mut more = approx.clone();
            more.push(extra);
            prop_assert!(igd_points(&more, &reference).unwrap() <= before);
        }

        #[test]
        fn igd_scales_linearly(
            approx in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 3), 1..8),
            reference in prop::collection::vec(prop::collection::vec(0.0f64..2.0, 3), 1..8),
            s in 0.01f64..100.0,
        ) {
            let scale = |v: &Vec<Vec<f64>>| v.iter().map(|p| p.iter().map(|x| x * s).collect::<Vec<_>>()).collect::<Vec<_>>();
            let base = igd_points(&approx, &reference).unwrap();
            let scaled = igd_points(&scale(&approx), &scale(&reference)).unwrap();
            prop_assert!((scaled - s * base).abs() <= 1e-9 * (1.0 + s * base));
        }
    }
}
