use ocea::domain::dominates;
use ocea::problems::{Problem, ReferenceFront, PROBLEM_NAMES};
use ocea::rng::RandomSource;

fn sample(problem: &Problem, rng: &mut RandomSource) -> Vec<f64> {
    let b = problem.bounds();
    b.lower()
        .iter()
        .zip(b.upper())
        .map(|(lo, hi)| lo + (hi - lo) * rng.uniform())
        .collect()
}

const SAMPLES: usize = 100_000;
const MARGIN: f64 = 1e-9;

/// True when `p` beats `q` by more than `margin` in every objective.
fn clearly_dominates(p: &[f64], q: &[f64], margin: f64) -> bool {
    p.iter().zip(q).all(|(a, b)| *a < *b - margin)
}

#[test]
fn every_builtin_evaluates_inside_its_box() {
    let mut rng = RandomSource::new(11);
    for name in PROBLEM_NAMES {
        let problem = Problem::builtin(name).unwrap();
        assert_eq!(problem.bounds().dim(), problem.n());
        for _ in 0..10_000 / PROBLEM_NAMES.len() + 1 {
            let f = problem.evaluate(&sample(&problem, &mut rng)).unwrap();
            assert_eq!(f.len(), problem.m(), "{name}");
            assert!(f.iter().all(|v| v.is_finite()), "{name}: {f:?}");
        }
    }
}

#[test]
fn evaluation_rejects_wrong_length() {
    let problem = Problem::builtin("ZDT1").unwrap();
    assert!(problem.evaluate(&[0.5; 3]).is_err());
    assert!(Problem::builtin("ZDT9").is_err());
}

#[test]
fn reference_fronts_are_mutually_nondominated() {
    for name in PROBLEM_NAMES {
        let problem = Problem::builtin(name).unwrap();
        let front = problem.sample_reference_front(300).unwrap();
        assert_eq!(front.objectives(), problem.m());
        let points = front.points();
        for p in points {
            assert!(
                !points.iter().any(|q| dominates(q, p)),
                "{name}: dominated front point {p:?}"
            );
        }
    }
}

#[test]
fn random_samples_never_beat_the_reference_front() {
    let mut rng = RandomSource::new(12);
    for name in PROBLEM_NAMES {
        let problem = Problem::builtin(name).unwrap();
        let front = problem.sample_reference_front(200).unwrap();
        let mut points = front.into_points();
        points.sort_by(|a, b| a[0].total_cmp(&b[0]));
        for _ in 0..SAMPLES {
            let f = problem.evaluate(&sample(&problem, &mut rng)).unwrap();
            let beaten = if f.len() == 2 {
                // Along a sorted 2-objective front f2 falls as f1 rises, so the
                // first point right of f1 has the largest f2 among them.
                let i = points.partition_point(|q| q[0] <= f[0] + MARGIN);
                points.get(i).filter(|q| clearly_dominates(&f, q, MARGIN))
            } else {
                points.iter().find(|q| clearly_dominates(&f, q, MARGIN))
            };
            if let Some(q) = beaten {
                panic!("{name}: sample {f:?} dominates front point {q:?}");
            }
        }
    }
}

#[test]
fn front_text_round_trips() {
    let front = Problem::builtin("ZDT1")
        .unwrap()
        .sample_reference_front(50)
        .unwrap();
    let again = ReferenceFront::parse(&front.to_text()).unwrap();
    assert_eq!(again, front);
}

#[test]
fn custom_problem_uses_supplied_front() {
    let bounds = ocea::domain::Bounds::uniform(1, 0.0, 1.0);
    let front = ReferenceFront::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let problem = Problem::custom(
        "line",
        bounds,
        2,
        |x| vec![x[0], 1.0 - x[0]],
        Some(vec![2.0, 2.0]),
        Some(front.clone()),
    )
    .unwrap();
    assert!(problem.has_analytic_front());
    assert_eq!(problem.evaluate(&[0.25]).unwrap(), vec![0.25, 0.75]);
    assert_eq!(problem.metric_reference(), Some(&[2.0, 2.0][..]));
}
