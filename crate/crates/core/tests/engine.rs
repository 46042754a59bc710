use ocea::domain::{weakly_dominates, Solution, SolutionId};
use ocea::engine::{run, Algorithm, Ocea, RunConfig};
use ocea::problems::Problem;
use ocea::rng::RandomSource;
use ocea::selection::{fast_nondominated_sort, hypervolume};
use ocea::variation::sol_gen;

fn small_config(problem: &Problem, algorithm: Algorithm, seed: u64) -> RunConfig {
    let mut config = RunConfig::defaults(problem, algorithm);
    config.population = 24;
    config.generations = 15;
    config.k_max = 4;
    config.seed = seed;
    config.trace.wall_time = false;
    config
}

/// Offers `updates` offspring, bred from random archive members, and hands
/// the archive before and after each update to `check`.
fn drive(
    name: &str,
    seed: u64,
    updates: usize,
    mut check: impl FnMut(&[Solution], &Solution, &[Solution]),
) {
    let problem = Problem::builtin(name).unwrap();
    let config = small_config(&problem, Algorithm::Ocea, seed);
    let variation = config.variation;
    let mut engine = Ocea::new(config, problem.clone()).unwrap();
    let mut rng = RandomSource::new(seed ^ 0xfeed);
    for i in 0..updates {
        let before = engine.state().archive.clone();
        let base = &before[rng.index(before.len())];
        let pool: Vec<&Solution> = before.iter().collect();
        let child = sol_gen(
            &base.x,
            &pool,
            &variation,
            &mut rng,
            &problem,
            SolutionId(1_000_000 + i as u64),
        )
        .unwrap();
        engine.esoc(child.clone()).unwrap();
        check(&before, &child, &engine.state().archive);
        engine.check_invariants().unwrap();
    }
}

fn first_front(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let partition = fast_nondominated_sort(points);
    partition
        .first()
        .iter()
        .map(|&i| points[i].clone())
        .collect()
}

#[test]
fn archive_update_never_loses_first_front_coverage() {
    for (name, seed) in [("ZDT1", 1), ("SCH", 2), ("GLT5", 3), ("WFG4", 4)] {
        drive(name, seed, 400, |before, child, after| {
            let mut pool: Vec<Vec<f64>> = before.iter().map(|s| s.f.clone()).collect();
            pool.push(child.f.clone());
            let fronts = fast_nondominated_sort(&pool).len();
            if fronts == 1 {
                return;
            }
            for p in first_front(&pool) {
                assert!(
                    after.iter().any(|s| weakly_dominates(&s.f, &p)),
                    "{name}: first-front point {p:?} lost"
                );
            }
        });
    }
}

#[test]
fn archive_update_never_lowers_hypervolume() {
    for (name, seed) in [("ZDT1", 5), ("SCH", 6), ("GLT5", 7)] {
        drive(name, seed, 400, |before, child, after| {
            let mut pool: Vec<Vec<f64>> = before.iter().map(|s| s.f.clone()).collect();
            pool.push(child.f.clone());
            let front = first_front(&pool);
            let m = child.f.len();
            let r: Vec<f64> = (0..m)
                .map(|j| front.iter().map(|p| p[j]).fold(f64::MIN, f64::max) + 1.0)
                .collect();
            let objectives =
                |set: &[Solution]| -> Vec<Vec<f64>> { set.iter().map(|s| s.f.clone()).collect() };
            let old = hypervolume(&first_front(&objectives(before)), &r).unwrap();
            let new = hypervolume(&first_front(&objectives(after)), &r).unwrap();
            assert!(new >= old - 1e-12 * old.max(1.0), "{name}: {old} -> {new}");
        });
    }
}

#[test]
fn rejected_offspring_leaves_archive_untouched() {
    let mut rejected = 0;
    drive("ZDT1", 8, 300, |before, child, after| {
        if !after.iter().any(|s| s.id == child.id) {
            rejected += 1;
            assert_eq!(before, after);
        } else {
            assert_eq!(before.len(), after.len());
        }
    });
    assert!(rejected > 0);
}

#[test]
fn runs_are_reproducible_per_seed() {
    let problem = Problem::builtin("ZDT1").unwrap();
    for algorithm in [Algorithm::Ocea, Algorithm::Nsga2] {
        let a = run(&small_config(&problem, algorithm, 9), &problem).unwrap();
        let b = run(&small_config(&problem, algorithm, 9), &problem).unwrap();
        let c = run(&small_config(&problem, algorithm, 10), &problem).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.final_archive, c.final_archive);
        assert_eq!(a.final_archive.len(), 24);
    }
}

#[test]
fn trace_covers_every_generation_at_cadence_one() {
    let problem = Problem::builtin("SCH").unwrap();
    let trace = run(&small_config(&problem, Algorithm::Ocea, 11), &problem).unwrap();
    let generations: Vec<usize> = trace.reports.iter().map(|r| r.generation).collect();
    assert_eq!(generations, (0..=15).collect::<Vec<_>>());
    assert_eq!(trace.cluster_counts.len(), 16);
    assert_eq!(trace.evaluations, 24 * 16);
    let settled = trace.cluster_counts.iter().position(|&k| k <= 4).unwrap();
    assert!(trace.cluster_counts[settled..].iter().all(|&k| k <= 4));
}

#[test]
fn from_archive_checks_population() {
    let problem = Problem::builtin("SCH").unwrap();
    let config = small_config(&problem, Algorithm::Ocea, 12);
    let archive: Vec<Solution> = (0..5)
        .map(|i| Solution {
            id: SolutionId(i),
            x: vec![i as f64 / 4.0],
            f: problem.evaluate(&[i as f64 / 4.0]).unwrap(),
        })
        .collect();
    assert!(Ocea::from_archive(config.clone(), problem.clone(), archive.clone()).is_err());
    let mut config = config;
    config.population = 5;
    let mut engine = Ocea::from_archive(config, problem, archive).unwrap();
    engine.step().unwrap();
    assert_eq!(engine.state().archive.len(), 5);
    assert_eq!(engine.evaluations(), 5);
}

#[test]
fn invalid_configs_are_rejected() {
    let problem = Problem::builtin("ZDT1").unwrap();
    let mut config = small_config(&problem, Algorithm::Ocea, 0);
    config.beta = 1.5;
    assert!(run(&config, &problem).is_err());
    let mut config = small_config(&problem, Algorithm::Ocea, 0);
    config.population = 1;
    assert!(run(&config, &problem).is_err());
}
