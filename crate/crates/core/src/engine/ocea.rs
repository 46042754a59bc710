//! The clustering-guided steady-state loop.
//!
//! Each generation fixes the archive order and one delegate per cluster, then
//! breeds one offspring around every archived solution in turn. Each offspring
//! is immediately offered to the archive (`esoc`): non-dominated sorting picks
//! the loser, either the most-dominated member of the worst front or, when
//! everything is mutually non-dominated, the smallest hypervolume contributor.
//! If the offspring survives it replaces the loser in the archive and opens a
//! cluster of its own.

use crate::clustering::ClusterSet;
use crate::domain::{Solution, SolutionId};
use crate::engine::{generator_name, Recorder, RunConfig, RunTrace};
use crate::problems::Problem;
use crate::rng::RandomSource;
use crate::selection::{dominance_count, fast_nondominated_sort, hv_contributions};
use crate::variation::sol_gen;
use crate::{Error, Result};

/// Reference point used for in-loop hypervolume contributions.
pub const SELECTION_REFERENCE_POLICY: &str =
    "componentwise maximum of the first front plus 1.0, recomputed per update";

/// Archive, clustering and generation counter.
#[derive(Debug, Clone)]
pub struct EngineState {
    pub archive: Vec<Solution>,
    pub clusters: ClusterSet,
    pub generation: usize,
}

/// What one archive update did.
#[derive(Debug, Clone, PartialEq)]
pub struct EsocOutcome {
    /// Number of fronts in archive plus offspring.
    pub fronts: usize,
    /// Solution dropped from the archive; the offspring itself when rejected.
    pub removed: SolutionId,
    /// Whether the offspring entered the archive.
    pub accepted: bool,
    /// Cluster pair merged after the insertion, as indices before the merge.
    pub merged: Option<(usize, usize)>,
}

/// One optimization run in progress.
pub struct Ocea {
    config: RunConfig,
    problem: Problem,
    rng: RandomSource,
    state: EngineState,
    next_id: u64,
    evaluations: usize,
}

impl Ocea {
    /// Samples and evaluates N solutions uniformly in the box; each starts as
    /// its own cluster.
    pub fn new(config: RunConfig, problem: Problem) -> Result<Self> {
        config.validate()?;
        let mut rng = RandomSource::new(config.seed);
        let archive = initial_population(config.population, &problem, &mut rng)?;
        let clusters = ClusterSet::init_singletons(&archive, config.k_max)?;
        Ok(Self {
            next_id: archive.len() as u64,
            evaluations: archive.len(),
            config,
            problem,
            rng,
            state: EngineState {
                archive,
                clusters,
                generation: 0,
            },
        })
    }

    /// Starts from a given archive instead of a random one.
    pub fn from_archive(
        config: RunConfig,
        problem: Problem,
        archive: Vec<Solution>,
    ) -> Result<Self> {
        config.validate()?;
        if archive.len() != config.population {
            return Err(Error::Contract(format!(
                "archive holds {} solutions, population is {}",
                archive.len(),
                config.population
            )));
        }
        let clusters = ClusterSet::init_singletons(&archive, config.k_max)?;
        let next_id = archive.iter().map(|s| s.id.0 + 1).max().unwrap_or(0);
        Ok(Self {
            rng: RandomSource::new(config.seed),
            next_id,
            evaluations: 0,
            config,
            problem,
            state: EngineState {
                archive,
                clusters,
                generation: 0,
            },
        })
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// One delegate per cluster, in cluster order.
    pub fn global_mating_pool(&mut self) -> Vec<Solution> {
        let mut pool = Vec::with_capacity(self.state.clusters.len());
        for cluster in self.state.clusters.clusters() {
            let pick = self.rng.index(cluster.members().len());
            let id = *cluster
                .members()
                .iter()
                .nth(pick)
                .expect("pick within members");
            pool.push(self.lookup(id).clone());
        }
        pool
    }

    fn lookup(&self, id: SolutionId) -> &Solution {
        self.state
            .archive
            .iter()
            .find(|s| s.id == id)
            .expect("clustered solutions are archived")
    }

    /// Mating pool of `base`: its own cluster when the `beta` draw succeeds,
    /// otherwise the delegates. Pools with fewer than two members fall back to
    /// the delegates, then to the whole archive.
    fn mating_pool<'a>(
        &'a self,
        base: SolutionId,
        own_cluster: bool,
        delegates: &'a [Solution],
    ) -> Vec<&'a Solution> {
        if own_cluster {
            if let Some(k) = self.state.clusters.cluster_of(base) {
                let members: Vec<&Solution> = self.state.clusters.clusters()[k]
                    .members()
                    .iter()
                    .map(|&id| self.lookup(id))
                    .collect();
                if members.len() >= 2 {
                    return members;
                }
            }
        }
        if delegates.len() >= 2 {
            delegates.iter().collect()
        } else {
            self.state.archive.iter().collect()
        }
    }

    /// Offers `y` to the archive and updates the clustering when it survives.
    pub fn esoc(&mut self, y: Solution) -> Result<EsocOutcome> {
        let n = self.state.archive.len();
        let mut objectives: Vec<&[f64]> =
            self.state.archive.iter().map(|s| s.f.as_slice()).collect();
        objectives.push(&y.f);
        let partition = fast_nondominated_sort(&objectives);
        let worst = if partition.len() > 1 {
            let mut best: Option<(usize, usize)> = None;
            for &i in partition.last() {
                let count = dominance_count(objectives[i], &objectives);
                if best.is_none_or(|(c, _)| count > c) {
                    best = Some((count, i));
                }
            }
            best.expect("non-empty last front").1
        } else {
            let r = selection_reference(&objectives);
            let contributions = hv_contributions(&objectives, &r)?;
            let mut best = 0;
            for (i, &c) in contributions.iter().enumerate() {
                if c < contributions[best] {
                    best = i;
                }
            }
            best
        };
        let fronts = partition.len();
        if worst == n {
            return Ok(EsocOutcome {
                fronts,
                removed: y.id,
                accepted: false,
                merged: None,
            });
        }
        let removed = std::mem::replace(&mut self.state.archive[worst], y);
        self.state.clusters.remove_member(&removed)?;
        let merged = self
            .state
            .clusters
            .insert_as_new_cluster(&self.state.archive[worst])?;
        Ok(EsocOutcome {
            fronts,
            removed: removed.id,
            accepted: true,
            merged,
        })
    }

    /// Runs one generation, calling `observe` after every archive update.
    pub fn step_with(&mut self, mut observe: impl FnMut(&EngineState, &EsocOutcome)) -> Result<()> {
        let parents = self.state.archive.clone();
        let delegates = self.global_mating_pool();
        for base in &parents {
            let own_cluster = self.rng.uniform() < self.config.beta;
            let id = SolutionId(self.next_id);
            let child = {
                let pool = self.mating_pool(base.id, own_cluster, &delegates);
                // Borrow of the state ends before the RNG is touched again.
                let pool: Vec<Solution> = pool.into_iter().cloned().collect();
                let refs: Vec<&Solution> = pool.iter().collect();
                sol_gen(
                    &base.x,
                    &refs,
                    &self.config.variation,
                    &mut self.rng,
                    &self.problem,
                    id,
                )?
            };
            self.next_id += 1;
            self.evaluations += 1;
            let outcome = self.esoc(child)?;
            observe(&self.state, &outcome);
        }
        self.state.generation += 1;
        if cfg!(debug_assertions) || self.config.trace.check_invariants {
            self.check_invariants()?;
        }
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        self.step_with(|_, _| {})
    }

    pub fn check_invariants(&self) -> Result<()> {
        if self.state.archive.len() != self.config.population {
            return Err(Error::Contract(format!(
                "archive holds {} solutions, expected {}",
                self.state.archive.len(),
                self.config.population
            )));
        }
        self.state
            .clusters
            .check_invariants(&self.state.archive, 1e-9)
    }

    /// Runs every remaining generation and returns the trace.
    pub fn run(mut self) -> Result<RunTrace> {
        let mut recorder = Recorder::new(&self.config, &self.problem)?;
        let mut snapshots = Vec::new();
        let mut cluster_counts = vec![self.state.clusters.len()];
        recorder.record(0, &self.state.archive, &self.problem)?;
        if self.config.trace.cluster_snapshots {
            snapshots.extend(self.state.clusters.records(0));
        }
        while self.state.generation < self.config.generations {
            self.step()?;
            let t = self.state.generation;
            cluster_counts.push(self.state.clusters.len());
            recorder.record(t, &self.state.archive, &self.problem)?;
            if self.config.trace.cluster_snapshots && recorder.records(t) {
                snapshots.extend(self.state.clusters.records(t));
            }
        }
        Ok(RunTrace {
            algorithm: self.config.algorithm,
            problem: self.problem.name().to_string(),
            seed: self.config.seed,
            generator: generator_name(),
            reports: recorder.reports,
            final_clusters: self.state.clusters.records(self.state.generation),
            cluster_snapshots: snapshots,
            cluster_counts,
            final_archive: self.state.archive,
            evaluations: self.evaluations,
        })
    }
}

/// Componentwise maximum over the given (first-front) objective vectors plus one.
pub(crate) fn selection_reference(objectives: &[&[f64]]) -> Vec<f64> {
    let m = objectives[0].len();
    (0..m)
        .map(|d| {
            objectives
                .iter()
                .map(|f| f[d])
                .fold(f64::NEG_INFINITY, f64::max)
                + 1.0
        })
        .collect()
}

pub(crate) fn initial_population(
    size: usize,
    problem: &Problem,
    rng: &mut RandomSource,
) -> Result<Vec<Solution>> {
    let bounds = problem.bounds();
    (0..size)
        .map(|i| {
            let x: Vec<f64> = bounds
                .lower()
                .iter()
                .zip(bounds.upper())
                .map(|(&a, &b)| rng.uniform_in(a, b))
                .collect();
            let f = problem.evaluate(&x)?;
            Ok(Solution {
                id: SolutionId(i as u64),
                x,
                f,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Bounds;
    use crate::engine::Algorithm;

    /// Identity objective on the unit square: f(x) = x.
    fn identity_problem() -> Problem {
        Problem::custom(
            "id",
            Bounds::uniform(2, 0.0, 10.0),
            2,
            |x| x.to_vec(),
            None,
            None,
        )
        .unwrap()
    }

    fn sol(id: u64, f: [f64; 2]) -> Solution {
        Solution {
            id: SolutionId(id),
            x: f.to_vec(),
            f: f.to_vec(),
        }
    }

    fn engine(archive: Vec<Solution>, k_max: usize) -> Ocea {
        let problem = identity_problem();
        let mut config = RunConfig::defaults(&problem, Algorithm::Ocea);
        config.population = archive.len();
        config.k_max = k_max;
        Ocea::from_archive(config, problem, archive).unwrap()
    }

    #[test]
    fn initialization() {
        let p = Problem::custom(
            "sq",
            Bounds::uniform(2, 0.0, 1.0),
            2,
            |x| x.to_vec(),
            None,
            None,
        )
        .unwrap();
        let mut config = RunConfig::defaults(&p, Algorithm::Ocea);
        config.population = 2;
        config.k_max = 2;
        let e = Ocea::new(config.clone(), p.clone()).unwrap();
        assert_eq!(e.state().archive.len(), 2);
        assert_eq!(e.state().clusters.len(), 2);
        assert!(e.state().archive.iter().all(|s| p.bounds().contains(&s.x)));
        let again = Ocea::new(config, p.clone()).unwrap();
        assert_eq!(e.state().archive, again.state().archive);

        let zdt = Problem::builtin("ZDT1").unwrap();
        let e = Ocea::new(RunConfig::defaults(&zdt, Algorithm::Ocea), zdt).unwrap();
        assert_eq!(e.state().clusters.len(), 100);
    }

    #[test]
    fn dominated_offspring_is_rejected() {
        let mut e = engine(vec![sol(0, [1.0, 1.0]), sol(1, [2.0, 2.0])], 2);
        let before = e.state().clone();
        let out = e.esoc(sol(9, [3.0, 3.0])).unwrap();
        assert_eq!(out.fronts, 3);
        assert!(!out.accepted);
        assert_eq!(out.removed, SolutionId(9));
        assert_eq!(e.state().archive, before.archive);
        assert_eq!(e.state().clusters, before.clusters);
    }

    #[test]
    fn dominating_offspring_evicts_most_dominated() {
        // (2,2) is dominated by (1,1) and by y; (1,1) only by y.
        let mut e = engine(
            vec![sol(0, [1.0, 1.0]), sol(1, [2.0, 2.0]), sol(2, [0.5, 3.0])],
            3,
        );
        let out = e.esoc(sol(9, [0.1, 0.1])).unwrap();
        assert!(out.fronts > 1 && out.accepted);
        assert_eq!(out.removed, SolutionId(1));
        let ids: Vec<u64> = e.state().archive.iter().map(|s| s.id.0).collect();
        assert_eq!(ids, vec![0, 9, 2]);
        e.check_invariants().unwrap();
    }

    #[test]
    fn nondominated_offspring_evicts_least_contributor() {
        // r = (4, 4). Sorted by f1: (1,3) adds 1*1, (2,2) adds 0.25*1, the
        // offspring (2.25,1.25) adds 0.75*0.75, (3,1) adds 1*0.25. The tie at
        // 0.25 goes to the lower archive index, so (2,2) leaves.
        let mut e = engine(
            vec![sol(0, [1.0, 3.0]), sol(1, [2.0, 2.0]), sol(2, [3.0, 1.0])],
            3,
        );
        let out = e.esoc(sol(9, [2.25, 1.25])).unwrap();
        assert_eq!(out.fronts, 1);
        assert_eq!(out.removed, SolutionId(1));
        e.check_invariants().unwrap();
    }

    #[test]
    fn generation_keeps_archive_size() {
        let zdt = Problem::builtin("ZDT1").unwrap();
        let mut config = RunConfig::defaults(&zdt, Algorithm::Ocea);
        config.population = 2;
        config.k_max = 1;
        config.generations = 1;
        let trace = Ocea::new(config, zdt).unwrap().run().unwrap();
        assert_eq!(trace.evaluations, 4);
        assert_eq!(trace.final_archive.len(), 2);
        assert_eq!(trace.reports.len(), 2);
    }

    #[test]
    fn beta_extremes_pick_pool_source() {
        let zdt = Problem::builtin("ZDT1").unwrap();
        let mut config = RunConfig::defaults(&zdt, Algorithm::Ocea);
        config.population = 20;
        config.k_max = 3;
        let mut e = Ocea::new(config, zdt).unwrap();
        for _ in 0..5 {
            e.step().unwrap();
        }
        let delegates = e.global_mating_pool();
        assert_eq!(delegates.len(), e.state().clusters.len());
        let id = e.state().archive[0].id;
        let own = e.mating_pool(id, true, &delegates);
        let k = e.state().clusters.cluster_of(id).unwrap();
        if e.state().clusters.clusters()[k].members().len() >= 2 {
            assert_eq!(own.len(), e.state().clusters.clusters()[k].members().len());
        }
        let global = e.mating_pool(id, false, &delegates);
        assert_eq!(global.len(), delegates.len());
        // A removed parent falls back to the delegates.
        let gone = e.mating_pool(SolutionId(u64::MAX), true, &delegates);
        assert_eq!(gone.len(), delegates.len());
        // Fewer than two delegates: whole archive.
        let whole = e.mating_pool(SolutionId(u64::MAX), false, &delegates[..1]);
        assert_eq!(whole.len(), 20);
    }

    #[test]
    fn same_seed_same_trace() {
        let sch = Problem::builtin("SCH").unwrap();
        let mut config = RunConfig::defaults(&sch, Algorithm::Ocea);
        config.generations = 10;
        config.population = 20;
        config.trace.wall_time = false;
        let a = Ocea::new(config.clone(), sch.clone())
            .unwrap()
            .run()
            .unwrap();
        let b = Ocea::new(config, sch).unwrap().run().unwrap();
        assert_eq!(a, b);
    }
}
