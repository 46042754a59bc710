//! Online clustering of the archive in decision space.
//!
//! [`ClusterSet`] is the state machine the engine updates after every
//! accepted offspring: the evicted solution leaves its cluster (which is
//! dropped once empty), the offspring opens a singleton cluster, and while
//! the count exceeds the cap the two clusters with the closest centroids
//! merge. Centroids stay equal to the mean of their members throughout.
//!
//! [`addc_reference`] is the classic stream algorithm it derives from,
//! where every point is assigned to its nearest centroid and no point is
//! ever removed. It serves as a comparison oracle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::domain::{DecisionVector, Solution, SolutionId};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    centroid: DecisionVector,
    counter: usize,
    members: BTreeSet<SolutionId>,
}

impl Cluster {
    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    pub fn counter(&self) -> usize {
        self.counter
    }

    /// Member ids in ascending order.
    pub fn members(&self) -> &BTreeSet<SolutionId> {
        &self.members
    }
}

/// The clustering of one archive, capped at `k_max` clusters once the
/// initial singletons have been merged down.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSet {
    clusters: Vec<Cluster>,
    k_max: usize,
}

/// One line of a cluster snapshot dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub generation: usize,
    pub cluster: usize,
    pub counter: usize,
    pub centroid: Vec<f64>,
    pub members: Vec<u64>,
}

impl ClusterSet {
    /// One singleton cluster per solution, even when that exceeds `k_max`.
    pub fn init_singletons(population: &[Solution], k_max: usize) -> Result<Self> {
        if population.is_empty() {
            return Err(Error::Contract("cannot cluster an empty population".into()));
        }
        if k_max == 0 {
            return Err(Error::Contract("k_max must be at least 1".into()));
        }
        let clusters = population
            .iter()
            .map(|s| Cluster {
                centroid: s.x.clone(),
                counter: 1,
                members: BTreeSet::from([s.id]),
            })
            .collect();
        Ok(Self { clusters, k_max })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Index of the cluster holding `id`.
    pub fn cluster_of(&self, id: SolutionId) -> Option<usize> {
        self.clusters.iter().position(|c| c.members.contains(&id))
    }

    /// Takes `solution` out of its cluster. An emptied cluster is dropped;
    /// otherwise the counter is decremented and the centroid moved away from
    /// the removed point by `(x - z) / c` with the decremented counter.
    pub fn remove_member(&mut self, solution: &Solution) -> Result<()> {
        let k = self.cluster_of(solution.id).ok_or_else(|| {
            Error::Contract(format!("solution {} is not in any cluster", solution.id.0))
        })?;
        let cluster = &mut self.clusters[k];
        cluster.members.remove(&solution.id);
        if cluster.members.is_empty() {
            self.clusters.remove(k);
            return Ok(());
        }
        cluster.counter -= 1;
        let c = cluster.counter as f64;
        for (z, x) in cluster.centroid.iter_mut().zip(&solution.x) {
            *z -= (x - *z) / c;
        }
        Ok(())
    }

    /// Opens a singleton cluster for `y`, then merges the closest pair if the
    /// count now exceeds `k_max`. Returns the merged pair `(kept, absorbed)`
    /// as indices before the merge.
    pub fn insert_as_new_cluster(&mut self, y: &Solution) -> Result<Option<(usize, usize)>> {
        if self.cluster_of(y.id).is_some() {
            return Err(Error::Contract(format!(
                "solution {} is already clustered",
                y.id.0
            )));
        }
        self.clusters.push(Cluster {
            centroid: y.x.clone(),
            counter: 1,
            members: BTreeSet::from([y.id]),
        });
        if self.clusters.len() > self.k_max {
            let (g, d) = closest_pair(self.clusters.iter().map(|c| c.centroid.as_slice()))
                .expect("at least two clusters");
            self.merge(g, d);
            return Ok(Some((g, d)));
        }
        Ok(None)
    }

    fn merge(&mut self, keep: usize, absorb: usize) {
        debug_assert!(keep < absorb);
        let gone = self.clusters.remove(absorb);
        let target = &mut self.clusters[keep];
        let (cg, cd) = (target.counter as f64, gone.counter as f64);
        for (z, w) in target.centroid.iter_mut().zip(&gone.centroid) {
            *z = (*z * cg + w * cd) / (cg + cd);
        }
        target.counter += gone.counter;
        target.members.extend(gone.members);
    }

    /// Checks the partition, counter and exact-mean invariants against the
    /// archive the clustering describes.
    pub fn check_invariants(&self, archive: &[Solution], tolerance: f64) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        let mut seen = BTreeSet::new();
        let mut total = 0;
        for (k, cluster) in self.clusters.iter().enumerate() {
            if cluster.members.is_empty() {
                return fail(format!("cluster {k} is empty"));
            }
            if cluster.counter != cluster.members.len() {
                return fail(format!(
                    "cluster {k} counts {} but holds {} members",
                    cluster.counter,
                    cluster.members.len()
                ));
            }
            total += cluster.counter;
            let mut mean = vec![0.0; cluster.centroid.len()];
            for id in &cluster.members {
                if !seen.insert(*id) {
                    return fail(format!("solution {} sits in two clusters", id.0));
                }
                let Some(s) = archive.iter().find(|s| s.id == *id) else {
                    return fail(format!("cluster {k} holds {} which is not archived", id.0));
                };
                for (acc, v) in mean.iter_mut().zip(&s.x) {
                    *acc += v;
                }
            }
            for (i, (acc, z)) in mean.iter().zip(&cluster.centroid).enumerate() {
                let expected = acc / cluster.counter as f64;
                if (expected - z).abs() > tolerance {
                    return fail(format!(
                        "cluster {k} centroid component {i} is {z}, member mean is {expected}"
                    ));
                }
            }
        }
        if total != archive.len() || seen.len() != archive.len() {
            return fail(format!(
                "clusters cover {total} solutions, archive holds {}",
                archive.len()
            ));
        }
        Ok(())
    }

    /// Snapshot lines for one generation.
    pub fn records(&self, generation: usize) -> Vec<ClusterRecord> {
        self.clusters
            .iter()
            .enumerate()
            .map(|(k, c)| ClusterRecord {
                generation,
                cluster: k,
                counter: c.counter,
                centroid: c.centroid.clone(),
                members: c.members.iter().map(|id| id.0).collect(),
            })
            .collect()
    }
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// The pair `(g, d)`, `g < d`, with the smallest centroid distance; the
/// first pair in scan order wins ties.
fn closest_pair<'a>(centroids: impl Iterator<Item = &'a [f64]>) -> Option<(usize, usize)> {
    let centroids: Vec<&[f64]> = centroids.collect();
    let mut best: Option<(f64, usize, usize)> = None;
    for g in 0..centroids.len() {
        for d in g + 1..centroids.len() {
            let dist = squared_distance(centroids[g], centroids[d]);
            if best.is_none_or(|(b, _, _)| dist < b) {
                best = Some((dist, g, d));
            }
        }
    }
    best.map(|(_, g, d)| (g, d))
}

/// Centroid and counter of one cluster produced by [`addc_reference`].
#[derive(Debug, Clone, PartialEq)]
pub struct StreamCluster {
    pub centroid: DecisionVector,
    pub counter: f64,
}

/// Online agglomerative clustering of a stream (AddC).
///
/// For each point: the nearest centroid wins and absorbs it (counter first,
/// then `z += (y - z) / c`); then, below the cap, a new zero-count cluster
/// opens at the point, while at the cap the closest pair merges and the freed
/// slot reopens at the point with counter zero. The first point of the
/// stream opens a cluster with counter one. Finally clusters whose counter
/// is below `epsilon` are dropped.
pub fn addc_reference(
    stream: &[DecisionVector],
    k_max: usize,
    epsilon: f64,
) -> Result<Vec<StreamCluster>> {
    if stream.is_empty() {
        return Err(Error::Contract("AddC needs a non-empty stream".into()));
    }
    if k_max == 0 {
        return Err(Error::Contract("k_max must be at least 1".into()));
    }
    let mut clusters = vec![StreamCluster {
        centroid: stream[0].clone(),
        counter: 1.0,
    }];
    for y in &stream[1..] {
        let winner = (0..clusters.len())
            .min_by(|&a, &b| {
                squared_distance(y, &clusters[a].centroid)
                    .total_cmp(&squared_distance(y, &clusters[b].centroid))
            })
            .expect("at least one cluster");
        let w = &mut clusters[winner];
        w.counter += 1.0;
        for (z, v) in w.centroid.iter_mut().zip(y) {
            *z += (v - *z) / w.counter;
        }
        let fresh = StreamCluster {
            centroid: y.clone(),
            counter: 0.0,
        };
        if clusters.len() < k_max {
            clusters.push(fresh);
        } else if let Some((g, d)) = closest_pair(clusters.iter().map(|c| c.centroid.as_slice())) {
            let (cg, cd) = (clusters[g].counter, clusters[d].counter);
            if cg + cd > 0.0 {
                let absorbed = clusters[d].centroid.clone();
                for (z, w) in clusters[g].centroid.iter_mut().zip(&absorbed) {
                    *z = (*z * cg + w * cd) / (cg + cd);
                }
            }
            clusters[g].counter = cg + cd;
            clusters[d] = fresh;
        }
        // With k_max == 1 there is no pair to merge and the point only
        // updates the single winner.
    }
    clusters.retain(|c| c.counter >= epsilon);
    Ok(clusters)
}
