//! Multiobjective evolutionary optimization driven by online agglomerative
//! clustering.
//!
//! The engine keeps a fixed-size archive of solutions and a clustering of
//! that archive in decision space. Every offspring is bred from a mating pool
//! drawn either from its parent's cluster or from one delegate per cluster,
//! then competes for a slot in the archive through non-dominated sorting and
//! hypervolume contribution. Whenever an offspring survives, the clustering is
//! updated online: the evicted solution leaves its cluster, the offspring opens
//! a new one, and the two closest clusters merge when the cap is exceeded.
//!
//! Module map:
//!
//! - [`domain`]: vectors, dominance, box bounds and solutions.
//! - [`rng`]: the seeded random source every run owns.
//! - [`problems`]: the benchmark registry and reference fronts.
//! - [`variation`]: differential evolution plus polynomial mutation.
//! - [`clustering`]: the online cluster state and a standalone AddC.
//! - [`selection`]: non-dominated sorting, hypervolume and contributions.
//! - [`engine`]: the generational loop and an NSGA-II style baseline.
//! - [`metrics`]: IGD and hypervolume indicators.
//! - [`harness`]: experiment specs, multi-run orchestration and statistics.

pub mod clustering;
pub mod domain;
pub mod engine;
mod error;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod rng;
pub mod selection;
pub mod variation;

pub use error::{Error, Result};
