//! Environmental-selection primitives: non-dominated sorting, dominance
//! counting, crowding distance, exact hypervolume with per-point
//! contributions, and a Monte-Carlo hypervolume estimate for testing.

mod crowding;
mod hypervolume;
mod sort;

pub use crowding::crowding_distance;
pub use hypervolume::{hv_contribution, hv_contributions, hypervolume, mc_hypervolume, McEstimate};
pub use sort::{dominance_count, fast_nondominated_sort, FrontPartition};
