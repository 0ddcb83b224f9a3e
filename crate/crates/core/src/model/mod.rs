//! Block-model parameters, graphs, partitions and recovery thresholds.

mod generate;
mod graph;
pub mod io;
mod params;
mod partition;
mod threshold;

pub use generate::generate_sbm;
pub use graph::Graph;
pub use params::{log_scale, SbmParams, ALPHA_SUM_TOL};
pub use partition::{
    misclassified, misclassified_assignment, misclassified_exhaustive, Partition,
    EXHAUSTIVE_MATCH_MAX_K,
};
pub use threshold::{
    check_condition, divergence, log_scaled_margin, RecoveryTarget, ThresholdReport,
    EXACT_RECOVERY_S,
};
