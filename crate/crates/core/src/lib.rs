//! Spectral Partition community detection for the stochastic block model.
//!
//! The crate covers the whole experimental loop:
//!
//! - [`model`]: block-model parameters, seeded graph generation, partitions,
//!   the misclassification metric and the recovery-threshold formulas.
//! - [`linalg`]: sparse symmetric operators, spectral norm estimation and
//!   truncated rank-`K` approximation.
//! - [`detect`]: the three-stage pipeline (trimming, spectral
//!   decomposition, improvement).
//! - [`harness`]: parameter sweeps with CSV output and spectral
//!   diagnostics.
//! - [`oracle`]: brute-force references used by the test suite.
//!
//! ```
//! use spectral_sbm::detect::{spectral_partition, DetectConfig};
//! use spectral_sbm::model::{generate_sbm, misclassified, SbmParams};
//!
//! let params = SbmParams::binary_symmetric(400, 20.0, 2.0).unwrap();
//! let (graph, truth) = generate_sbm(&params, 1);
//! let result = spectral_partition(&graph, 2, &DetectConfig::with_seed(1)).unwrap();
//! assert_eq!(misclassified(&result.estimate, &truth).unwrap(), 0);
//! ```

pub mod detect;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod rng;

pub use error::{Result, SbmError};
