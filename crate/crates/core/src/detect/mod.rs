//! Spectral Partition: trimming, spectral decomposition and improvement.
//!
//! ```text
//! trim ──► A_Γ ──► rank-K approximation ──► ball peeling over radii ──► S_k on Γ
//!                                                                        │
//!             trimmed vertices scored against S_k ◄──────────────────────┘
//!                          │
//!                          ▼
//!              ⌈ln n⌉ synchronous improvement rounds ──► V̂_k
//! ```

mod decompose;
mod improve;
mod trim;

pub use decompose::{spectral_decompose, DecompositionTrace, RadiusRecord};
pub use improve::{improve, improve_rounds};
pub use trim::{trim, TrimResult};

use crate::error::{Result, SbmError};
use crate::linalg::{SubspaceOptions, DEFAULT_TOL};
use crate::model::{misclassified, Graph, Partition};

/// `max(1, ⌈ln n⌉)`, the default number of radius steps and of improvement
/// rounds.
pub fn log_steps(n: usize) -> usize {
    ((n as f64).ln().ceil() as usize).max(1)
}

/// How the squared-distance radius unit of the ball-peeling step is formed.
/// Radius index `i` uses `i · unit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusRule {
    /// `unit = scale · degree_sum / n²`, the mean edge density. Balls
    /// hold only a handful of vertices at moderate `n`, which lets greedy
    /// peeling place two centers in one large community.
    Literal,
    /// `unit = scale · (degree_sum / n²) · (degree_sum / n)`: the literal
    /// unit times the average degree. This is of order `n·p̄²`, the same
    /// order as the squared distance `n(p − q)²` between community rows.
    DegreeScaled,
}

impl RadiusRule {
    pub fn unit(self, scale: f64, degree_sum: usize, n: usize) -> f64 {
        let n = n as f64;
        let density = degree_sum as f64 / (n * n);
        match self {
            RadiusRule::Literal => scale * density,
            RadiusRule::DegreeScaled => scale * density * (degree_sum as f64 / n),
        }
    }
}

impl std::str::FromStr for RadiusRule {
    type Err = SbmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(RadiusRule::Literal),
            "degree-scaled" | "degree_scaled" => Ok(RadiusRule::DegreeScaled),
            other => Err(SbmError::Parse(format!(
                "radius rule {other:?} is not literal or degree-scaled"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig {
    /// Degree cap is `trim_multiplier · K · degree_sum / n`.
    pub trim_multiplier: f64,
    /// Improvement rounds; `None` means `⌈ln n⌉`.
    pub iterations: Option<usize>,
    /// Radius steps `i = 1..=steps`; `None` means `⌈ln n⌉`.
    pub radius_steps: Option<usize>,
    pub radius_rule: RadiusRule,
    /// Constant factor in the radius unit (`1/100`).
    pub radius_scale: f64,
    pub low_rank_tol: f64,
    pub low_rank_max_iters: usize,
    pub oversample: usize,
    pub seed: u64,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            trim_multiplier: 5.0,
            iterations: None,
            radius_steps: None,
            radius_rule: RadiusRule::DegreeScaled,
            radius_scale: 0.01,
            low_rank_tol: DEFAULT_TOL,
            low_rank_max_iters: 5000,
            oversample: 8,
            seed: 0,
        }
    }
}

impl DetectConfig {
    pub fn with_seed(seed: u64) -> Self {
        DetectConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn iterations_for(&self, n: usize) -> usize {
        self.iterations.unwrap_or_else(|| log_steps(n))
    }

    pub(crate) fn radius_steps(&self, n: usize) -> usize {
        self.radius_steps.unwrap_or_else(|| log_steps(n))
    }

    pub(crate) fn low_rank_options(&self) -> SubspaceOptions {
        SubspaceOptions {
            oversample: self.oversample,
            tol: self.low_rank_tol,
            max_iters: self.low_rank_max_iters,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub estimate: Partition,
    /// Partition entering the improvement loop: the spectral clusters on
    /// `Γ` plus the trimmed vertices scored against them.
    pub initial: Partition,
    pub trim: TrimResult,
    /// `None` for a graph without edges.
    pub trace: Option<DecompositionTrace>,
    pub improvement_deltas: Vec<usize>,
    /// The graph had no edges and every vertex was put in community 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageMisclassified {
    pub after_spectral: usize,
    pub after_improvement: usize,
}

impl DetectionResult {
    /// Error counts against a known ground truth after each stage.
    pub fn stage_misclassified(&self, truth: &Partition) -> Result<StageMisclassified> {
        Ok(StageMisclassified {
            after_spectral: misclassified(&self.initial, truth)?,
            after_improvement: misclassified(&self.estimate, truth)?,
        })
    }
}

/// The full pipeline. Deterministic given `(g, k, config)`.
pub fn spectral_partition(g: &Graph, k: usize, config: &DetectConfig) -> Result<DetectionResult> {
    if k < 2 {
        return Err(SbmError::param(format!("need K ≥ 2 communities, got {k}")));
    }
    let n = g.n();
    if n < k {
        return Err(SbmError::param(format!("{n} vertices cannot form {k} communities")));
    }
    let trimmed = trim(g, k, config.trim_multiplier)?;
    if trimmed.degenerate {
        let trivial = Partition::trivial(n, k);
        return Ok(DetectionResult {
            estimate: trivial.clone(),
            initial: trivial,
            trim: trimmed,
            trace: None,
            improvement_deltas: Vec::new(),
            degenerate: true,
        });
    }
    let (on_gamma, trace) = spectral_decompose(g, &trimmed, k, config)?;

    let mut labels = vec![0usize; n];
    for (pos, &v) in trimmed.gamma.iter().enumerate() {
        labels[v] = on_gamma.label(pos);
    }
    improve::assign_trimmed(g, &mut labels, &trimmed.removed, k, config.seed);
    let initial = Partition::new(labels, k)?;

    let (estimate, improvement_deltas) = improve(g, &initial, config.iterations_for(n), config.seed)?;
    Ok(DetectionResult {
        estimate,
        initial,
        trim: trimmed,
        trace: Some(trace),
        improvement_deltas,
        degenerate: false,
    })
}
