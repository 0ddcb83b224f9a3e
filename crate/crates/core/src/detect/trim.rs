use crate::error::{Result, SbmError};
use crate::model::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct TrimResult {
    /// Kept vertices `Γ`, increasing.
    pub gamma: Vec<usize>,
    /// Removed high-degree vertices, increasing.
    pub removed: Vec<usize>,
    pub threshold_used: f64,
    /// The graph had no edges; every vertex is kept and the threshold is 0.
    pub degenerate: bool,
}

/// Keeps the vertices whose degree is at most
/// `multiplier · K · degree_sum / n`, where `degree_sum = Σ_v deg(v) = 2|E|`.
pub fn trim(g: &Graph, k: usize, multiplier: f64) -> Result<TrimResult> {
    if k == 0 {
        return Err(SbmError::param("trimming needs K ≥ 1"));
    }
    if multiplier.is_nan() || multiplier <= 0.0 {
        return Err(SbmError::param(format!(
            "trim multiplier {multiplier} must be positive"
        )));
    }
    let n = g.n();
    if g.degree_sum() == 0 {
        return Ok(TrimResult {
            gamma: (0..n).collect(),
            removed: Vec::new(),
            threshold_used: 0.0,
            degenerate: true,
        });
    }
    let threshold = multiplier * k as f64 * g.degree_sum() as f64 / n as f64;
    let (gamma, removed) = (0..n).partition(|&v| g.degree(v) as f64 <= threshold);
    Ok(TrimResult {
        gamma,
        removed,
        threshold_used: threshold,
        degenerate: false,
    })
}
