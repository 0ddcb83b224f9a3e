use rayon::prelude::*;

use super::{DetectConfig, TrimResult};
use crate::error::{Result, SbmError};
use crate::linalg::{k_rank_approx_with, squared_distance, Embedding, SparseSym};
use crate::model::{Graph, Partition};

/// One pass of ball peeling at radius index `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusRecord {
    pub radius_index: usize,
    /// Squared-distance radius `i · unit`, see [`super::RadiusRule`].
    pub radius_sq: f64,
    /// Center vertex of each ball (original vertex ids); `None` when every
    /// vertex was already covered.
    pub centers: Vec<Option<usize>>,
    /// `|T_{i,k}|` right after peeling, before leftovers join.
    pub ball_sizes: Vec<usize>,
    /// Mean embedding row `ξ_{i,k}` of each peeled ball.
    pub means: Vec<Option<Vec<f64>>>,
    /// `r_i = Σ_k Σ_{v∈T_{i,k}} ‖Â_v − ξ_{i,k}‖²`.
    pub residual: f64,
    /// Final `T_{i,k}` membership of each vertex of `Γ`, by position.
    pub labels: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DecompositionTrace {
    pub records: Vec<RadiusRecord>,
    /// Index into `records` of the minimal residual (first one on ties).
    pub chosen: usize,
    pub eigenvalues: Vec<f64>,
    pub frobenius_err: f64,
}

impl DecompositionTrace {
    pub fn i_star(&self) -> usize {
        self.records[self.chosen].radius_index
    }

    pub fn chosen_record(&self) -> &RadiusRecord {
        &self.records[self.chosen]
    }
}

/// Clusters `Γ` from the rank-`K` approximation of `A_Γ`.
///
/// For each radius index `i = 1..=grid`, `K` balls
/// `Q_{i,v} = {w ∈ Γ : ‖Â_w − Â_v‖² ≤ radius_i}` are peeled greedily, each
/// time choosing the center that covers the most not-yet-covered vertices
/// (lowest vertex on ties). Uncovered vertices join the ball whose mean is
/// nearest. The `i` with the smallest residual wins.
///
/// The returned partition indexes vertices by their position in
/// `trimmed.gamma`. `degree_sum` and `n` in the radius unit come from the
/// untrimmed graph.
pub fn spectral_decompose(
    g: &Graph,
    trimmed: &TrimResult,
    k: usize,
    config: &DetectConfig,
) -> Result<(Partition, DecompositionTrace)> {
    let gamma = &trimmed.gamma;
    if gamma.is_empty() {
        return Err(SbmError::param("no vertices survived trimming"));
    }
    if k == 0 || k > gamma.len() {
        return Err(SbmError::param(format!(
            "K={k} must lie in 1..={} (kept vertices)",
            gamma.len()
        )));
    }
    let a_gamma = SparseSym::induced(g, gamma);
    let embedding = k_rank_approx_with(&a_gamma, k, &config.low_rank_options())?;

    let unit = config
        .radius_rule
        .unit(config.radius_scale, g.degree_sum(), g.n());
    let grid = config.radius_steps(g.n());
    let records: Vec<RadiusRecord> = (1..=grid)
        .into_par_iter()
        .map(|i| peel(&embedding, gamma, k, i, i as f64 * unit))
        .collect();

    let chosen = records
        .iter()
        .enumerate()
        .fold(0, |best, (idx, r)| {
            if r.residual < records[best].residual {
                idx
            } else {
                best
            }
        });
    let partition = Partition::new(records[chosen].labels.clone(), k)?;
    Ok((
        partition,
        DecompositionTrace {
            records,
            chosen,
            eigenvalues: embedding.eigenvalues().to_vec(),
            frobenius_err: embedding.frobenius_err(),
        },
    ))
}

fn peel(emb: &Embedding, gamma: &[usize], k: usize, index: usize, radius_sq: f64) -> RadiusRecord {
    let m = emb.n();
    let dim = emb.k();
    const UNASSIGNED: usize = usize::MAX;
    let mut labels = vec![UNASSIGNED; m];
    let mut centers = Vec::with_capacity(k);
    let mut ball_sizes = Vec::with_capacity(k);
    let mut means: Vec<Option<Vec<f64>>> = Vec::with_capacity(k);

    for cluster in 0..k {
        let (count, center) = (0..m)
            .into_par_iter()
            .map(|v| {
                let c = (0..m)
                    .filter(|&w| labels[w] == UNASSIGNED && emb.dist_sq(v, w) <= radius_sq)
                    .count();
                (c, v)
            })
            .reduce(
                || (0, usize::MAX),
                |a, b| {
                    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        if count == 0 {
            centers.push(None);
            ball_sizes.push(0);
            means.push(None);
            continue;
        }
        let mut mean = vec![0.0; dim];
        for (w, label) in labels.iter_mut().enumerate() {
            if *label == UNASSIGNED && emb.dist_sq(center, w) <= radius_sq {
                *label = cluster;
                for (acc, x) in mean.iter_mut().zip(emb.row(w)) {
                    *acc += x;
                }
            }
        }
        mean.iter_mut().for_each(|x| *x /= count as f64);
        centers.push(Some(gamma[center]));
        ball_sizes.push(count);
        means.push(Some(mean));
    }

    let nearest = |v: usize| {
        means
            .iter()
            .enumerate()
            .filter_map(|(c, m)| m.as_ref().map(|m| (c, squared_distance(emb.row(v), m))))
            .fold((UNASSIGNED, f64::INFINITY), |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            })
            .0
    };
    let leftover: Vec<(usize, usize)> = (0..m)
        .into_par_iter()
        .filter(|&v| labels[v] == UNASSIGNED)
        .map(|v| (v, nearest(v)))
        .collect();
    for (v, c) in leftover {
        labels[v] = c;
    }

    let residual = (0..m)
        .map(|v| {
            let mean = means[labels[v]].as_ref().expect("assigned to a peeled ball");
            squared_distance(emb.row(v), mean)
        })
        .sum();

    RadiusRecord {
        radius_index: index,
        radius_sq,
        centers,
        ball_sizes,
        means,
        residual,
        labels,
    }
}
