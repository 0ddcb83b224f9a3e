use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Result, SbmError};
use crate::model::{Graph, Partition};
use crate::rng::{stream, stream_rng};

/// Picks `argmax_k e(v, S_k) / |S_k|` over nonempty communities. Ties are
/// broken uniformly with a generator keyed by `(seed, keys...)`, drawn only
/// when a tie occurs.
fn best_community(counts: &[usize], sizes: &[usize], seed: u64, keys: &[u64]) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut tied: Vec<usize> = Vec::new();
    for (c, (&e, &s)) in counts.iter().zip(sizes).enumerate() {
        if s == 0 {
            continue;
        }
        let score = e as f64 / s as f64;
        if score > best {
            best = score;
            tied.clear();
            tied.push(c);
        } else if score == best {
            tied.push(c);
        }
    }
    match tied.len() {
        0 => 0,
        1 => tied[0],
        len => tied[stream_rng(seed, keys).random_range(0..len)],
    }
}

/// Runs synchronous improvement rounds `rounds.start..rounds.end`.
///
/// In each round every vertex moves to the community of the previous round
/// with the highest average connectivity `e(v, S_k)/|S_k|`. Empty
/// communities are never chosen. Tie-breaking randomness is keyed by
/// `(seed, round, vertex)`, so running rounds `0..i` and then `i..i+j`
/// gives the same result as `0..i+j`.
///
/// Returns the final partition and the number of vertices that changed
/// community in each round.
pub fn improve_rounds(
    g: &Graph,
    initial: &Partition,
    rounds: Range<usize>,
    seed: u64,
) -> Result<(Partition, Vec<usize>)> {
    if initial.len() != g.n() {
        return Err(SbmError::param(format!(
            "partition covers {} vertices, graph has {}",
            initial.len(),
            g.n()
        )));
    }
    let k = initial.k();
    let mut labels = initial.labels().to_vec();
    let mut deltas = Vec::with_capacity(rounds.len());
    for round in rounds {
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        let next: Vec<usize> = (0..g.n())
            .into_par_iter()
            .map(|v| {
                let counts = g.edges_into_labels(v, &labels, k);
                best_community(&counts, &sizes, seed, &[stream::IMPROVE, round as u64, v as u64])
            })
            .collect();
        deltas.push(labels.iter().zip(&next).filter(|(a, b)| a != b).count());
        labels = next;
    }
    Ok((Partition::new(labels, k)?, deltas))
}

/// [`improve_rounds`] over rounds `0..iterations`.
pub fn improve(
    g: &Graph,
    initial: &Partition,
    iterations: usize,
    seed: u64,
) -> Result<(Partition, Vec<usize>)> {
    if iterations == 0 {
        return Err(SbmError::param("improvement needs at least one iteration"));
    }
    improve_rounds(g, initial, 0..iterations, seed)
}

/// Labels the vertices in `trimmed` by the improvement scoring rule against
/// the communities formed by the other (kept) vertices. Kept vertices carry
/// their label in `labels`; entries for trimmed vertices are ignored and
/// overwritten.
pub(crate) fn assign_trimmed(g: &Graph, labels: &mut [usize], trimmed: &[usize], k: usize, seed: u64) {
    let mut is_trimmed = vec![false; g.n()];
    for &v in trimmed {
        is_trimmed[v] = true;
    }
    let mut sizes = vec![0usize; k];
    for (v, &l) in labels.iter().enumerate() {
        if !is_trimmed[v] {
            sizes[l] += 1;
        }
    }
    let chosen: Vec<usize> = trimmed
        .par_iter()
        .map(|&v| {
            let mut counts = vec![0usize; k];
            for &w in g.neighbors(v) {
                if !is_trimmed[w] {
                    counts[labels[w]] += 1;
                }
            }
            best_community(&counts, &sizes, seed, &[stream::ASSIGN_TRIMMED, v as u64])
        })
        .collect();
    for (&v, c) in trimmed.iter().zip(chosen) {
        labels[v] = c;
    }
}
