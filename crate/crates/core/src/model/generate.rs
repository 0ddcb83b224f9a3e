use rand::Rng;

use super::{Graph, Partition, SbmParams};
use crate::rng::{stream, stream_rng};

/// Draws a graph from the block model.
///
/// Every unordered pair `u < v` is visited in lexicographic order and
/// receives exactly one uniform `f64` from a `ChaCha8Rng` derived from
/// `seed`; the edge is present when the draw is below `p` (same
/// community) or `q` (different communities). The ground truth assigns
/// contiguous vertex ranges to communities `0, 1, …`.
pub fn generate_sbm(params: &SbmParams, seed: u64) -> (Graph, Partition) {
    let n = params.n();
    let labels = params.truth_labels();
    let mut rng = stream_rng(seed, &[stream::GENERATE]);
    let mut pairs = Vec::with_capacity(params.expected_edges().ceil() as usize + 16);
    for u in 0..n {
        for v in (u + 1)..n {
            let prob = if labels[u] == labels[v] {
                params.p()
            } else {
                params.q()
            };
            let draw: f64 = rng.random();
            if draw < prob {
                pairs.push((u, v));
            }
        }
    }
    let graph = Graph::from_sorted_unique(n, &pairs);
    let truth = Partition::new(labels, params.k()).expect("truth labels are in range");
    (graph, truth)
}
