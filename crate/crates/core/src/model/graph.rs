use crate::error::{Result, SbmError};

/// Undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are sorted. Each undirected edge is stored twice, once
/// in each endpoint's list, so `degree_sum == 2 * edge_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    degree_sum: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
            degree_sum: 0,
        }
    }

    /// Builds a graph from unordered pairs. Duplicate pairs collapse into one
    /// edge; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(SbmError::param(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(SbmError::param(format!("self-loop at vertex {u}")));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_unique(n, &pairs))
    }

    /// `pairs` must be sorted, deduplicated and satisfy `u < v < n`.
    pub(crate) fn from_sorted_unique(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * pairs.len()];
        // Lexicographic pair order fills lower neighbors before higher ones
        // in every list, so the lists come out sorted.
        for &(u, v) in pairs {
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for &(u, v) in pairs {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
        }
        Graph {
            n,
            offsets,
            neighbors,
            degree_sum: 2 * pairs.len(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.degree_sum / 2
    }

    /// `Σ_v deg(v)`, i.e. twice the number of edges.
    pub fn degree_sum(&self) -> usize {
        self.degree_sum
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (u, v))
        })
    }

    /// `e(v, S_k)` for every label `k`: the number of neighbors of `v`
    /// carrying each label.
    pub fn edges_into_labels(&self, v: usize, labels: &[usize], k: usize) -> Vec<usize> {
        let mut counts = vec![0usize; k];
        for &w in self.neighbors(v) {
            counts[labels[w]] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_is_symmetric_and_sorted() {
        let g = Graph::from_edges(5, [(3, 1), (0, 4), (1, 0), (1, 3), (2, 4)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree_sum(), 8);
        for u in 0..5 {
            assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbors(u) {
                assert!(g.has_edge(v, u));
            }
        }
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 4), (1, 3), (2, 4)]);
    }

    #[test]
    fn rejects_loops_and_out_of_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn label_edge_counts() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.edges_into_labels(0, &[0, 0, 1, 1], 2), vec![1, 2]);
    }
}
