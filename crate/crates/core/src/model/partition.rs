use itertools::Itertools;
use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use crate::error::{Result, SbmError};

/// Largest `K` for which [`misclassified`] enumerates all `K!` label
/// permutations instead of solving the assignment problem.
pub const EXHAUSTIVE_MATCH_MAX_K: usize = 8;

/// Assignment of each vertex to one of `k` communities. Communities may be
/// empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(SbmError::param("partition needs at least one community"));
        }
        if let Some((v, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(SbmError::param(format!(
                "vertex {v} has label {l}, outside 0..{k}"
            )));
        }
        Ok(Partition { labels, k })
    }

    /// Every vertex in community 0.
    pub fn trivial(n: usize, k: usize) -> Self {
        Partition {
            labels: vec![0; n],
            k: k.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Maps label `l` to `perm[l]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k || !perm.iter().all(|&l| l < self.k) || !perm.iter().all_unique()
        {
            return Err(SbmError::param("relabeling is not a permutation of the labels"));
        }
        Ok(Partition {
            labels: self.labels.iter().map(|&l| perm[l]).collect(),
            k: self.k,
        })
    }

    /// `confusion[t][e]` counts vertices with label `t` here and `e` in
    /// `other`.
    pub fn confusion(&self, other: &Partition) -> Vec<Vec<usize>> {
        let mut c = vec![vec![0usize; other.k]; self.k];
        for (&t, &e) in self.labels.iter().zip(&other.labels) {
            c[t][e] += 1;
        }
        c
    }
}

fn check_comparable(estimate: &Partition, truth: &Partition) -> Result<()> {
    if estimate.len() != truth.len() {
        return Err(SbmError::param(format!(
            "partitions cover {} and {} vertices",
            estimate.len(),
            truth.len()
        )));
    }
    if estimate.k() != truth.k() {
        return Err(SbmError::param(format!(
            "partitions have {} and {} communities",
            estimate.k(),
            truth.k()
        )));
    }
    Ok(())
}

/// Number of misclassified vertices: the minimum over label permutations
/// `σ` of `|{v : estimate(v) ≠ σ(truth(v))}|`.
pub fn misclassified(estimate: &Partition, truth: &Partition) -> Result<usize> {
    check_comparable(estimate, truth)?;
    if truth.k() <= EXHAUSTIVE_MATCH_MAX_K {
        misclassified_exhaustive(estimate, truth)
    } else {
        misclassified_assignment(estimate, truth)
    }
}

/// Enumerates all `K!` permutations.
pub fn misclassified_exhaustive(estimate: &Partition, truth: &Partition) -> Result<usize> {
    check_comparable(estimate, truth)?;
    let c = truth.confusion(estimate);
    let k = truth.k();
    let best = (0..k)
        .permutations(k)
        .map(|sigma| (0..k).map(|t| c[t][sigma[t]]).sum::<usize>())
        .max()
        .unwrap_or(0);
    Ok(truth.len() - best)
}

/// Solves the maximum-weight matching on the `K×K` confusion matrix with
/// the Hungarian method.
pub fn misclassified_assignment(estimate: &Partition, truth: &Partition) -> Result<usize> {
    check_comparable(estimate, truth)?;
    let c = truth.confusion(estimate);
    let k = truth.k();
    let weights = Matrix::from_vec(
        k,
        k,
        c.iter().flatten().map(|&x| x as i64).collect(),
    )
    .expect("square confusion matrix");
    let (matched, _) = kuhn_munkres(&weights);
    Ok(truth.len() - matched as usize)
}
