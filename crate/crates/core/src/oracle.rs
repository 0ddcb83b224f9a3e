//! Brute-force references for testing: a cyclic Jacobi eigensolver and
//! exhaustive maximum-likelihood partitioning.
//!
//! Nothing here is used by the detection pipeline. The Jacobi solver
//! shares no code with [`crate::linalg`].

use nalgebra::DMatrix;

use crate::error::{Result, SbmError};
use crate::model::{Graph, Partition, SbmParams};

pub const DENSE_EIGEN_MAX_N: usize = 200;
pub const MLE_MAX_N: usize = 14;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct DenseEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl DenseEigen {
    /// `‖M − M_K‖_F` for the best rank-`k` truncation: the root of the sum
    /// of squares of all but the `k` largest-magnitude eigenvalues.
    pub fn truncation_error(&self, k: usize) -> f64 {
        let mut sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        sq.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sq[k.min(sq.len())..].iter().sum::<f64>().sqrt()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.values.clone()));
        &self.vectors * lambda * self.vectors.transpose()
    }
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn dense_eigen(m: &DMatrix<f64>) -> Result<DenseEigen> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(SbmError::param("matrix is not square"));
    }
    if n > DENSE_EIGEN_MAX_N {
        return Err(SbmError::param(format!(
            "dense reference limited to n ≤ {DENSE_EIGEN_MAX_N}"
        )));
    }
    for i in 0..n {
        for j in 0..i {
            if m[(i, j)] != m[(j, i)] {
                return Err(SbmError::param(format!("matrix not symmetric at ({i}, {j})")));
            }
        }
    }
    let mut a = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap().then(i.cmp(&j)));
    Ok(DenseEigen {
        values: order.iter().map(|&i| a[(i, i)]).collect(),
        vectors: v.select_columns(order.iter()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LikelihoodScore {
    pub log_likelihood: f64,
    pub partition: Partition,
}

/// Maximum-likelihood partition by enumerating all `K^n` labelings in
/// lexicographic order; the first maximizer wins, so ties resolve to the
/// lexicographically smallest label vector. With `size_constrained`, only
/// labelings giving community `k` exactly its planted size are scored.
pub fn mle_exhaustive(g: &Graph, params: &SbmParams, size_constrained: bool) -> Result<LikelihoodScore> {
    let n = g.n();
    if n != params.n() {
        return Err(SbmError::param("graph and parameters disagree on n"));
    }
    if n > MLE_MAX_N {
        return Err(SbmError::param(format!(
            "exhaustive likelihood search limited to n ≤ {MLE_MAX_N}"
        )));
    }
    let (p, q) = (params.p(), params.q());
    if !(0.0 < q && q <= p && p < 1.0) {
        return Err(SbmError::param("likelihood needs 0 < q ≤ p < 1"));
    }
    let k = params.k();
    let planted = params.community_sizes();
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let total_pairs = n * n.saturating_sub(1) / 2;
    let (lp, lnp, lq, lnq) = (p.ln(), (-p).ln_1p(), q.ln(), (-q).ln_1p());

    let mut labels = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        if !size_constrained || sizes == planted {
            let within_pairs: usize = sizes.iter().map(|s| s * s.saturating_sub(1) / 2).sum();
            let within_edges = edges.iter().filter(|(u, v)| labels[*u] == labels[*v]).count();
            let across_edges = edges.len() - within_edges;
            let ll = within_edges as f64 * lp
                + (within_pairs - within_edges) as f64 * lnp
                + across_edges as f64 * lq
                + (total_pairs - within_pairs - across_edges) as f64 * lnq;
            if best.as_ref().is_none_or(|(b, _)| ll > *b) {
                best = Some((ll, labels.clone()));
            }
        }
        // Next labeling, vertex n−1 varying fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                let (log_likelihood, labels) = best.ok_or_else(|| {
                    SbmError::param("no labeling satisfies the size constraint")
                })?;
                return Ok(LikelihoodScore {
                    log_likelihood,
                    partition: Partition::new(labels, k)?,
                });
            }
            pos -= 1;
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
        }
    }
}
