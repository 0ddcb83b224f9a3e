use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Result, SbmError};
use crate::model::Graph;

/// A real symmetric linear operator that can be applied to a block of
/// column vectors.
pub trait SymOperator: Sync {
    fn dim(&self) -> usize;

    /// `M · X` for an `n × b` block `X`.
    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64>;
}

/// Sparse symmetric matrix in CSR form with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSym {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSym {
    /// Adjacency matrix of `g`.
    pub fn from_graph(g: &Graph) -> Self {
        let vertices: Vec<usize> = (0..g.n()).collect();
        Self::induced(g, &vertices)
    }

    /// Adjacency matrix of the subgraph induced by `vertices`, indexed by
    /// position in `vertices`. `vertices` must be strictly increasing.
    pub fn induced(g: &Graph, vertices: &[usize]) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut position = vec![usize::MAX; g.n()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v] = i;
        }
        let mut offsets = Vec::with_capacity(vertices.len() + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        for &v in vertices {
            cols.extend(
                g.neighbors(v)
                    .iter()
                    .map(|&w| position[w])
                    .filter(|&j| j != usize::MAX),
            );
            offsets.push(cols.len());
        }
        let vals = vec![1.0; cols.len()];
        SparseSym {
            n: vertices.len(),
            offsets,
            cols,
            vals,
        }
    }

    /// Builds from `(i, j, value)` entries of the upper triangle (`i ≤ j`);
    /// the lower triangle is mirrored. Repeated entries are summed.
    pub fn from_upper_triplets(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in entries {
            if i >= n || j >= n {
                return Err(SbmError::param(format!("entry ({i}, {j}) outside {n}x{n}")));
            }
            if i > j {
                return Err(SbmError::param(format!(
                    "entry ({i}, {j}) is below the diagonal"
                )));
            }
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                if cols.len() > *offsets.last().unwrap() && *cols.last().unwrap() == j {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                }
            }
            offsets.push(cols.len());
        }
        Ok(SparseSym {
            n,
            offsets,
            cols,
            vals,
        })
    }

    /// Keeps the upper triangle of a dense symmetric matrix.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(SbmError::param("matrix is not square"));
        }
        let n = m.nrows();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(SbmError::param(format!("matrix not symmetric at ({i}, {j})")));
                }
                if m[(i, j)] != 0.0 {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        Self::from_upper_triplets(n, &entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        SparseSym {
            vals: self.vals.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// Applies `row_fn` to every row of `x` in parallel and assembles the
/// result. Each output row is computed by one task with a fixed summation
/// order, so the result does not depend on the thread count.
pub(crate) fn rowwise<F>(n: usize, x: &DMatrix<f64>, row_fn: F) -> DMatrix<f64>
where
    F: Fn(usize, &[f64], &mut [f64]) + Sync,
{
    let b = x.ncols();
    let x_rows: Vec<f64> = x.transpose().as_slice().to_vec();
    let mut out = vec![0.0; n * b];
    out.par_chunks_mut(b.max(1))
        .enumerate()
        .for_each(|(i, out_row)| row_fn(i, &x_rows, out_row));
    DMatrix::from_row_slice(n, b, &out)
}

impl SymOperator for SparseSym {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(x.nrows(), self.n, "dimension mismatch");
        let b = x.ncols();
        rowwise(self.n, x, |i, x_rows, out| {
            for (j, v) in self.row(i) {
                let xr = &x_rows[j * b..(j + 1) * b];
                for (o, xv) in out.iter_mut().zip(xr) {
                    *o += v * xv;
                }
            }
        })
    }
}

/// `A_Γ − E[A_Γ]` for a block-model graph restricted to `Γ`, where the
/// expectation is built from the true block labels and `(p, q)`.
/// Available only in simulation; used for spectral-norm diagnostics.
pub struct CenteredBlockOp<'a> {
    adjacency: &'a SparseSym,
    labels: Vec<usize>,
    k: usize,
    p: f64,
    q: f64,
}

impl<'a> CenteredBlockOp<'a> {
    /// `labels[i]` is the true community of the `i`-th row of `adjacency`.
    pub fn new(adjacency: &'a SparseSym, labels: Vec<usize>, k: usize, p: f64, q: f64) -> Result<Self> {
        if labels.len() != adjacency.n() {
            return Err(SbmError::param("one label per matrix row required"));
        }
        if labels.iter().any(|&l| l >= k) {
            return Err(SbmError::param("label out of range"));
        }
        Ok(CenteredBlockOp {
            adjacency,
            labels,
            k,
            p,
            q,
        })
    }
}

impl SymOperator for CenteredBlockOp<'_> {
    fn dim(&self) -> usize {
        self.adjacency.n()
    }

    fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let b = x.ncols();
        let ax = self.adjacency.apply(x);
        // Per-community column sums of x.
        let mut block_sums = vec![vec![0.0; b]; self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            for c in 0..b {
                block_sums[l][c] += x[(i, c)];
            }
        }
        let total: Vec<f64> = (0..b)
            .map(|c| block_sums.iter().map(|s| s[c]).sum())
            .collect();
        // E[A] has q everywhere, p − q added inside blocks, and a zero
        // diagonal.
        let mut out = ax;
        for (i, &l) in self.labels.iter().enumerate() {
            for c in 0..b {
                let expected =
                    self.q * total[c] + (self.p - self.q) * block_sums[l][c] - self.p * x[(i, c)];
                out[(i, c)] -= expected;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_matches_dense() {
        let m = SparseSym::from_upper_triplets(
            3,
            &[(0, 0, 2.0), (0, 2, -1.0), (1, 2, 0.5), (1, 2, 0.5)],
        )
        .unwrap();
        assert_eq!(m.nnz(), 5);
        let d = m.to_dense();
        assert_eq!(d, d.transpose());
        assert_eq!(d[(1, 2)], 1.0);
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 2.0, 1.0, 3.0, -1.0]);
        assert_eq!(m.apply(&x), &d * &x);
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let m = SparseSym::induced(&g, &[0, 1, 3]);
        let d = m.to_dense();
        assert_eq!(d[(0, 1)], 1.0);
        assert_eq!(d[(0, 2)], 1.0);
        assert_eq!(d[(1, 2)], 0.0);
        assert_eq!(m.nnz(), 4);
    }

    #[test]
    fn centered_operator_matches_dense() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4), (0, 4)]).unwrap();
        let a = SparseSym::from_graph(&g);
        let labels = vec![0, 0, 0, 1, 1];
        let (p, q) = (0.7, 0.2);
        let op = CenteredBlockOp::new(&a, labels.clone(), 2, p, q).unwrap();
        let mut dense = a.to_dense();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    dense[(i, j)] -= if labels[i] == labels[j] { p } else { q };
                }
            }
        }
        let x = DMatrix::from_fn(5, 2, |i, j| (i as f64 + 1.0) * (j as f64 - 0.5));
        let diff = (op.apply(&x) - &dense * &x).abs().max();
        assert!(diff < 1e-12);
    }
}
