//! Sparse symmetric matrices, spectral norm estimation and truncated
//! rank-`K` approximation.
//!
//! Both estimators run block subspace iteration with a Rayleigh-Ritz step
//! every iteration. The small projected eigenproblem is solved with
//! `nalgebra`; everything that touches the `n`-dimensional operator goes
//! through [`SymOperator::apply`].

mod sparse;
mod subspace;

use nalgebra::DMatrix;
use rayon::prelude::*;

pub use sparse::{CenteredBlockOp, SparseSym, SymOperator};
pub use subspace::SubspaceOptions;

use crate::error::{Result, SbmError};
use subspace::top_eigenpairs;

/// Default tolerance for iterative convergence.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default tolerance for comparisons against dense references.
pub const ORACLE_TOL: f64 = 1e-8;

/// Block width used by [`spectral_norm`].
const NORM_BLOCK: usize = 8;

/// Above this dimension the Frobenius error of a rank-`K` approximation is
/// taken from the discarded spectral energy instead of an entrywise sum.
const DIRECT_FROBENIUS_MAX_N: usize = 8192;

/// `‖M‖₂` (largest absolute eigenvalue) by block power iteration from a
/// fixed-seed random start.
pub fn spectral_norm<M: SymOperator + ?Sized>(m: &M, tol: f64, max_iters: usize) -> Result<f64> {
    spectral_norm_seeded(m, tol, max_iters, 0)
}

pub fn spectral_norm_seeded<M: SymOperator + ?Sized>(
    m: &M,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<f64> {
    if m.dim() == 0 {
        return Err(SbmError::param("spectral norm of an empty matrix"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SbmError::param(format!("tolerance {tol} must be positive")));
    }
    let opts = SubspaceOptions {
        oversample: NORM_BLOCK - 1,
        tol,
        max_iters,
        seed,
    };
    let pairs = top_eigenpairs(m, 1, &opts)?;
    Ok(pairs.values[0].abs())
}

/// Rank-`K` factor representation of `Â = U Λ Uᵀ`.
///
/// Row `v` of the embedding is `(UΛ)_v`. Since `U` has orthonormal
/// columns, `‖Â_u − Â_v‖ = ‖(UΛ)_u − (UΛ)_v‖`, so row distances cost
/// `O(K)`.
#[derive(Debug, Clone)]
pub struct Embedding {
    n: usize,
    k: usize,
    rows: Vec<f64>,
    basis: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    frobenius_err: f64,
    iterations: usize,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, v: usize) -> &[f64] {
        &self.rows[v * self.k..(v + 1) * self.k]
    }

    pub fn dist_sq(&self, u: usize, v: usize) -> f64 {
        squared_distance(self.row(u), self.row(v))
    }

    /// Kept eigenvalues, by decreasing magnitude.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `‖M − Â‖_F`.
    pub fn frobenius_err(&self) -> f64 {
        self.frobenius_err
    }

    /// `‖Â‖₂`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Orthonormal eigenvector basis `U` (`n × K`).
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Dense `Â`. Intended for small test matrices.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let scaled = DMatrix::from_row_slice(self.n, self.k, &self.rows);
        scaled * self.basis.transpose()
    }
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Best rank-`K` approximation in Frobenius norm: the `K` eigenpairs of
/// largest magnitude. Uses `oversample = 8` and seed 0.
pub fn k_rank_approx(m: &SparseSym, k: usize, tol: f64) -> Result<Embedding> {
    k_rank_approx_with(
        m,
        k,
        &SubspaceOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn k_rank_approx_with(m: &SparseSym, k: usize, opts: &SubspaceOptions) -> Result<Embedding> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(SbmError::param(format!("rank {k} must lie in 1..={n}")));
    }
    let pairs = top_eigenpairs(m, k, opts)?;
    let mut rows = vec![0.0; n * k];
    for v in 0..n {
        for c in 0..k {
            rows[v * k + c] = pairs.vectors[(v, c)] * pairs.values[c];
        }
    }
    let frobenius_err = if n <= DIRECT_FROBENIUS_MAX_N {
        direct_frobenius_err(m, &rows, &pairs.vectors, k)
    } else {
        let kept: f64 = pairs.values.iter().map(|v| v * v).sum();
        (m.frobenius_sq() - kept).max(0.0).sqrt()
    };
    Ok(Embedding {
        n,
        k,
        rows,
        basis: pairs.vectors,
        eigenvalues: pairs.values,
        frobenius_err,
        iterations: pairs.iterations,
    })
}

/// `‖M − (UΛ)Uᵀ‖_F` summed entry by entry, one row per task.
fn direct_frobenius_err(m: &SparseSym, rows: &[f64], basis: &DMatrix<f64>, k: usize) -> f64 {
    let n = m.n();
    let basis_rows: Vec<f64> = basis.transpose().as_slice().to_vec();
    let per_row: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = &rows[i * k..(i + 1) * k];
            let mut dense: Vec<f64> = (0..n)
                .map(|j| {
                    let uj = &basis_rows[j * k..(j + 1) * k];
                    ri.iter().zip(uj).map(|(a, b)| a * b).sum::<f64>()
                })
                .collect();
            for (j, v) in m.row(i) {
                dense[j] -= v;
            }
            dense.iter().map(|d| d * d).sum::<f64>()
        })
        .collect();
    per_row.iter().sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_ones(n: usize) -> SparseSym {
        let entries: Vec<_> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j, 1.0)))
            .collect();
        SparseSym::from_upper_triplets(n, &entries).unwrap()
    }

    fn identity(n: usize) -> SparseSym {
        let entries: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        SparseSym::from_upper_triplets(n, &entries).unwrap()
    }

    #[test]
    fn norm_of_simple_matrices() {
        assert!((spectral_norm(&all_ones(4), 1e-10, 100).unwrap() - 4.0).abs() < 1e-12);
        assert!((spectral_norm(&identity(20), 1e-10, 100).unwrap() - 1.0).abs() < 1e-12);
        let zero = SparseSym::from_upper_triplets(12, &[]).unwrap();
        assert_eq!(spectral_norm(&zero, 1e-10, 100).unwrap(), 0.0);
    }

    #[test]
    fn norm_sees_negative_eigenvalues() {
        let m = SparseSym::from_upper_triplets(30, &[(0, 0, -5.0), (1, 1, 2.0), (2, 2, 4.0)]).unwrap();
        assert!((spectral_norm(&m, 1e-10, 100).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_recovered_exactly() {
        let x: Vec<f64> = (0..25).map(|i| 1.0 + (i % 7) as f64).collect();
        let mut entries = Vec::new();
        for i in 0..25 {
            for j in i..25 {
                entries.push((i, j, x[i] * x[j]));
            }
        }
        let m = SparseSym::from_upper_triplets(25, &entries).unwrap();
        let e = k_rank_approx(&m, 1, 1e-10).unwrap();
        assert!(e.frobenius_err() <= 1e-10, "{}", e.frobenius_err());
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        assert!((e.eigenvalues()[0] - norm_sq).abs() < 1e-9 * norm_sq);
    }

    #[test]
    fn full_rank_keeps_everything() {
        let e = k_rank_approx(&identity(5), 5, 1e-10).unwrap();
        assert_eq!(e.frobenius_err(), 0.0);
        assert!((e.to_dense() - DMatrix::identity(5, 5)).abs().max() < 1e-14);
    }

    #[test]
    fn rank_bounds_checked() {
        assert!(k_rank_approx(&identity(5), 0, 1e-6).is_err());
        assert!(k_rank_approx(&identity(5), 6, 1e-6).is_err());
    }

    #[test]
    fn embedding_distances_match_dense_rows() {
        let m = SparseSym::from_upper_triplets(
            20,
            &(0..19).map(|i| (i, i + 1, 1.0)).collect::<Vec<_>>(),
        )
        .unwrap();
        let e = k_rank_approx(&m, 3, 1e-10).unwrap();
        let dense = e.to_dense();
        for (u, v) in [(0, 5), (3, 4), (10, 19)] {
            let diff = (dense.row(u) - dense.row(v)).norm_squared();
            assert!((diff - e.dist_sq(u, v)).abs() < 1e-10);
        }
    }
}
