use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::Rng;

use super::SymOperator;
use crate::error::{Result, SbmError};
use crate::rng::{stream, stream_rng};

/// Controls for block subspace iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubspaceOptions {
    /// Extra columns carried beyond the number of wanted eigenpairs.
    pub oversample: usize,
    /// Relative residual `‖Mu − θu‖ ≤ tol · max|θ|` required of every
    /// wanted Ritz pair.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SubspaceOptions {
    fn default() -> Self {
        SubspaceOptions {
            oversample: 8,
            tol: 1e-6,
            max_iters: 5000,
            seed: 0,
        }
    }
}

/// Eigenpairs sorted by decreasing `|θ|`; ties go to the larger `θ`, then
/// to the lower index of the projected problem.
#[derive(Debug, Clone)]
pub(crate) struct EigenPairs {
    pub values: Vec<f64>,
    /// One eigenvector per column.
    pub vectors: DMatrix<f64>,
    pub iterations: usize,
}

fn magnitude_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        values[j]
            .abs()
            .partial_cmp(&values[i].abs())
            .unwrap_or(Ordering::Equal)
            .then(values[j].partial_cmp(&values[i]).unwrap_or(Ordering::Equal))
            .then(i.cmp(&j))
    });
    idx
}

fn sorted_eigen(t: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (&t + t.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let order = magnitude_order(eig.eigenvalues.as_slice());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = eig.eigenvectors.select_columns(order.iter());
    (values, vectors)
}

fn orthonormalize(y: DMatrix<f64>) -> DMatrix<f64> {
    y.qr().q()
}

/// The `want` eigenpairs of largest magnitude.
pub(crate) fn top_eigenpairs<M: SymOperator + ?Sized>(
    op: &M,
    want: usize,
    opts: &SubspaceOptions,
) -> Result<EigenPairs> {
    let n = op.dim();
    let block = (want + opts.oversample).min(n);
    if block == n {
        // The block spans the whole space: one Rayleigh-Ritz step on the
        // identity is exact.
        let dense = op.apply(&DMatrix::identity(n, n));
        let (values, vectors) = sorted_eigen(dense);
        return Ok(EigenPairs {
            values: values[..want].to_vec(),
            vectors: vectors.columns(0, want).into_owned(),
            iterations: 1,
        });
    }

    let mut rng = stream_rng(opts.seed, &[stream::LOW_RANK]);
    let start = DMatrix::from_fn(n, block, |_, _| rng.random::<f64>() * 2.0 - 1.0);
    let mut basis = orthonormalize(start);
    let mut last = 0.0;
    for iter in 1..=opts.max_iters {
        let image = op.apply(&basis);
        let projected = basis.transpose() * &image;
        let (values, rotation) = sorted_eigen(projected);
        let ritz = &basis * &rotation;
        let ritz_image = &image * &rotation;
        let scale = values[0].abs();
        last = scale;
        let converged = (0..want).all(|i| {
            let r = ritz_image.column(i) - ritz.column(i) * values[i];
            r.norm() <= opts.tol * scale
        });
        if converged {
            return Ok(EigenPairs {
                values: values[..want].to_vec(),
                vectors: ritz.columns(0, want).into_owned(),
                iterations: iter,
            });
        }
        basis = orthonormalize(ritz_image);
    }
    Err(SbmError::Convergence {
        iterations: opts.max_iters,
        last_estimate: last,
    })
}
