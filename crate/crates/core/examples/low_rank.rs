//! Compare the iterative rank-K approximation with a dense eigendecomposition.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_sbm::linalg::{k_rank_approx, spectral_norm, SparseSym, ORACLE_TOL};
use spectral_sbm::oracle::dense_eigen;

fn main() -> spectral_sbm::Result<()> {
    let n = 80;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < 0.2 {
                let x = rng.random_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
    }
    let sparse = SparseSym::from_dense(&m)?;
    let dense = dense_eigen(&m)?;

    let norm = spectral_norm(&sparse, ORACLE_TOL, 10_000)?;
    println!("spectral norm: iterative {norm:.10}, dense {:.10}", dense.spectral_norm());

    for k in [1, 2, 4, 8, 16] {
        let emb = k_rank_approx(&sparse, k, 1e-9)?;
        println!(
            "k={k:>2}  ||M - M_k||_F  iterative {:.8}  dense {:.8}  ({} iterations)",
            emb.frobenius_err(),
            dense.truncation_error(k),
            emb.iterations()
        );
    }
    Ok(())
}
