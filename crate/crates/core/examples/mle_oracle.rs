//! On a tiny graph, compare Spectral Partition with the exhaustive
//! maximum-likelihood partition.

use spectral_sbm::detect::{spectral_partition, DetectConfig};
use spectral_sbm::model::{generate_sbm, misclassified, SbmParams};
use spectral_sbm::oracle::mle_exhaustive;

fn main() -> spectral_sbm::Result<()> {
    let params = SbmParams::balanced(12, 2, 0.8, 0.1)?;
    for seed in 0..5 {
        let (g, truth) = generate_sbm(&params, seed);
        let mle = mle_exhaustive(&g, &params, true)?;
        let spectral = spectral_partition(&g, 2, &DetectConfig::with_seed(seed))?;
        println!(
            "seed {seed}: edges {:>2}  MLE errors {}  spectral errors {}  spectral vs MLE {}",
            g.edge_count(),
            misclassified(&mle.partition, &truth)?,
            misclassified(&spectral.estimate, &truth)?,
            misclassified(&spectral.estimate, &mle.partition)?,
        );
    }
    Ok(())
}
