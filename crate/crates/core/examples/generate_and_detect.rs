//! Sample a two-community graph and recover the communities.
//!
//! ```text
//! cargo run --release --example generate_and_detect -- 2000 20 2
//! ```

use spectral_sbm::detect::{spectral_partition, DetectConfig};
use spectral_sbm::model::{generate_sbm, SbmParams};

fn main() -> spectral_sbm::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(2000.0) as usize;
    let a = args.get(1).copied().unwrap_or(20.0);
    let b = args.get(2).copied().unwrap_or(2.0);

    let params = SbmParams::binary_symmetric(n, a, b)?;
    let (g, truth) = generate_sbm(&params, 7);
    println!("n={n} p={:.5} q={:.5} edges={}", params.p(), params.q(), g.edge_count());

    let result = spectral_partition(&g, 2, &DetectConfig::with_seed(7))?;
    let stages = result.stage_misclassified(&truth)?;
    println!("trimmed vertices: {}", result.trim.removed.len());
    if let Some(trace) = &result.trace {
        println!("top eigenvalues: {:?}", trace.eigenvalues);
        println!("chosen radius index: {}", trace.i_star());
    }
    println!("misclassified after spectral stage: {}", stages.after_spectral);
    println!("misclassified after improvement:    {}", stages.after_improvement);
    println!("label changes per round: {:?}", result.improvement_deltas);
    Ok(())
}
