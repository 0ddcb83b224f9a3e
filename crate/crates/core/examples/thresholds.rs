//! Evaluate the recovery condition for a few parameter settings.

use spectral_sbm::model::{check_condition, divergence, log_scale, log_scaled_margin, RecoveryTarget, SbmParams};

fn main() -> spectral_sbm::Result<()> {
    let n = 2000;
    println!("{:>6} {:>6} {:>8} {:>10} {:>9} {:>9} {:>6}", "a", "b", "margin", "D/ln n", "s", "ratio", "holds");
    for &(a, b) in &[(20.0, 2.0), (1.2, 1.0), (10.4, 4.0), (9.0, 1.0), (4.0, 1.0)] {
        let params = SbmParams::binary_symmetric(n, a, b)?;
        for target in [RecoveryTarget::Exact, RecoveryTarget::Power(0.5)] {
            let s = target.resolve(n);
            let report = check_condition(&params, s)?;
            println!(
                "{a:>6} {b:>6} {:>8.4} {:>10.4} {s:>9.3} {:>9.3} {:>6}",
                log_scaled_margin(a, b),
                divergence(&params) / (n as f64).ln(),
                report.eq1_ratio,
                report.theorem1_holds,
            );
        }
    }

    // Unequal communities: the condition is governed by the two smallest.
    let scale = log_scale(1800);
    let params = SbmParams::new(1800, vec![1.0 / 6.0, 1.0 / 3.0, 0.5], 30.0 * scale, 2.0 * scale)?;
    let report = check_condition(&params, 0.0)?;
    println!("\nK=3, alphas 1/6,1/3,1/2: {report:#?}");
    Ok(())
}
