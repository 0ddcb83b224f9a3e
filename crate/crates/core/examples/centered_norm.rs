//! Track ||A_Γ − E[A_Γ]|| / sqrt(np) as n grows at fixed (a, b).

use spectral_sbm::harness::{diagnose_instance, index_slope};
use spectral_sbm::model::SbmParams;

fn main() -> spectral_sbm::Result<()> {
    let mut ratios = Vec::new();
    println!("{:>6} {:>10} {:>9} {:>7} {:>8} {:>8}", "n", "norm", "sqrt(np)", "ratio", "trimmed", "H2 viol");
    for n in [500, 1000, 2000, 4000] {
        let params = SbmParams::binary_symmetric(n, 20.0, 2.0)?;
        let row = diagnose_instance(&params, 5, 5.0)?;
        println!(
            "{n:>6} {:>10.4} {:>9.4} {:>7.4} {:>8} {:>8.4}",
            row.spectral_norm, row.sqrt_np, row.ratio, row.trimmed, row.h2_violation_frac
        );
        ratios.push(row.ratio);
    }
    println!("slope of ratio against n-index: {:.4}", index_slope(&ratios));
    Ok(())
}
