use std::io::Write;

use crate::detect::trim;
use crate::error::Result;
use crate::linalg::{spectral_norm_seeded, CenteredBlockOp, SparseSym};
use crate::model::{generate_sbm, Graph, Partition, SbmParams};

pub const DIAGNOSTIC_HEADER: [&str; 12] = [
    "n",
    "p",
    "q",
    "seed",
    "spectral_norm",
    "sqrt_np",
    "ratio",
    "trimmed",
    "h2_violation_frac",
    "h1_violation_frac",
    "h1_min_margin_over_p",
    "h1_mean_margin_over_p",
];

/// Per-instance concentration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub seed: u64,
    /// `‖A_Γ − E[A_Γ]‖`, with the expectation taken from the true blocks.
    pub spectral_norm: f64,
    pub sqrt_np: f64,
    pub ratio: f64,
    /// `|V \ Γ|`.
    pub trimmed: usize,
    /// Fraction of vertices with `e(v, V) > 10np`.
    pub h2_violation_frac: f64,
    /// Fraction of vertices whose connectivity margin
    /// `min_{j≠k} e(v,V_k)/|V_k| − e(v,V_j)/|V_j|` falls below
    /// `p / ln⁴(np)`.
    pub h1_violation_frac: f64,
    pub h1_min_margin_over_p: f64,
    pub h1_mean_margin_over_p: f64,
}

impl DiagnosticRow {
    pub fn csv_record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.p.to_string(),
            self.q.to_string(),
            self.seed.to_string(),
            self.spectral_norm.to_string(),
            self.sqrt_np.to_string(),
            self.ratio.to_string(),
            self.trimmed.to_string(),
            self.h2_violation_frac.to_string(),
            self.h1_violation_frac.to_string(),
            self.h1_min_margin_over_p.to_string(),
            self.h1_mean_margin_over_p.to_string(),
        ]
    }
}

/// Connectivity margin of every vertex against its own community.
pub fn connectivity_margins(g: &Graph, truth: &Partition) -> Vec<f64> {
    let sizes = truth.sizes();
    (0..g.n())
        .map(|v| {
            let own = truth.label(v);
            let counts = g.edges_into_labels(v, truth.labels(), truth.k());
            let avg = |k: usize| counts[k] as f64 / sizes[k] as f64;
            (0..truth.k())
                .filter(|&j| j != own && sizes[j] > 0)
                .map(|j| avg(own) - avg(j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

pub fn diagnose_instance(params: &SbmParams, seed: u64, trim_multiplier: f64) -> Result<DiagnosticRow> {
    let (g, truth) = generate_sbm(params, seed);
    let n = params.n();
    let (p, q) = (params.p(), params.q());
    let np = n as f64 * p;

    let kept = trim(&g, params.k(), trim_multiplier)?;
    let a_gamma = SparseSym::induced(&g, &kept.gamma);
    let labels: Vec<usize> = kept.gamma.iter().map(|&v| truth.label(v)).collect();
    let centered = CenteredBlockOp::new(&a_gamma, labels, params.k(), p, q)?;
    let norm = spectral_norm_seeded(&centered, 1e-6, 5000, seed)?;

    let h2 = (0..n).filter(|&v| g.degree(v) as f64 > 10.0 * np).count();
    let margins = connectivity_margins(&g, &truth);
    let h1_floor = p / np.ln().powi(4);
    let h1 = margins.iter().filter(|&&m| m < h1_floor).count();
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_margin = margins.iter().sum::<f64>() / n as f64;

    let sqrt_np = np.sqrt();
    Ok(DiagnosticRow {
        n,
        p,
        q,
        seed,
        spectral_norm: norm,
        sqrt_np,
        ratio: norm / sqrt_np,
        trimmed: kept.removed.len(),
        h2_violation_frac: h2 as f64 / n as f64,
        h1_violation_frac: h1 as f64 / n as f64,
        h1_min_margin_over_p: min_margin / p,
        h1_mean_margin_over_p: mean_margin / p,
    })
}

/// Runs every `(params, seed)` combination and writes one CSV row each.
/// An empty parameter list yields a header-only file.
pub fn diagnose<W: Write>(
    params: &[SbmParams],
    seeds: &[u64],
    trim_multiplier: f64,
    out: W,
) -> Result<Vec<DiagnosticRow>> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(DIAGNOSTIC_HEADER)?;
    let mut rows = Vec::new();
    for p in params {
        for &seed in seeds {
            let row = diagnose_instance(p, seed, trim_multiplier)?;
            writer.write_record(row.csv_record())?;
            rows.push(row);
        }
    }
    writer.flush()?;
    Ok(rows)
}

/// Least-squares slope of `values` against their index `0, 1, 2, …`.
pub fn index_slope(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean_x = (m - 1.0) / 2.0;
    let mean_y = values.iter().sum::<f64>() / m;
    let (num, den) = values.iter().enumerate().fold((0.0, 0.0), |(num, den), (i, y)| {
        let dx = i as f64 - mean_x;
        (num + dx * (y - mean_y), den + dx * dx)
    });
    num / den
}
