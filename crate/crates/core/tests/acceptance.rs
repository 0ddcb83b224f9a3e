//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line
//! with the measured quantity, then asserts.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use itertools::Itertools;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_sbm::detect::{spectral_partition, DetectConfig};
use spectral_sbm::harness::{diagnose_instance, index_slope, run_cell, sweep, CellSpec, SweepConfig, TrialOutcome};
use spectral_sbm::linalg::{k_rank_approx_with, spectral_norm, SparseSym, SubspaceOptions, ORACLE_TOL};
use spectral_sbm::model::io::{read_edge_list, write_edge_list};
use spectral_sbm::model::{
    divergence, generate_sbm, log_scaled_margin, misclassified, misclassified_assignment, misclassified_exhaustive,
    Partition, SbmParams,
};
use spectral_sbm::oracle::dense_eigen;

fn report(id: u32, pass: bool, detail: String, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let verdict = if pass && elapsed <= budget { "PASS" } else { "FAIL" };
    println!("criterion {id}: {verdict}  {detail}  ({:.2?} of {:?} budget)", elapsed, budget);
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(elapsed <= budget, "criterion {id} exceeded its runtime budget: {elapsed:?}");
}

/// Misclassified counts of a 20-trial cell, with failed trials as `None`.
fn cell_counts(pairs: &[(&str, &str)]) -> Vec<Option<usize>> {
    let config = SweepConfig::from_pairs(pairs.iter().copied().chain([("timing", "false")])).unwrap();
    let spec = CellSpec::cells(&config).remove(0);
    let cell = run_cell(&spec, &config);
    assert!(cell.skipped.is_none(), "{:?}", cell.skipped);
    cell.outcomes
        .iter()
        .map(|o| match o {
            TrialOutcome::Done { misclassified, .. } => Some(*misclassified),
            TrialOutcome::Failed(_) => None,
        })
        .collect()
}

fn count_within(counts: &[Option<usize>], s: f64) -> usize {
    counts.iter().filter(|c| c.is_some_and(|m| m as f64 <= s)).count()
}

#[test]
fn criterion_01_divergence_matches_log_scaled_margin() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut draws = 0;
    while draws < 1000 {
        let n = rng.random_range(50..2_000_000usize);
        let a = rng.random_range(0.01..60.0);
        let b = rng.random_range(0.01..60.0);
        let (a, b) = if a >= b { (a, b) } else { (b, a) };
        let Ok(params) = SbmParams::binary_symmetric(n, a, b) else { continue };
        draws += 1;
        let got = divergence(&params) / (n as f64).ln();
        let want = log_scaled_margin(a, b);
        let rel = (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
    }
    report(
        1,
        worst <= 1e-9,
        format!("max relative error {worst:.3e} over {draws} draws"),
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_02_divergence_is_nonnegative() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut min_seen = f64::INFINITY;
    let mut worst_equal = 0.0f64;
    for _ in 0..100_000 {
        let n = rng.random_range(2..1_000_000usize);
        let k = rng.random_range(2..=6usize);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).sorted_by(f64::total_cmp).collect();
        let total: f64 = raw.iter().sum();
        let alphas: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let x: f64 = rng.random();
        let y: f64 = rng.random();
        let params = SbmParams::new(n, alphas.clone(), x.max(y), x.min(y)).unwrap();
        min_seen = min_seen.min(divergence(&params));
        let equal = SbmParams::new(n, alphas, x, x).unwrap();
        worst_equal = worst_equal.max(divergence(&equal).abs());
    }
    report(
        2,
        min_seen >= -1e-12 && worst_equal <= 1e-12,
        format!("min divergence {min_seen:.3e}, max |divergence| at p=q {worst_equal:.3e}"),
        started,
        Duration::from_secs(5),
    );
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let density = rng.random_range(0.05..1.0);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.random::<f64>() < density {
                let x = rng.random_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
    }
    m
}

#[test]
fn criterion_03_low_rank_matches_dense_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_frob, mut worst_norm) = (0.0f64, 0.0f64);
    for case in 0..50 {
        let n = rng.random_range(4..=100usize);
        let m = random_symmetric(&mut rng, n);
        let k = rng.random_range(1..=n.min(12));
        let sparse = SparseSym::from_dense(&m).unwrap();
        let dense = dense_eigen(&m).unwrap();
        let opts = SubspaceOptions { tol: 1e-10, max_iters: 20_000, seed: case, ..Default::default() };
        let emb = k_rank_approx_with(&sparse, k, &opts).unwrap();
        worst_frob = worst_frob.max((emb.frobenius_err() - dense.truncation_error(k)).abs());
        let norm = spectral_norm(&sparse, ORACLE_TOL, 20_000).unwrap();
        let want = dense.spectral_norm();
        worst_norm = worst_norm.max((norm - want).abs() / want);
    }
    report(
        3,
        worst_frob <= 1e-6 && worst_norm <= 1e-8,
        format!("max Frobenius gap {worst_frob:.3e}, max relative norm gap {worst_norm:.3e}"),
        started,
        Duration::from_secs(30),
    );
}

fn brute_force_misclassified(estimate: &[usize], truth: &[usize], k: usize) -> usize {
    (0..k)
        .permutations(k)
        .map(|perm| estimate.iter().zip(truth).filter(|&(&e, &t)| perm[e] != t).count())
        .min()
        .unwrap()
}

#[test]
fn criterion_04_metric_matches_brute_force() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for n in 1..=8usize {
        for k in 2..=3usize {
            for _ in 0..3 {
                let truth_labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
                let truth = Partition::new(truth_labels.clone(), k).unwrap();
                for estimate_labels in (0..n).map(|_| 0..k).multi_cartesian_product() {
                    let estimate = Partition::new(estimate_labels.clone(), k).unwrap();
                    let want = brute_force_misclassified(&estimate_labels, &truth_labels, k);
                    let got = [
                        misclassified(&estimate, &truth).unwrap(),
                        misclassified_exhaustive(&estimate, &truth).unwrap(),
                        misclassified_assignment(&estimate, &truth).unwrap(),
                    ];
                    if got.iter().any(|&g| g != want) {
                        mismatches += 1;
                    }
                    checked += 1;
                }
            }
        }
    }
    report(
        4,
        mismatches == 0,
        format!("{mismatches} mismatches over {checked} (estimate, truth) pairs"),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_05_exact_recovery_supercritical() {
    let started = Instant::now();
    let counts = cell_counts(&[("n", "2000"), ("a", "20"), ("b", "2"), ("trials", "20"), ("seed", "5"), ("s", "exact")]);
    let exact = count_within(&counts, 0.0);
    report(
        5,
        exact >= 18,
        format!("margin {:.3}: exact recovery in {exact}/20 trials (need ≥ 18), counts {counts:?}", log_scaled_margin(20.0, 2.0)),
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_06_exact_recovery_subcritical() {
    let started = Instant::now();
    let counts = cell_counts(&[("n", "2000"), ("a", "1.2"), ("b", "1.0"), ("trials", "20"), ("seed", "6"), ("s", "exact")]);
    let exact = count_within(&counts, 0.0);
    report(
        6,
        exact <= 10,
        format!("margin {:.4}: exact recovery in {exact}/20 trials (need ≤ 10)", log_scaled_margin(1.2, 1.0)),
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_07_partial_recovery() {
    let started = Instant::now();
    let (a, b) = (10.4, 4.0);
    let margin = log_scaled_margin(a, b);
    assert!(margin > 0.6 && margin < 0.9);
    let counts = cell_counts(&[("n", "2000"), ("a", "10.4"), ("b", "4"), ("trials", "20"), ("seed", "7"), ("s", "n^0.5")]);
    let s = 2000f64.sqrt();
    let ok = count_within(&counts, s);
    report(
        7,
        ok >= 15,
        format!("margin {margin:.3}, s = {s:.1}: within s in {ok}/20 trials (need ≥ 15), counts {counts:?}"),
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_08_three_unequal_communities() {
    let started = Instant::now();
    let counts = cell_counts(&[
        ("n", "1800"),
        ("alphas", "1/6,1/3,1/2"),
        ("a", "30"),
        ("b", "2"),
        ("trials", "20"),
        ("seed", "8"),
        ("s", "5"),
    ]);
    let ok = count_within(&counts, 5.0);
    report(
        8,
        ok >= 18,
        format!("misclassified ≤ 5 in {ok}/20 trials (need ≥ 18), counts {counts:?}"),
        started,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_09_centered_norm_stays_bounded() {
    let started = Instant::now();
    let mut means = Vec::new();
    for n in [500, 1000, 2000, 4000] {
        let params = SbmParams::binary_symmetric(n, 20.0, 2.0).unwrap();
        let ratios: Vec<f64> = (0..3).map(|seed| diagnose_instance(&params, seed, 5.0).unwrap().ratio).collect();
        means.push(ratios.iter().sum::<f64>() / ratios.len() as f64);
    }
    let slope = index_slope(&means);
    report(
        9,
        slope <= 0.1,
        format!("mean ratios {:?}, slope {slope:.4} (need ≤ 0.1)", means.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>()),
        started,
        Duration::from_secs(300),
    );
}

fn csv_body(path: &std::path::Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .join("\n")
}

#[test]
fn criterion_10_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (run, jobs) in [(0, "4"), (1, "4"), (2, "1")] {
        let out = dir.path().join(format!("run{run}.csv"));
        let out_str = out.to_str().unwrap().to_string();
        let config = SweepConfig::from_pairs([
            ("n", "300"),
            ("a", "6,14"),
            ("b", "1,2"),
            ("trials", "4"),
            ("seed", "10"),
            ("jobs", jobs),
            ("timing", "false"),
            ("out", out_str.as_str()),
        ])
        .unwrap();
        sweep(&config).unwrap();
        bodies.push(csv_body(&out));
    }
    let sweeps_equal = bodies.windows(2).all(|w| w[0] == w[1]);

    let params = SbmParams::binary_symmetric(1000, 20.0, 2.0).unwrap();
    let (g, _) = generate_sbm(&params, 10);
    let path = dir.path().join("graph.txt");
    write_edge_list(&g, std::fs::File::create(&path).unwrap()).unwrap();
    let stored = read_edge_list(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    let fingerprints: Vec<(Vec<usize>, Vec<u64>, Vec<usize>)> = [1, 4]
        .into_iter()
        .map(|threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let r = pool.install(|| spectral_partition(&stored, 2, &DetectConfig::with_seed(3))).unwrap();
            let trace = r.trace.unwrap();
            let mut bits: Vec<u64> = trace.eigenvalues.iter().map(|x| x.to_bits()).collect();
            bits.extend(trace.records.iter().map(|rec| rec.residual.to_bits()));
            (r.estimate.labels().to_vec(), bits, r.improvement_deltas)
        })
        .collect();
    let detect_equal = fingerprints[0] == fingerprints[1];
    report(
        10,
        sweeps_equal && detect_equal,
        format!("sweep bodies identical: {sweeps_equal}; detect identical across 1 and 4 threads: {detect_equal}"),
        started,
        Duration::from_secs(120),
    );
}
