use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::config::{Grid, SweepConfig};
use crate::detect::{spectral_partition, DetectConfig};
use crate::error::{Result, SbmError};
use crate::model::{check_condition, divergence, generate_sbm, log_scale, misclassified, SbmParams};
use crate::rng::{derive_seed, stream};

pub const CSV_HEADER: [&str; 15] = [
    "a",
    "b",
    "p",
    "q",
    "n",
    "K",
    "s",
    "trials",
    "divergence",
    "eq1_ratio",
    "theorem1_holds",
    "success_rate",
    "mean_misclassified",
    "mean_runtime_ms",
    "error",
];

/// One grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSpec {
    pub row: usize,
    pub col: usize,
    /// Log-scale coefficients, when the grid is log-scaled.
    pub ab: Option<(f64, f64)>,
    pub p: f64,
    pub q: f64,
}

impl CellSpec {
    pub fn cells(config: &SweepConfig) -> Vec<CellSpec> {
        let scale = log_scale(config.n);
        let mut out = Vec::new();
        match &config.grid {
            Grid::LogScaled { a, b } => {
                for (row, &ai) in a.iter().enumerate() {
                    for (col, &bj) in b.iter().enumerate() {
                        out.push(CellSpec {
                            row,
                            col,
                            ab: Some((ai, bj)),
                            p: ai * scale,
                            q: bj * scale,
                        });
                    }
                }
            }
            Grid::Explicit { p, q } => {
                for (row, &pi) in p.iter().enumerate() {
                    for (col, &qj) in q.iter().enumerate() {
                        out.push(CellSpec {
                            row,
                            col,
                            ab: None,
                            p: pi,
                            q: qj,
                        });
                    }
                }
            }
        }
        out
    }

    /// Seed of trial `t`: a function of the master seed and the cell's grid
    /// position only.
    pub fn trial_seed(&self, master: u64, trial: usize) -> u64 {
        derive_seed(
            master,
            &[stream::TRIAL, self.row as u64, self.col as u64, trial as u64],
        )
    }

    fn key_fields(&self) -> [String; 4] {
        let (a, b) = match self.ab {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (String::new(), String::new()),
        };
        [a, b, self.p.to_string(), self.q.to_string()]
    }
}

/// Outcome of one trial: misclassified count and runtime, or an error.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Done { misclassified: usize, runtime_ms: f64 },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub spec: CellSpec,
    pub n: usize,
    pub k: usize,
    pub s: f64,
    pub trials: usize,
    pub divergence: Option<f64>,
    pub eq1_ratio: Option<f64>,
    /// `None` when the finite-`n` condition is undefined (`np ≤ 1`).
    pub theorem1_holds: Option<bool>,
    pub outcomes: Vec<TrialOutcome>,
    /// Set for cells that were not run (e.g. `p < q`).
    pub skipped: Option<String>,
}

impl CellResult {
    /// Fraction of trials with at most `s` misclassified vertices. Failed
    /// trials count as unsuccessful.
    pub fn success_rate(&self) -> f64 {
        self.success_rate_at(self.s)
    }

    pub fn success_rate_at(&self, s: f64) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        let ok = self
            .outcomes
            .iter()
            .filter(|o| matches!(o, TrialOutcome::Done { misclassified, .. } if *misclassified as f64 <= s))
            .count();
        ok as f64 / self.outcomes.len() as f64
    }

    fn completed(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.outcomes.iter().filter_map(|o| match o {
            TrialOutcome::Done {
                misclassified,
                runtime_ms,
            } => Some((*misclassified, *runtime_ms)),
            TrialOutcome::Failed(_) => None,
        })
    }

    pub fn mean_misclassified(&self) -> Option<f64> {
        mean(self.completed().map(|(m, _)| m as f64))
    }

    pub fn mean_runtime_ms(&self) -> Option<f64> {
        mean(self.completed().map(|(_, t)| t))
    }

    pub fn error_summary(&self) -> Option<String> {
        if let Some(reason) = &self.skipped {
            return Some(reason.clone());
        }
        let failures: Vec<&String> = self
            .outcomes
            .iter()
            .filter_map(|o| match o {
                TrialOutcome::Failed(e) => Some(e),
                _ => None,
            })
            .collect();
        failures.first().map(|first| {
            format!(
                "{}/{} trials failed: {}",
                failures.len(),
                self.outcomes.len(),
                first
            )
        })
    }

    /// CSV fields in [`CSV_HEADER`] order. With `timing` off the runtime is
    /// written as `0`.
    pub fn csv_record(&self, timing: bool) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let [a, b, p, q] = self.spec.key_fields();
        let ran = self.skipped.is_none();
        vec![
            a,
            b,
            p,
            q,
            self.n.to_string(),
            self.k.to_string(),
            self.s.to_string(),
            self.trials.to_string(),
            opt(self.divergence),
            opt(self.eq1_ratio),
            self.theorem1_holds.map(|h| h.to_string()).unwrap_or_default(),
            if ran { self.success_rate().to_string() } else { String::new() },
            opt(self.mean_misclassified()),
            if !ran {
                String::new()
            } else if timing {
                opt(self.mean_runtime_ms())
            } else {
                "0".to_string()
            },
            self.error_summary().unwrap_or_default(),
        ]
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn run_trial(params: &SbmParams, seed: u64, detect: &DetectConfig) -> TrialOutcome {
    let started = Instant::now();
    let (g, truth) = generate_sbm(params, seed);
    let config = DetectConfig {
        seed: derive_seed(seed, &[stream::DETECT]),
        ..detect.clone()
    };
    let outcome = spectral_partition(&g, params.k(), &config)
        .and_then(|r| misclassified(&r.estimate, &truth));
    match outcome {
        Ok(m) => TrialOutcome::Done {
            misclassified: m,
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        },
        Err(e) => TrialOutcome::Failed(e.to_string()),
    }
}

/// Runs every trial of one cell. Trials run in parallel on the current
/// rayon pool; outcomes are stored by trial index.
pub fn run_cell(spec: &CellSpec, config: &SweepConfig) -> CellResult {
    let n = config.n;
    let s = config.target.resolve(n);
    let mut result = CellResult {
        spec: spec.clone(),
        n,
        k: config.k(),
        s,
        trials: config.trials,
        divergence: None,
        eq1_ratio: None,
        theorem1_holds: None,
        outcomes: Vec::new(),
        skipped: None,
    };
    if spec.p < spec.q {
        result.skipped = Some("skipped: p < q".into());
        return result;
    }
    let params = match SbmParams::new(n, config.alphas.clone(), spec.p, spec.q) {
        Ok(p) => p,
        Err(e) => {
            result.skipped = Some(format!("skipped: {e}"));
            return result;
        }
    };
    let d = divergence(&params);
    result.divergence = Some(d);
    result.eq1_ratio = Some(d / (n as f64 / s).ln());
    result.theorem1_holds = check_condition(&params, s).ok().map(|r| r.theorem1_holds);
    result.outcomes = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(&params, spec.trial_seed(config.master_seed, t), &config.detect))
        .collect();
    result
}

/// Counts of what a sweep call did.
#[derive(Debug, Clone, Default)]
pub struct SweepSummary {
    pub results: Vec<CellResult>,
    /// Cells already present in the output file.
    pub resumed: usize,
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SbmError::param(format!("thread pool: {e}")))
}

/// Keys of the rows already in `path`, or `None` when the file is missing
/// or empty.
fn existing_rows(path: &std::path::Path) -> Result<Option<HashSet<[String; 4]>>> {
    match std::fs::metadata(path) {
        Ok(m) if m.len() > 0 => {}
        _ => return Ok(None),
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(false)
        .from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(SbmError::Parse(format!(
            "{} has an unexpected header; refusing to resume",
            path.display()
        )));
    }
    let mut keys = HashSet::new();
    for record in reader.records() {
        let record = record?;
        keys.insert([
            record[0].to_string(),
            record[1].to_string(),
            record[2].to_string(),
            record[3].to_string(),
        ]);
    }
    Ok(Some(keys))
}

/// Runs the grid in row-major order and appends one CSV row per cell,
/// flushing after each. Cells already present in the output are skipped,
/// so an interrupted sweep can be resumed by running it again.
pub fn sweep(config: &SweepConfig) -> Result<SweepSummary> {
    config.validate()?;
    let done = existing_rows(&config.output)?;
    let mut file = match &done {
        Some(_) => OpenOptions::new().append(true).open(&config.output)?,
        None => {
            let mut f = File::create(&config.output)?;
            let stamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            writeln!(f, "# spectral-sbm sweep, started at unix time {stamp}")?;
            writeln!(f, "{}", CSV_HEADER.join(","))?;
            f
        }
    };
    let done = done.unwrap_or_default();
    let pool = pool(config.jobs)?;
    let mut summary = SweepSummary::default();
    for spec in CellSpec::cells(config) {
        if done.contains(&spec.key_fields()) {
            summary.resumed += 1;
            continue;
        }
        if config.max_cells.is_some_and(|m| summary.results.len() >= m) {
            break;
        }
        let result = pool.install(|| run_cell(&spec, config));
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(&mut file);
        writer.write_record(result.csv_record(config.timing))?;
        writer.flush()?;
        drop(writer);
        file.flush()?;
        summary.results.push(result);
    }
    Ok(summary)
}
