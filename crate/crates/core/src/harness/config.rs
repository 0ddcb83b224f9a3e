use std::path::PathBuf;

use crate::detect::DetectConfig;
use crate::error::{Result, SbmError};
use crate::model::RecoveryTarget;

/// Parameter grid of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `p = a·ln n/n`, `q = b·ln n/n`.
    LogScaled { a: Vec<f64>, b: Vec<f64> },
    Explicit { p: Vec<f64>, q: Vec<f64> },
}

impl Grid {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Grid::LogScaled { a, b } => (a.len(), b.len()),
            Grid::Explicit { p, q } => (p.len(), q.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    /// Community fractions, ascending.
    pub alphas: Vec<f64>,
    pub grid: Grid,
    pub target: RecoveryTarget,
    pub trials: usize,
    pub master_seed: u64,
    pub output: PathBuf,
    /// Concurrent trials per cell; 0 uses every available core.
    pub jobs: usize,
    /// Record wall-clock runtime. When off the runtime column is `0`, which
    /// makes whole files reproducible byte for byte.
    pub timing: bool,
    /// Stop after running this many new cells.
    pub max_cells: Option<usize>,
    /// Detection settings; the seed is replaced per trial.
    pub detect: DetectConfig,
}

impl SweepConfig {
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn validate(&self) -> Result<()> {
        let (rows, cols) = self.grid.shape();
        if rows == 0 || cols == 0 {
            return Err(SbmError::param("sweep grids must be nonempty"));
        }
        if self.trials == 0 {
            return Err(SbmError::param("trials must be at least 1"));
        }
        if self.n == 0 {
            return Err(SbmError::param("n must be positive"));
        }
        if self.alphas.len() < 2 {
            return Err(SbmError::param("need at least 2 communities"));
        }
        Ok(())
    }

    /// Builds a config from `key=value` pairs. Later pairs override earlier
    /// ones, so a config file followed by command-line flags does the right
    /// thing. Keys match the CLI flag names without dashes.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut n = None;
        let mut k = None;
        let mut alphas = None;
        let (mut a, mut b, mut p, mut q) = (None, None, None, None);
        let mut target = RecoveryTarget::Exact;
        let mut trials = 10;
        let mut seed = 0;
        let mut out = PathBuf::from("sweep.csv");
        let mut jobs = 0;
        let mut timing = true;
        let mut detect = DetectConfig::default();
        for (key, value) in pairs {
            let value = value.trim();
            match key.trim().trim_start_matches("--") {
                "n" => n = Some(parse_num::<usize>(key, value)?),
                "k" => k = Some(parse_num::<usize>(key, value)?),
                "alphas" => alphas = Some(parse_list(key, value)?),
                "a" => a = Some(parse_list(key, value)?),
                "b" => b = Some(parse_list(key, value)?),
                "p" => p = Some(parse_list(key, value)?),
                "q" => q = Some(parse_list(key, value)?),
                "s" => target = value.parse()?,
                "exact" => {
                    if parse_bool(key, value)? {
                        target = RecoveryTarget::Exact;
                    }
                }
                "trials" => trials = parse_num(key, value)?,
                "seed" => seed = parse_num(key, value)?,
                "out" => out = PathBuf::from(value),
                "trim-mult" | "trim_mult" => detect.trim_multiplier = parse_num(key, value)?,
                "jobs" => jobs = parse_num(key, value)?,
                "timing" => timing = parse_bool(key, value)?,
                "radius-rule" | "radius_rule" => detect.radius_rule = value.parse()?,
                other => return Err(SbmError::Parse(format!("unknown config key {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| SbmError::Parse("missing n".into()))?;
        let alphas = match (alphas, k) {
            (Some(al), Some(k)) if al.len() != k => {
                return Err(SbmError::Parse(format!(
                    "{} fractions given for k={k}",
                    al.len()
                )))
            }
            (Some(al), _) => al,
            (None, k) => {
                let k = k.unwrap_or(2);
                vec![1.0 / k as f64; k]
            }
        };
        let grid = match (a, b, p, q) {
            (Some(a), Some(b), None, None) => Grid::LogScaled { a, b },
            (None, None, Some(p), Some(q)) => Grid::Explicit { p, q },
            _ => {
                return Err(SbmError::Parse(
                    "give either both a and b grids or both p and q grids".into(),
                ))
            }
        };
        let config = SweepConfig {
            n,
            alphas,
            grid,
            target,
            trials,
            master_seed: seed,
            output: out,
            jobs,
            timing,
            max_cells: None,
            detect,
        };
        config.validate()?;
        Ok(config)
    }

    /// Parses a flat `key=value` file. Blank lines and `#` comments,
    /// including trailing ones, are skipped.
    pub fn parse_file_text(text: &str) -> Result<Vec<(String, String)>> {
        text.lines()
            .enumerate()
            .map(|(i, l)| (i, l.split_once('#').map_or(l, |(before, _)| before).trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(i, l)| {
                l.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| SbmError::Parse(format!("line {}: expected key=value", i + 1)))
            })
            .collect()
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| SbmError::Parse(format!("bad value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "" | "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(SbmError::Parse(format!("bad boolean {value:?} for {key}"))),
    }
}

/// Comma-separated numbers; entries of the form `start:step:stop` expand to
/// an inclusive range.
pub fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_fraction(key, single)?),
            [start, step, stop] => {
                let (start, step, stop) = (
                    parse_num::<f64>(key, start)?,
                    parse_num::<f64>(key, step)?,
                    parse_num::<f64>(key, stop)?,
                );
                if step.is_nan() || step <= 0.0 {
                    return Err(SbmError::Parse(format!("range step must be positive in {key}")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as i64;
                for i in 0..=count.max(-1) {
                    out.push(start + i as f64 * step);
                }
            }
            _ => return Err(SbmError::Parse(format!("bad list entry {item:?} for {key}"))),
        }
    }
    if out.is_empty() {
        return Err(SbmError::Parse(format!("empty list for {key}")));
    }
    Ok(out)
}

/// Accepts plain numbers and `a/b` fractions.
fn parse_fraction(key: &str, s: &str) -> Result<f64> {
    match s.split_once('/') {
        Some((num, den)) => Ok(parse_num::<f64>(key, num)? / parse_num::<f64>(key, den)?),
        None => parse_num(key, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("a", "1,2.5, 3").unwrap(), vec![1.0, 2.5, 3.0]);
        assert_eq!(parse_list("a", "1:1:4").unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(parse_list("a", "1/6,1/3,1/2").unwrap()[0], 1.0 / 6.0);
        assert!(parse_list("a", "").is_err());
        assert!(parse_list("a", "1:0:3").is_err());
    }

    #[test]
    fn pairs_with_overrides() {
        let text = "# demo\nn = 300\na=5,10\nb=1\ntrials=3\ns=n^0.5\n";
        let mut pairs = SweepConfig::parse_file_text(text).unwrap();
        pairs.push(("trials".into(), "4".into()));
        let c = SweepConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str()))).unwrap();
        assert_eq!(c.n, 300);
        assert_eq!(c.trials, 4);
        assert_eq!(c.alphas, vec![0.5, 0.5]);
        assert_eq!(c.target, RecoveryTarget::Power(0.5));
        assert_eq!(c.grid, Grid::LogScaled { a: vec![5.0, 10.0], b: vec![1.0] });
    }

    #[test]
    fn config_errors() {
        assert!(SweepConfig::from_pairs([("a", "1"), ("b", "1")]).is_err());
        assert!(SweepConfig::from_pairs([("n", "10"), ("a", "1")]).is_err());
        assert!(SweepConfig::from_pairs([("n", "10"), ("a", "1"), ("b", "1"), ("trials", "0")]).is_err());
        assert!(SweepConfig::from_pairs([("n", "10"), ("bogus", "1")]).is_err());
        assert!(SweepConfig::from_pairs([("n", "10"), ("k", "3"), ("alphas", "0.5,0.5"), ("a", "1"), ("b", "1")]).is_err());
        assert!(SweepConfig::parse_file_text("n 10").is_err());
    }
}
