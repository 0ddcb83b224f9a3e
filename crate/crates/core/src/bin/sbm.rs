//! Command-line front end: `generate`, `detect`, `sweep`, `diagnose`.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error,
//! 3 I/O error.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spectral_sbm::detect::{spectral_partition, DetectConfig, RadiusRule};
use spectral_sbm::harness::{diagnose, parse_list, sweep, SweepConfig};
use spectral_sbm::model::io::{read_edge_list, read_partition, write_edge_list, write_partition};
use spectral_sbm::model::{generate_sbm, SbmParams};
use spectral_sbm::rng::derive_seed;
use spectral_sbm::{Result, SbmError};

#[derive(Parser)]
#[command(name = "sbm", version, about = "Spectral Partition for the stochastic block model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph; write the edge list and the ground-truth partition.
    Generate(GenerateArgs),
    /// Run Spectral Partition on an edge list.
    Detect(DetectArgs),
    /// Monte-Carlo sweep over an (a, b) or (p, q) grid, written as CSV.
    Sweep(SweepArgs),
    /// Spectral-norm and degree diagnostics over a list of n, written as CSV.
    Diagnose(DiagnoseArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Number of communities; ignored when `--alphas` is given.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Comma-separated ascending fractions (`1/6,1/3,1/2` allowed);
    /// defaults to equal sizes.
    #[arg(long)]
    alphas: Option<String>,
    /// p = a·ln(n)/n.
    #[arg(long, conflicts_with = "p")]
    a: Option<f64>,
    /// q = b·ln(n)/n.
    #[arg(long, conflicts_with = "q")]
    b: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
}

impl ModelArgs {
    fn params(&self, n: usize) -> Result<SbmParams> {
        let alphas = match &self.alphas {
            Some(s) => parse_list("alphas", s)?,
            None => vec![1.0 / self.k as f64; self.k],
        };
        match (self.a, self.b, self.p, self.q) {
            (Some(a), Some(b), None, None) => SbmParams::log_scaled(n, alphas, a, b),
            (None, None, Some(p), Some(q)) => SbmParams::new(n, alphas, p, q),
            _ => Err(SbmError::Parse("give either --a and --b or --p and --q".into())),
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output path.
    #[arg(long)]
    out: PathBuf,
    /// Ground-truth partition path; defaults to `<out>.truth`.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    /// Edge-list input path.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "trim-mult", default_value_t = 5.0)]
    trim_mult: f64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// `degree-scaled` (default) or `literal`.
    #[arg(long = "radius-rule", default_value = "degree-scaled")]
    radius_rule: String,
    /// Ground-truth partition, for reporting misclassified counts.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Write the estimated partition here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Flat key=value file using the flag names below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    alphas: Option<String>,
    /// Grid of a values: `1,2,3` or `start:step:stop`.
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    /// Tolerated misclassified count: a number, `n^x`, or `exact`.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long = "trim-mult")]
    trim_mult: Option<String>,
    #[arg(long)]
    jobs: Option<String>,
    #[arg(long = "radius-rule")]
    radius_rule: Option<String>,
    /// Write 0 in the runtime column so repeated runs are byte-identical.
    #[arg(long = "no-timing")]
    no_timing: bool,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Comma-separated list of vertex counts.
    #[arg(long)]
    n: String,
    #[command(flatten)]
    model: ModelArgs,
    /// Instances per n.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "trim-mult", default_value_t = 5.0)]
    trim_mult: f64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &PathBuf) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn set_threads(jobs: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| SbmError::InvalidParameter(format!("thread pool: {e}")))
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let params = args.model.params(args.n)?;
    let (g, truth) = generate_sbm(&params, args.seed);
    write_edge_list(&g, create(&args.out)?)?;
    let truth_path = args
        .truth
        .unwrap_or_else(|| PathBuf::from(format!("{}.truth", args.out.display())));
    write_partition(&truth, create(&truth_path)?)?;
    println!("n={}", g.n());
    println!("edges={}", g.edge_count());
    println!("expected_edges={}", params.expected_edges());
    println!("edge_list={}", args.out.display());
    println!("truth={}", truth_path.display());
    Ok(())
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn run_detect(args: DetectArgs) -> Result<()> {
    set_threads(args.jobs)?;
    let g = read_edge_list(open(&args.input)?)?;
    let config = DetectConfig {
        trim_multiplier: args.trim_mult,
        radius_rule: args.radius_rule.parse::<RadiusRule>()?,
        seed: args.seed,
        ..Default::default()
    };
    let result = spectral_partition(&g, args.k, &config)?;
    println!("n={}", g.n());
    println!("edges={}", g.edge_count());
    println!("k={}", args.k);
    println!("degenerate={}", result.degenerate);
    println!("trim_threshold={}", result.trim.threshold_used);
    println!("trimmed={}", result.trim.removed.len());
    if let Some(trace) = &result.trace {
        println!("i_star={}", trace.i_star());
        println!("residual={}", trace.chosen_record().residual);
        println!("eigenvalues={}", join(&trace.eigenvalues));
        println!("frobenius_err={}", trace.frobenius_err);
    }
    println!("improvement_deltas={}", join(&result.improvement_deltas));
    println!("community_sizes={}", join(&result.estimate.sizes()));
    if let Some(path) = &args.truth {
        let truth = read_partition(open(path)?, Some(args.k))?;
        let stages = result.stage_misclassified(&truth)?;
        println!("misclassified_spectral={}", stages.after_spectral);
        println!("misclassified={}", stages.after_improvement);
    }
    match &args.out {
        Some(path) => {
            write_partition(&result.estimate, create(path)?)?;
            println!("partition={}", path.display());
        }
        None => println!("labels={}", join(result.estimate.labels())),
    }
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let mut pairs: Vec<(String, String)> = match &args.config {
        Some(path) => SweepConfig::parse_file_text(&std::fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    let flags = [
        ("n", &args.n),
        ("k", &args.k),
        ("alphas", &args.alphas),
        ("a", &args.a),
        ("b", &args.b),
        ("p", &args.p),
        ("q", &args.q),
        ("s", &args.s),
        ("trials", &args.trials),
        ("seed", &args.seed),
        ("out", &args.out),
        ("trim-mult", &args.trim_mult),
        ("jobs", &args.jobs),
        ("radius-rule", &args.radius_rule),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            pairs.push((key.to_string(), v.clone()));
        }
    }
    if args.exact {
        pairs.push(("exact".into(), "true".into()));
    }
    if args.no_timing {
        pairs.push(("timing".into(), "false".into()));
    }
    let config = SweepConfig::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    let summary = sweep(&config)?;
    println!("cells_run={}", summary.results.len());
    println!("cells_resumed={}", summary.resumed);
    println!("out={}", config.output.display());
    Ok(())
}

fn run_diagnose(args: DiagnoseArgs) -> Result<()> {
    set_threads(args.jobs)?;
    let ns = parse_list("n", &args.n)?;
    let params = ns
        .iter()
        .map(|&n| args.model.params(n as usize))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<u64> = (0..args.trials as u64).map(|t| derive_seed(args.seed, &[t])).collect();
    let rows = diagnose(&params, &seeds, args.trim_mult, create(&args.out)?)?;
    println!("rows={}", rows.len());
    println!("out={}", args.out.display());
    Ok(())
}

fn exit_code(e: &SbmError) -> u8 {
    match e {
        SbmError::Io(_) | SbmError::Csv(_) => 3,
        SbmError::Convergence { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Detect(a) => run_detect(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Diagnose(a) => run_diagnose(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
