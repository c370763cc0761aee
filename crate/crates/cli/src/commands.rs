use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsa_core::bounds::{
    av_list_bound, av_list_bound_k1, euclidean_list_bound, list_bound_coherence, list_bound_mu_k, mu_k_upper,
    mu_k_upper_simple, simplex_circumradius, spherical_list_bound, BoundValue,
};
use lsa_core::constructions::{
    equiangular_lines_2d, identity_bad_b, kerdock_dictionary, kerdock_multi_solutions, mu_k_tight,
    shifted_picket_solutions, spikes_and_sines, tight_example, ConstructionBundle,
};
use lsa_core::invariants::{analyze, InvariantReport};
use lsa_core::solvers::{solve_list_approx, solve_list_sparse, ApproxMode, SolveOptions};
use lsa_core::{Budget, DEFAULT_RANK_TOL};
use lsa_wavelet::{compress_class, synthetic_blobs, CompressionClass, NodeId};
use serde::Serialize;
use serde_json::json;

use crate::format::{read_dictionary, read_json, to_json, BundleFile, DictionaryFile, SolutionListFile, SCHEMA};
use crate::pgm::{Pgm, PgmFormat};
use crate::suites::{rows_to_csv, run_suite, Suite, DEFAULT_EPS_GRID};
use crate::CliError;

/// Dictionary invariants, exhaustive list solvers, list-size bounds and
/// wavelet packet compression.
///
/// Exit codes: 0 success, 2 input error, 3 enumeration budget exceeded
/// (set `LSA_BUDGET` to cap enumeration sizes), 4 bound violation.
#[derive(Debug, Parser)]
#[command(name = "lsa", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence, spark, rank and μ_1..μ_K of a dictionary.
    Analyze(AnalyzeArgs),
    /// Write a constructed dictionary and its targets.
    Construct(ConstructArgs),
    /// Enumerate List-Sparse or List-Approx solutions.
    Solve {
        #[command(subcommand)]
        kind: SolveKind,
    },
    /// Evaluate one closed-form list-size bound.
    Bounds(BoundsArgs),
    /// Check every applicable bound on a fixed suite.
    Verify(VerifyArgs),
    /// Compress a PGM image with one of the three basis classes.
    Compress(CompressArgs),
    /// Write the synthetic blobs image.
    Blobs(BlobsArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub dict: PathBuf,
    /// Largest k for μ_k.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Relative rank tolerance.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionName {
    IdentityBadB,
    TightExample,
    SpikesSines,
    PicketSolutions,
    Kerdock,
    KerdockSolutions,
    MuKTight,
    #[value(name = "equiangular-2d")]
    Equiangular2d,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    pub name: ConstructionName,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Dictionary file.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Targets file; defaults to the dictionary path with `.targets.json`.
    #[arg(long)]
    pub targets: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SolveKind {
    /// Every optimal k-sparse solution.
    Sparse(SolveArgs),
    /// Every k-sparse solution within --eps.
    Approx(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    ExactSize,
    Minimal,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub dict: PathBuf,
    /// Targets file written by `construct`.
    #[arg(long)]
    pub target: PathBuf,
    /// Target label; the first target when omitted.
    #[arg(long)]
    pub label: Option<String>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::ExactSize)]
    pub mode: ModeArg,
    /// Multiplicity caps R for restricted list sizes.
    #[arg(long)]
    pub restrict: Vec<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundName {
    Spherical,
    Euclidean,
    MuK,
    CoherenceK,
    AverageK1,
    AverageK,
    MuKUpper,
    MuKUpperSimple,
    Circumradius,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    pub name: BoundName,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long = "mu-k")]
    pub mu_k: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Simplex vertex count.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub seed: u64,
    /// Comma-separated ε grid.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompressArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub class: u8,
    /// Kept fraction for classes 2 and 3.
    #[arg(long, default_value_t = 0.2)]
    pub keep: f64,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    /// Required for class 1.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub large: f64,
    #[arg(long, default_value_t = 0.01)]
    pub medium: f64,
    #[arg(long = "keep-prob", default_value_t = 0.5)]
    pub keep_prob: f64,
    /// Reconstructed image.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Statistics JSON; stdout when omitted.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Write plain (P2) instead of raw (P5) PGM.
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Debug, Args)]
pub struct BlobsArgs {
    #[arg(long, default_value_t = 256)]
    pub side: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long)]
    pub ascii: bool,
}

fn solve_options() -> Result<SolveOptions, CliError> {
    let budget = match std::env::var("LSA_BUDGET") {
        Ok(raw) => Budget::new(
            raw.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("LSA_BUDGET must be a non-negative integer, got {raw:?}")))?,
        ),
        Err(_) => Budget::unlimited(),
    };
    Ok(SolveOptions {
        budget,
        ..SolveOptions::default()
    })
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("missing required flag --{flag}")))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Solve { kind } => cmd_solve(kind),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Compress(args) => cmd_compress(args),
        Command::Blobs(args) => cmd_blobs(args),
    }
}

#[derive(Serialize)]
struct AnalyzeOutput {
    schema: &'static str,
    m: usize,
    n: usize,
    #[serde(flatten)]
    report: InvariantReport,
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let dict = read_dictionary(&args.dict)?;
    let opts = solve_options()?;
    let report = analyze(&dict, args.k, args.tol, opts.budget)?;
    let out = AnalyzeOutput {
        schema: SCHEMA,
        m: dict.m(),
        n: dict.n_atoms(),
        report,
    };
    emit(&to_json(&out)?, args.output.as_deref())
}

fn build(args: &ConstructArgs) -> Result<ConstructionBundle, CliError> {
    use ConstructionName::*;
    Ok(match args.name {
        IdentityBadB => identity_bad_b(need(args.m, "m")?, need(args.k, "k")?, need(args.eps, "eps")?)?,
        TightExample => tight_example(need(args.m, "m")?, need(args.k, "k")?, need(args.eps, "eps")?)?,
        SpikesSines => spikes_and_sines(need(args.d, "d")?)?,
        PicketSolutions => shifted_picket_solutions(need(args.d, "d")?)?,
        Kerdock => kerdock_dictionary(need(args.m, "m")? as u32)?,
        KerdockSolutions => kerdock_multi_solutions(need(args.m, "m")? as u32, need(args.s, "s")?)?,
        MuKTight => mu_k_tight(need(args.k, "k")?, need(args.c, "c")?)?,
        Equiangular2d => equiangular_lines_2d(need(args.n, "n")?)?,
    })
}

fn targets_path(dict_path: &Path) -> PathBuf {
    let stem = dict_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    dict_path.with_file_name(format!("{stem}.targets.json"))
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliError> {
    let bundle = build(&args)?;
    let dict_text = to_json(&DictionaryFile::from_dictionary(&bundle.dictionary))?;
    std::fs::write(&args.output, dict_text).map_err(|e| CliError::io(&args.output, e))?;
    let path = args.targets.clone().unwrap_or_else(|| targets_path(&args.output));
    let bundle_text = to_json(&BundleFile::from_bundle(&bundle)?)?;
    std::fs::write(&path, bundle_text).map_err(|e| CliError::io(&path, e))
}

fn cmd_solve(kind: SolveKind) -> Result<(), CliError> {
    let (args, approx) = match kind {
        SolveKind::Sparse(a) => (a, false),
        SolveKind::Approx(a) => (a, true),
    };
    let dict = read_dictionary(&args.dict)?;
    let b = read_json::<BundleFile>(&args.target)?.target(args.label.as_deref())?;
    let opts = solve_options()?;
    let mut list = if approx {
        let mode = match args.mode {
            ModeArg::ExactSize => ApproxMode::ExactSize,
            ModeArg::Minimal => ApproxMode::MinimalSupports,
        };
        solve_list_approx(&dict, &b, args.k, need(args.eps, "eps")?, mode, &opts)?
    } else {
        if args.eps.is_some() {
            return Err(CliError::Input("--eps applies to `solve approx` only".into()));
        }
        solve_list_sparse(&dict, &b, args.k, &opts)?
    };
    for &r in &args.restrict {
        list.restrict(r, opts.budget)?;
    }
    let complex = !dict.is_real() || b.iter().any(|z| z.im != 0.0);
    emit(&to_json(&SolutionListFile::new(&list, complex))?, args.output.as_deref())
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    use BoundName::*;
    let eps = || need(args.eps, "eps");
    let mu = || need(args.mu, "mu");
    let k = || need(args.k, "k");
    let value = match args.name {
        Spherical => spherical_list_bound(mu()?, eps()?)?,
        Euclidean => euclidean_list_bound(need(args.delta, "delta")?, eps()?)?,
        MuK => list_bound_mu_k(need(args.mu_k, "mu-k")?, eps()?)?,
        CoherenceK => list_bound_coherence(mu()?, k()?, eps()?)?,
        AverageK1 => av_list_bound_k1(mu()?, eps()?)?,
        AverageK => av_list_bound(mu()?, k()?, eps()?, args.gamma)?,
        MuKUpper => mu_k_upper(mu()?, k()?)?,
        MuKUpperSimple => BoundValue::Real(mu_k_upper_simple(mu()?, k()?)?),
        Circumradius => BoundValue::Real(simplex_circumradius(need(args.n, "n")?)?),
    };
    let name = args.name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let out = json!({
        "schema": SCHEMA,
        "bound": name,
        "inputs": {
            "mu": args.mu,
            "mu_k": args.mu_k,
            "k": args.k,
            "eps": args.eps,
            "gamma": args.gamma,
            "delta": args.delta,
            "n": args.n,
        },
        "value": value,
    });
    emit(&to_json(&out)?, None)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let grid = if args.eps.is_empty() { DEFAULT_EPS_GRID.to_vec() } else { args.eps.clone() };
    let rows = run_suite(args.suite, args.seed, &grid, &solve_options()?)?;
    let violations = rows.iter().filter(|r| r.report.violated).count();
    let text = match args.format {
        ReportFormat::Csv => rows_to_csv(&rows),
        ReportFormat::Json => {
            let suite = args.suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            to_json(&json!({
                "schema": SCHEMA,
                "suite": suite,
                "seed": args.seed,
                "eps_grid": grid,
                "checked": rows.iter().filter(|r| r.report.precondition_holds).count(),
                "violations": violations,
                "reports": rows,
            }))?
        }
    };
    emit(&text, args.output.as_deref())?;
    if violations > 0 {
        return Err(CliError::Violations(violations));
    }
    Ok(())
}

#[derive(Serialize)]
struct CompressStats {
    schema: &'static str,
    class: u8,
    parameters: CompressionClass,
    depth: u32,
    side: usize,
    kept: usize,
    sparsity_fraction: f64,
    relative_error: f64,
    basis: Vec<NodeId>,
}

fn cmd_compress(args: CompressArgs) -> Result<(), CliError> {
    let pgm = Pgm::read(&args.image)?;
    let image = pgm.to_grid()?;
    let class = match args.class {
        1 => CompressionClass::LargeAndRandomMedium {
            large: args.large,
            medium: args.medium,
            keep_probability: args.keep_prob,
            seed: need(args.seed, "seed")?,
        },
        2 => CompressionClass::TruncatedEntropy { keep_fraction: args.keep },
        _ => CompressionClass::TruncatedL1 { keep_fraction: args.keep },
    };
    let result = compress_class(&image, args.depth, class)?;
    if let Some(path) = &args.output {
        let format = if args.ascii { PgmFormat::Plain } else { PgmFormat::Raw };
        Pgm::from_grid(&result.reconstruction, pgm.maxval).write(path, format)?;
    }
    let stats = CompressStats {
        schema: SCHEMA,
        class: result.class,
        parameters: class,
        depth: result.depth,
        side: image.side(),
        kept: result.kept.len(),
        sparsity_fraction: result.sparsity_fraction,
        relative_error: result.relative_error,
        basis: result.basis,
    };
    emit(&to_json(&stats)?, args.stats.as_deref())
}

fn cmd_blobs(args: BlobsArgs) -> Result<(), CliError> {
    let image = synthetic_blobs(args.side, args.seed)?;
    let format = if args.ascii { PgmFormat::Plain } else { PgmFormat::Raw };
    Pgm::from_grid(&image, 255).write(&args.output, format)
}
