//! `strathom`: batch front end over the library. Every command prints one
//! report (JSON by default) and exits 0 on pass, 1 on a verification
//! mismatch, 2 on bad input and 3 on an internal contract violation.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::{envelope, render_text, Failure, Verdict};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "strathom", version, about = "Deligne sheaves and intersection homology on doubly subdivided pseudomanifolds")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for randomized suites; recorded in every report.
    #[arg(long, default_value_t = 0x5eed_2024, global = true)]
    seed: u64,
    /// Only print table entries in degrees LO..=HI.
    #[arg(long, value_parser = parse_degrees, global = true)]
    degrees: Option<(i32, i32)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plain simplicial complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Stratification checks.
    #[command(subcommand)]
    Strata(StrataCmd),
    /// The finite star topology.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Intersection homology from allowable chains.
    #[command(subcommand)]
    Ih(IhCmd),
    /// Building and checking Deligne sheaves.
    #[command(subcommand)]
    Deligne(DeligneCmd),
    /// Hypercohomology of the constant sheaf, a fold, or a sheaf file.
    Hyper(HyperArgs),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Property suites.
    #[command(subcommand)]
    Props(PropsCmd),
}

#[derive(Subcommand, Debug)]
enum ComplexCmd {
    Info(ComplexInfoArgs),
    Op(ComplexOpArgs),
}

#[derive(Subcommand, Debug)]
enum StrataCmd {
    Check(SpaceArgs),
}

#[derive(Subcommand, Debug)]
enum TopologyCmd {
    Basis(BasisArgs),
}

#[derive(Subcommand, Debug)]
enum IhCmd {
    Compute(IhArgs),
}

#[derive(Subcommand, Debug)]
enum DeligneCmd {
    Build(BuildArgs),
    Check(CheckArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// ℍ*(X, fold) against IH_{n−*} for one or all preset perversities.
    MainTheorem(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum PropsCmd {
    Selftest(PropsArgs),
}

/// A catalog space, or a complex file plus a stratification file.
#[derive(Args, Debug, Clone, Serialize)]
pub struct SpaceArgs {
    #[arg(long, conflicts_with_all = ["complex", "strata"])]
    pub space: Option<String>,
    #[arg(long, requires = "strata")]
    pub complex: Option<PathBuf>,
    #[arg(long, requires = "complex")]
    pub strata: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Base,
    Sd,
    Doubled,
}

#[derive(Args, Debug, Serialize)]
pub struct ComplexInfoArgs {
    #[arg(long, conflicts_with = "space")]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub space: Option<String>,
    /// Which subdivision of a catalog space to describe.
    #[arg(long, value_enum, default_value_t = Level::Base)]
    pub level: Level,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Sd,
    Cone,
    Suspension,
    Product,
    Union,
    Intersection,
    /// Y −Δ Z
    Minus,
    Hull,
    Star,
    Link,
}

#[derive(Args, Debug, Serialize)]
pub struct ComplexOpArgs {
    #[arg(value_enum)]
    pub op: Op,
    #[arg(long)]
    pub file: PathBuf,
    /// Second factor for `product`.
    #[arg(long)]
    pub other: Option<PathBuf>,
    /// Subcomplex as simplices `a,b;b,c` (closed under faces).
    #[arg(long)]
    pub y: Option<String>,
    #[arg(long)]
    pub z: Option<String>,
    /// Vertex list `a,b,c` for `hull`, or one simplex for `star` and `link`.
    #[arg(long)]
    pub vertices: Option<String>,
    #[arg(long, default_value = "apex")]
    pub apex: String,
}

#[derive(Args, Debug, Serialize)]
pub struct BasisArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Emit the inclusion poset as Graphviz DOT instead of a report.
    #[arg(long)]
    pub dot: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    /// Relative to the boundary when there is one.
    Auto,
    Absolute,
    Relative,
}

#[derive(Args, Debug, Serialize)]
pub struct IhArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// zero, lower-middle, upper-middle, top, `0,1` or `k2=0,k3=1`.
    #[arg(long)]
    pub perversity: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub perversity: String,
    /// Include H* of every stalk of the result.
    #[arg(long)]
    pub dump_stalks: bool,
    /// Write the folded sheaf as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long)]
    pub perversity: String,
    #[arg(long)]
    pub sheaf: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct HyperArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Fold for this perversity instead of taking the constant sheaf.
    #[arg(long, conflicts_with = "sheaf")]
    pub perversity: Option<String>,
    #[arg(long)]
    pub sheaf: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// A perversity, or `all` for the presets.
    #[arg(long, default_value = "all")]
    pub perversity: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sizes {
    /// Exhaustive small ambients plus a few hundred random ones.
    Tiny,
    /// Exhaustive small ambients plus 10⁴ random 4-dimensional ones.
    Full,
}

#[derive(Args, Debug, Serialize)]
pub struct PropsArgs {
    #[arg(long, value_enum, default_value_t = Sizes::Full)]
    pub sizes: Sizes,
    /// Override the number of random instances.
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub no_exhaustive: bool,
}

fn parse_degrees(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = a.trim().parse::<i32>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i32>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn thread_cap() -> Result<(), Failure> {
    let Ok(v) = std::env::var("STRATHOM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("STRATHOM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Contract(format!("thread pool: {e}")))
}

#[derive(Serialize)]
struct RunConfig<'a, A: Serialize> {
    format: Format,
    degrees: Option<(i32, i32)>,
    args: &'a A,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = thread_cap() {
        eprintln!("error: {}", f.message());
        return f.exit_code();
    }
    let ctx = commands::Ctx { seed: cli.seed, degrees: cli.degrees };
    macro_rules! run {
        ($name:expr, $args:expr, $f:path) => {{
            let cfg = report::to_value(RunConfig { format: cli.format, degrees: cli.degrees, args: $args });
            ($name, cfg, $f(&ctx, $args))
        }};
    }
    let (name, config, outcome) = match &cli.command {
        Command::Complex(ComplexCmd::Info(a)) => run!("complex info", a, commands::complex_info),
        Command::Complex(ComplexCmd::Op(a)) => run!("complex op", a, commands::complex_op),
        Command::Strata(StrataCmd::Check(a)) => run!("strata check", a, commands::strata_check),
        Command::Topology(TopologyCmd::Basis(a)) => run!("topology basis", a, commands::topology_basis),
        Command::Ih(IhCmd::Compute(a)) => run!("ih compute", a, commands::ih_compute),
        Command::Deligne(DeligneCmd::Build(a)) => run!("deligne build", a, commands::deligne_build),
        Command::Deligne(DeligneCmd::Check(a)) => run!("deligne check", a, commands::deligne_check),
        Command::Hyper(a) => run!("hyper", a, commands::hyper),
        Command::Verify(VerifyCmd::MainTheorem(a)) => run!("verify main-theorem", a, commands::verify_main),
        Command::Props(PropsCmd::Selftest(a)) => run!("props selftest", a, commands::props_selftest),
    };
    let mut body = match outcome {
        Ok(b) => b,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return f.exit_code();
        }
    };
    let text = match (cli.format, body.raw_text.take()) {
        (_, Some(raw)) => raw,
        (Format::Text, None) => render_text(&envelope(name, cli.seed, &config, &body)),
        (Format::Json, None) => serde_json::to_string_pretty(&envelope(name, cli.seed, &config, &body)).expect("serializable") + "\n",
    };
    // a closed pipe downstream is not our failure
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    match body.verdict {
        Verdict::Pass => ExitCode::SUCCESS,
        Verdict::Mismatch => ExitCode::from(1),
    }
}
