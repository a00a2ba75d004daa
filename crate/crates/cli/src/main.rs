use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use jsc_cli::job::{run, Command, Format, JobSpec};
use jsc_core::NormKind;

/// Certified bound sequences for the joint spectral radius and subradius
/// of finite matrix sets, with invariant-cone certificates.
#[derive(Parser)]
#[command(name = "jsc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Enumerate products and report the five bound sequences.
    Bounds(CommonArgs),
    /// Subradius interval: conic lower bound against per-product minima.
    Subradius(CommonArgs),
    /// Kronecker-lift sandwich on the joint spectral radius.
    Kron(CommonArgs),
    /// Maximal trace and spectral radius growth sequences.
    TraceSeq(CommonArgs),
    /// Invariance, positivity, primitivity, and embedding diagnostics.
    ConeCheck(CommonArgs),
    /// Entrywise perturbation study of both intervals.
    Perturb(CommonArgs),
    /// Cross-engine consistency battery (exits 4 on any failed check).
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input file (matrix set plus optional cone blocks).
    input: PathBuf,
    /// Largest product length to enumerate.
    #[arg(long, default_value_t = 8)]
    t_max: usize,
    /// Largest Kronecker lift order.
    #[arg(long, default_value_t = 3)]
    k_max: usize,
    /// Numerical tolerance for feasibility and comparisons.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Operator norm: two, one, or inf.
    #[arg(long, default_value = "two")]
    norm: String,
    /// Perturbation radii, comma separated, nonincreasing.
    #[arg(long, value_delimiter = ',')]
    deltas: Vec<f64>,
    /// Trials per perturbation radius (also scales sampling budgets).
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Seed for all randomized estimators; echoed in machine output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on the total number of enumerated products.
    #[arg(long, default_value_t = 2_000_000)]
    budget: usize,
    /// Cap on lifted matrix dimensions.
    #[arg(long, default_value_t = 4096)]
    dim_cap: usize,
    /// Merge numerically equal products within this tolerance.
    #[arg(long)]
    dedup_tol: Option<f64>,
    /// Attach a cone by name (only `orthant`), overriding the input file.
    #[arg(long)]
    cone: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: human or machine.
    #[arg(long, default_value = "human")]
    format: String,
}

fn build_job(command: Command, args: CommonArgs) -> Result<JobSpec, String> {
    let norm: NormKind = args.norm.parse()?;
    let format = Format::from_token(&args.format)?;
    let cone_override = match args.cone.as_deref() {
        None => false,
        Some("orthant") => true,
        Some(other) => return Err(format!("unknown cone name '{other}' (only 'orthant')")),
    };
    Ok(JobSpec {
        command,
        input: args.input,
        t_max: args.t_max,
        k_max: args.k_max,
        tol: args.tol,
        norm,
        deltas: args.deltas,
        trials: args.trials,
        seed: args.seed,
        budget: args.budget,
        dim_cap: args.dim_cap,
        dedup_tol: args.dedup_tol,
        cone_override,
        format,
        out: args.out,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        CliCommand::Bounds(a) => (Command::Bounds, a),
        CliCommand::Subradius(a) => (Command::Subradius, a),
        CliCommand::Kron(a) => (Command::Kron, a),
        CliCommand::TraceSeq(a) => (Command::TraceSeq, a),
        CliCommand::ConeCheck(a) => (Command::ConeCheck, a),
        CliCommand::Perturb(a) => (Command::Perturb, a),
        CliCommand::Verify(a) => (Command::Verify, a),
    };
    let job = match build_job(command, args) {
        Ok(job) => job,
        Err(msg) => {
            eprintln!("jsc: usage error: {msg}");
            return ExitCode::from(2);
        }
    };
    ExitCode::from(run(&job) as u8)
}
