use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const DEFAULT_BUDGET: u64 = 10_000;

#[derive(Parser, Debug)]
#[command(
    name = "mingens",
    version,
    about = "Extremal bounded-degree generating sets: counts, certificates and constructions"
)]
pub struct Cli {
    /// Emit JSON even when standard output is a terminal.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree profile and telescoped generators of an ideal.
    MuBound(MuBoundArgs),
    #[command(subcommand)]
    Certificate(CertificateCmd),
    #[command(subcommand)]
    Univariate(UnivariateCmd),
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    #[command(subcommand)]
    Construct(ConstructCmd),
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Run a grid of subcommands and tabulate their outcomes.
    Batch(BatchArgs),
}

#[derive(Args, Debug, Serialize, Clone)]
pub struct GensArgs {
    /// JSON array of polynomials, or one polynomial per line.
    #[arg(long)]
    pub gens: Option<PathBuf>,
    /// Inline generator; may be repeated.
    #[arg(long = "poly")]
    pub poly: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct MuBoundArgs {
    /// `q`, `gf:p` or `gf:p^e`.
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[arg(short = 'd', long)]
    pub d: u32,
    #[command(flatten)]
    pub gens: GensArgs,
    /// Use the monomials of degree exactly d.
    #[arg(long, conflicts_with_all = ["gens", "poly"])]
    pub sharp: bool,
    /// Fixed Macaulay working degree instead of automatic escalation.
    #[arg(long)]
    pub working_degree: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum CertificateCmd {
    /// Search for points with invertible Vandermonde matrix and solve for
    /// the dual basis.
    Search(SearchArgs),
    /// Re-check a certificate file by direct evaluation.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[arg(short = 'd', long)]
    pub d: u32,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, env = "MINGENS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Coordinate grid size for random sampling (default min(|K|, d+1)).
    #[arg(long)]
    pub grid: Option<u64>,
    /// Skip the deterministic structured candidates.
    #[arg(long)]
    pub no_structured: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    pub file: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum UnivariateCmd {
    /// Largest minimal generating set of (1) from products of irreducibles.
    Extremal(ExtremalArgs),
    /// Irreducible counts by degree.
    Count(CountArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub max_degree: u32,
}

#[derive(Subcommand, Debug)]
pub enum ConjectureCmd {
    /// Search a dual system over F_{q^k} satisfying the conjugate condition
    /// and descend it by the norm.
    Probe(ProbeArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub d: u32,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    /// Point trials, in total or per attempt with --attempts.
    #[arg(long, env = "MINGENS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Run this many independent single attempts and report the acceptance
    /// rate instead of restarting until success.
    #[arg(long)]
    pub attempts: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Lattice simplex over a field of characteristic 0.
    Simplex(SimplexArgs),
    /// Univariate nodes (1 - zeta^i)/(1 - zeta).
    Qline(QlineArgs),
    /// Two-variable triangle of points built from x and y.
    Triangle(TriangleArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SimplexArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[arg(short = 'd', long)]
    pub d: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct QlineArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'd', long)]
    pub d: u32,
    /// Defaults to the least primitive element, or 2 over Q.
    #[arg(long)]
    pub zeta: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct TriangleArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'd', long)]
    pub d: u32,
    /// Defaults to 1.
    #[arg(long)]
    pub x: Option<String>,
    /// Defaults to the least primitive element, or 2 over Q.
    #[arg(long)]
    pub y: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Reduced Groebner basis (graded lex).
    Gb(OracleGbArgs),
    /// Ideal membership by normal form.
    Member(OracleMemberArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct OracleGbArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[command(flatten)]
    pub gens: GensArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct OracleMemberArgs {
    #[arg(long, default_value = "q")]
    pub field: String,
    #[arg(short = 'n', long)]
    pub n: usize,
    #[arg(long)]
    pub f: String,
    #[command(flatten)]
    pub gens: GensArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct BatchArgs {
    pub spec: PathBuf,
    /// Record wall-clock time per cell (breaks byte-identical reruns).
    #[arg(long)]
    pub timings: bool,
}
