use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "carlitz", version, about = "Carlitz calculus: factorials, K-binomials, identity sweeps and GK dimensions")]
pub struct Cli {
    /// Characteristic of the constant field.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// Extension degree; the constant field has q = p^nu elements.
    #[arg(long, global = true, default_value_t = 1)]
    pub nu: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "rank-mode", global = true, value_enum, default_value_t = RankModeArg::Exact)]
    pub rank_mode: RankModeArg,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankModeArg {
    Exact,
    Probabilistic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a single object.
    Compute(ComputeArgs),
    /// Run an identity sweep; exit code 3 on failure.
    Verify(VerifyArgs),
    /// Filtration dimensions and Hilbert fit; exit code 2 if unstable.
    Gkdim(GkdimArgs),
    /// Emit a table of values.
    Table(TableArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComputeWhat {
    Factorial,
    Lfac,
    Bracket,
    #[value(name = "binomK", alias = "binomk")]
    BinomK,
    Carlitz,
    Hyp,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarlitzKind {
    /// `e_k`, the non-normalized polynomial.
    E,
    /// `f_k = e_k / D_k`.
    F,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(value_enum)]
    pub what: ComputeWhat,
    #[arg(long, default_value_t = 0)]
    pub i: u32,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_enum, default_value_t = CarlitzKind::F)]
    pub kind: CarlitzKind,
    /// Numerator parameters of the hypergeometric polynomial.
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<u32>,
    /// Denominator parameters of the hypergeometric polynomial.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<u32>,
    /// Truncation of the hypergeometric sum.
    #[arg(long = "T")]
    pub t: Option<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyWhich {
    Pascal,
    Vandermonde,
    Kbinom,
    Pde,
    Contiguous,
    Places,
    Ring,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Literal,
    Twisted,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub which: VerifyWhich,
    #[arg(long)]
    pub kmax: Option<u32>,
    #[arg(long, default_value_t = 3)]
    pub dmax: u32,
    #[arg(long = "T", default_value_t = 8)]
    pub t: u32,
    #[arg(long, default_value_t = 4)]
    pub pmax: u32,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Degree bound for random arguments.
    #[arg(long, default_value_t = 3)]
    pub deg: u32,
    /// Number of `t` variables for the ring sweep.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = FormArg::Twisted)]
    pub form: FormArg,
    /// Break the identity on purpose; the sweep must then fail.
    #[arg(long)]
    pub perturb: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Carlitz,
    Binom,
    Hyp,
    Diag,
    Poly,
    /// Carlitz module plus the binomial generating series.
    Sum,
}

#[derive(Args, Debug)]
pub struct GkdimArgs {
    #[arg(long, value_enum)]
    pub function: Function,
    #[arg(long = "T", default_value_t = 10)]
    pub t: u32,
    #[arg(long, default_value_t = 5)]
    pub jmax: u32,
    /// Polynomial in s for `poly`, e.g. `s^q` or `e2`.
    #[arg(long, default_value = "s^q")]
    pub spec: String,
    /// Inner polynomial for `diag`.
    #[arg(long, default_value = "e2")]
    pub g: String,
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    #[arg(long, default_value_t = 0)]
    pub lambda: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableWhich {
    #[value(name = "binomK", alias = "binomk")]
    BinomK,
    Factorial,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub which: TableWhich,
    #[arg(long, default_value_t = 6)]
    pub kmax: u32,
    #[arg(long, default_value_t = 2)]
    pub dmax: u32,
}
