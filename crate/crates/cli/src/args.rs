use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cubicl", version, about = "Primitive cubic characters over F_q(T): families, L-functions, moments and constants")]
pub struct Cli {
    /// Worker threads (defaults to rayon's choice).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the primary output here; the manifest goes to `<out>.manifest.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write `runtime_ms` as null in reports.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact twisted second moment over the family of genus g.
    Moment(MomentArgs),
    /// L-polynomial of the character attached to F.
    Lpoly(LpolyArgs),
    /// List the family of genus g.
    Family(FamilyArgs),
    /// Euler-product constants and the predicted main term.
    Constants(ConstantsArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Double Dirichlet series experiments.
    Dds {
        #[command(subcommand)]
        command: DdsCommand,
    },
}

#[derive(Args, Debug)]
pub struct Twists {
    #[arg(long, default_value = "1")]
    pub h1: String,
    #[arg(long, default_value = "1")]
    pub h2: String,
}

#[derive(Args, Debug)]
pub struct MomentArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub g: u32,
    #[command(flatten)]
    pub twists: Twists,
    #[arg(long, default_value_t = 14)]
    pub cutoff_p: u32,
    #[arg(long, default_value_t = 12)]
    pub cutoff_s: u32,
    #[arg(long, default_value_t = 12)]
    pub cutoff_c: u32,
}

#[derive(Args, Debug)]
pub struct LpolyArgs {
    #[arg(long)]
    pub q: u64,
    /// Monic polynomial over F_{q^2}, e.g. "T^2+[0,1]*T+1".
    #[arg(long = "F")]
    pub f: String,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub g: u32,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub g: u32,
    #[command(flatten)]
    pub twists: Twists,
    /// `half` for v = q^{-1/2}, or a real number.
    #[arg(long, default_value = "half")]
    pub v_mode: String,
    /// Degree cutoff for S and C.
    #[arg(long, default_value_t = 12)]
    pub cutoff: u32,
    #[arg(long, default_value_t = 14)]
    pub cutoff_p: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gauss,
    Fe,
    Rh,
    ChiD,
    LocalFactors,
    All,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 2)]
    pub g: u32,
    /// Degree bound for the chi-d scan.
    #[arg(long, default_value_t = 3)]
    pub max_deg: usize,
}

#[derive(Subcommand, Debug)]
pub enum DdsCommand {
    /// Growth classification over a grid of (|u|, |v|).
    Scan(ScanArgs),
    /// Direct truncation against the Möbius-rearranged representation.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub q: u64,
    #[command(flatten)]
    pub twists: Twists,
    /// `U/V`, each a comma list or `lo:hi:n` (n log-spaced points).
    #[arg(long)]
    pub grid: String,
    /// Highest F-degree; each extra degree costs roughly a factor q^6.
    #[arg(long, default_value_t = 3)]
    pub m_f: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub q: u64,
    #[command(flatten)]
    pub twists: Twists,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub w: f64,
    /// `m_F,m_N,m_D`.
    #[arg(long, default_value = "3,3,3")]
    pub cutoffs: String,
    /// Fail when the Möbius-side tail bound exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}
