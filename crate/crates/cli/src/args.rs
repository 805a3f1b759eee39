use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default seed for every randomized step.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(
    name = "diamond",
    version,
    about = "Composed products over finite fields and the checks around them"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Base field, e.g. `p=2`, `p=2,mod=x^2+x+1` or `p=3,deg=2`; repeat to extend further.
    #[arg(long = "field", global = true, default_value = "p=2")]
    pub field: Vec<String>,
    /// Seed for randomized root finding and sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest number of candidates an enumeration may visit.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Largest field cardinality an operation may use.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub shards: usize,
    /// Record per-task wall-clock times (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Composed product of two monic polynomials.
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// `add`, `mul` or `phi=<bivariate polynomial>`.
        #[arg(long, default_value = "add")]
        op: String,
    },
    /// Run one of the exhaustive checkers.
    Check(CheckArgs),
    /// Witness search for prescribed-coefficient irreducibles.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Irred,
    WeakCancel,
    RestrictedInj,
    BcVerify,
    PropE3,
    Independence,
    TheoremSweep,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub what: What,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Polynomial for `irred`.
    #[arg(long)]
    pub f: Option<String>,
    /// Bivariate diamond, shorthand for `--op phi=...`.
    #[arg(long)]
    pub phi: Option<String>,
    /// Univariate polynomial for `restricted-inj`.
    #[arg(long)]
    pub psi: Option<String>,
    /// `add`, `mul` or `phi=<bivariate polynomial>`.
    #[arg(long)]
    pub op: Option<String>,
    /// Restrict partners to Frobenius orbits in `weak-cancel` and `theorem-sweep`.
    #[arg(long)]
    pub orbit_only: bool,
    /// Reducible-input samples per side in `bc-verify`.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Exhaustive,
    FastOnly,
}

#[derive(Debug, Subcommand)]
pub enum ConjectureCmd {
    /// Search one `(p, k, l)`.
    Find {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Every `(p, k, l)` with `kl >= 2` and `p^(kl) <= bound`.
    Sweep {
        #[arg(long)]
        bound: u128,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}
