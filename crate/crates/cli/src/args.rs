use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kgk", version, about = "Klein-Gordon bound states in mixed scalar/vector Kratzer potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,

    /// Output encoding.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// JSON file with the same keys as the flags; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchFilter {
    All,
    Particle,
    Antiparticle,
}

impl BranchFilter {
    pub fn as_str(self) -> &'static str {
        match self {
            BranchFilter::All => "all",
            BranchFilter::Particle => "particle",
            BranchFilter::Antiparticle => "antiparticle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Compare {
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanParam {
    M,
    A1,
    B1,
    A2,
    B2,
}

impl ScanParam {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanParam::M => "m",
            ScanParam::A1 => "a1",
            ScanParam::B1 => "b1",
            ScanParam::A2 => "a2",
            ScanParam::B2 => "b2",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Particle mass.
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Scalar inverse-square strength.
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    /// Scalar Coulomb strength.
    #[arg(long, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    /// Vector inverse-square strength.
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Vector Coulomb strength.
    #[arg(long, allow_negative_numbers = true)]
    pub b2: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Roots of the spectrum equation for levels 0..=nmax.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, value_enum)]
        branch: Option<BranchFilter>,
    },
    /// One level by a chosen method.
    Energy {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: Option<usize>,
        /// implicit | closed:<case> | approx:<case> | oracle
        #[arg(long)]
        method: Option<String>,
        #[arg(long, value_enum)]
        branch: Option<BranchFilter>,
        #[arg(long, value_enum)]
        compare: Option<Compare>,
    },
    /// Ground-state wavefunction table.
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        /// Energy, or `auto` for the ground-state particle root.
        #[arg(long = "e", allow_negative_numbers = true)]
        energy: Option<String>,
        #[arg(long)]
        rmin: Option<f64>,
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        normalize: bool,
    },
    /// Seeded verification suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Sweep one coupling and solve level n at each point.
    Scan {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        param: Option<ScanParam>,
        #[arg(long, allow_negative_numbers = true)]
        from: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum)]
        branch: Option<BranchFilter>,
    },
}
