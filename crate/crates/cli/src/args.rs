// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iwasawa::{Family, FamilySpec};

#[derive(Debug, Parser)]
#[command(name = "iwasawa", version, about = "Principal curvatures of homogeneous hypersurfaces in CH^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal curvatures of every family at one radius.
    Table(TableArgs),
    /// Closed-form and numeric eigenvalues over a range of radii, as CSV.
    Sweep(SweepArgs),
    /// Run the invariant suite and write a JSON report.
    Verify(VerifyArgs),
    /// Closed-form and numeric spectrum of a single hypersurface.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    A,
    B,
    H,
    S,
    Wpi2,
    Wphi,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::H => Family::H,
            FamilyArg::S => Family::S,
            FamilyArg::Wpi2 => Family::WPi2,
            FamilyArg::Wphi => Family::WPhi,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Angle {
    /// Kahler angle in radians.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "phi_deg")]
    pub phi: Option<f64>,
    /// Kahler angle in degrees.
    #[arg(long)]
    pub phi_deg: Option<f64>,
}

impl Angle {
    pub fn radians(&self) -> Option<f64> {
        self.phi.or(self.phi_deg.map(f64::to_radians))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "md")]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r: f64,
    /// Dimension of the complex subspace for family A.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Codimension parameter for the W families.
    #[arg(long, default_value_t = 2)]
    pub k_w: usize,
    #[command(flatten)]
    pub angle: Angle,
    #[command(flatten)]
    pub out: Output,
}

impl TableArgs {
    pub fn phi(&self) -> f64 {
        self.angle.radians().unwrap_or(FRAC_PI_4)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub angle: Angle,
}

impl SpecArgs {
    /// The family at radius `r`, with the defaults `k = 1` (A), `k = 2` (W).
    pub fn spec(&self, r: f64) -> FamilySpec {
        let n = self.n;
        match self.family {
            FamilyArg::A => FamilySpec::A { n, k: self.k.unwrap_or(1), r },
            FamilyArg::B => FamilySpec::B { n, r },
            FamilyArg::H => FamilySpec::H { n },
            FamilyArg::S => FamilySpec::S { n, r },
            FamilyArg::Wpi2 => FamilySpec::WPi2 { n, k: self.k.unwrap_or(2), r },
            FamilyArg::Wphi => {
                FamilySpec::WPhi { n, k: self.k.unwrap_or(2), phi: self.angle.radians().unwrap_or(FRAC_PI_4), r }
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub r_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: f64,
    /// Number of rows, endpoints included.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, env = "IWASAWA_SEED", default_value_t = iwasawa::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// Replace every tolerance of the suite.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub r: f64,
    #[command(flatten)]
    pub out: Output,
}
