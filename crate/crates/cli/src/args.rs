use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use attain_kit::constants::{DEFAULT_RESOLUTION, GNS_DEFAULT_BUDGET};
use attain_kit::params::{Exponent, ParseExponentError, Target};

#[derive(Debug, Parser)]
#[command(name = "attain-kit", version, about = "Attainability of maximizers for Sobolev-type variational problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide attainability and report D, the threshold and t_star.
    Classify(ClassifyArgs),
    /// Sharp Sobolev constant (q = critical) or interpolation constant estimate.
    Constants(ConstantsArgs),
    /// Sample f, g, h and m on a log grid in t.
    Curve(CurveArgs),
    /// Export the explicit maximizer w_lambda.
    Maximizer(MaximizerArgs),
    /// Threshold and verdict along a gamma grid.
    Sweep(SweepArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

/// `critical`, an integer, a decimal or `a/b`.
#[derive(Debug, Clone, Copy)]
pub struct QArg(pub Target);

impl FromStr for QArg {
    type Err = ParseExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("critical") {
            Ok(QArg(Target::Critical))
        } else {
            Ok(QArg(Target::Value(s.parse()?)))
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    /// Dimension.
    #[arg(long = "N", value_name = "N")]
    pub n: u32,
    /// Primary exponent of the local problem.
    #[arg(long, conflicts_with = "s", required_unless_present = "s")]
    pub p: Option<Exponent>,
    /// Order of the fractional Laplacian.
    #[arg(long)]
    pub s: Option<Exponent>,
    /// Target exponent: `critical` or a number (`4`, `2.5`, `10/3`).
    #[arg(long, default_value = "critical")]
    pub q: QArg,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// Weight of the local problem.
    #[arg(long, conflicts_with = "beta", required_unless_present = "beta")]
    pub alpha: Option<f64>,
    /// Weight of the fractional problem.
    #[arg(long)]
    pub beta: Option<f64>,
}

impl WeightArgs {
    pub fn value(&self) -> f64 {
        self.alpha.or(self.beta).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Use this interpolation constant instead of the ascent estimate.
    #[arg(long)]
    pub gns_constant: Option<f64>,
    /// Sharp fractional Sobolev constant (required for fractional problems).
    #[arg(long)]
    pub frac_constant: Option<f64>,
    /// Initial panel count for the Sobolev quadrature.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Sweep budget of the interpolation-constant ascent.
    #[arg(long, default_value_t = GNS_DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub constants: ConstantArgs,
    /// Optimizer tolerance.
    #[arg(long, default_value_t = attain_kit::halfline::DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long = "N", value_name = "N")]
    pub n: u32,
    #[arg(long)]
    pub p: Exponent,
    #[arg(long, default_value = "critical")]
    pub q: QArg,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, default_value_t = GNS_DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[arg(long, default_value_t = 1e-6)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e6)]
    pub t_max: f64,
    /// Number of sample points.
    #[arg(long, default_value_t = 241)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MaximizerArgs {
    #[arg(long = "N", value_name = "N")]
    pub n: u32,
    #[arg(long)]
    pub p: Exponent,
    #[arg(long, default_value = "critical")]
    pub q: QArg,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Radial grid points per decade.
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// `start:stop:step`, inclusive of `stop` up to half a step.
#[derive(Debug, Clone)]
pub struct GammaRange(pub Vec<f64>);

impl FromStr for GammaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<_, _>>()?;
        let [a, b, h] = parts[..] else {
            return Err("expected start:stop:step".to_string());
        };
        if !(a > 0.0 && b >= a && h > 0.0 && a.is_finite() && b.is_finite()) {
            return Err("need 0 < start <= stop and step > 0".to_string());
        }
        let count = ((b - a) / h + 0.5).floor() as usize;
        if count > 1_000_000 {
            return Err("more than 1e6 grid points".to_string());
        }
        Ok(GammaRange((0..=count).map(|i| a + h * i as f64).collect()))
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// `start:stop:step`.
    #[arg(long)]
    pub gamma_range: GammaRange,
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
    /// Number of random profiles in the envelope check.
    #[arg(long, default_value_t = 1000)]
    pub profiles: usize,
    /// `B_{2,2,4}`; estimated by ascent when absent.
    #[arg(long)]
    pub gns_constant: Option<f64>,
    /// Fractional constant for the fractional cells.
    #[arg(long, default_value_t = 1.0)]
    pub frac_constant: f64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: usize,
    #[arg(long, default_value_t = GNS_DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
