use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "scalewise", version, about = "Dimensional analysis and power-law fitting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the exponents of a target in terms of parameters.
    Derive {
        /// `name:unit` or `name:value unit`
        #[arg(long)]
        target: String,
        /// Comma-separated `name:unit` list
        #[arg(long)]
        params: String,
    },
    /// Print a basis of dimensionless groups.
    Pi {
        /// Comma-separated `name:unit` list
        #[arg(long)]
        quantities: String,
    },
    /// Fit log(y/y0) against log(x/x0).
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        /// Full-precision JSON instead of the text report
        #[arg(long)]
        json: bool,
    },
    #[command(subcommand)]
    Diagnose(Diagnose),
    #[command(subcommand)]
    Predict(Predict),
    /// Write a log-log scatter plot as SVG.
    Plot {
        #[command(flatten)]
        axes: AxisArgs,
        #[arg(long)]
        out: PathBuf,
        /// Overlay the fitted power law
        #[arg(long)]
        fit: bool,
        /// Overlay a quadratic-in-log fit instead
        #[arg(long, requires = "fit")]
        quadratic: bool,
    },
}

#[derive(Debug, Args)]
pub struct AxisArgs {
    #[arg(long)]
    pub csv: PathBuf,
    /// Predictor column
    #[arg(long)]
    pub x: String,
    /// Response column
    #[arg(long)]
    pub y: String,
    /// Predictor reference unit; defaults to the column's unit
    #[arg(long)]
    pub x0: Option<String>,
    /// Response reference unit; defaults to the column's unit
    #[arg(long)]
    pub y0: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub axes: AxisArgs,
    /// Linear covariate, `COL` or `COL:UNIT`; repeatable
    #[arg(long)]
    pub covariate: Vec<String>,
    /// Add a log(x/x0)^2 term
    #[arg(long)]
    pub quadratic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Diagnose {
    /// Compare a transformed fit with a refit under a new x0.
    UnitChange {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        new_x0: String,
    },
    /// Ratio of the residual distances of two rows from a power-law fit.
    Residuals {
        #[command(flatten)]
        axes: AxisArgs,
        /// 1-based data row; give exactly two
        #[arg(long, num_args = 1, required = true)]
        row: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Space::Log)]
        space: Space,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Log,
    Natural,
}

#[derive(Debug, Subcommand)]
pub enum Predict {
    /// Blast radius from --energy and --time, or yield from --radius/--time pairs.
    Blast {
        #[arg(long, conflicts_with = "radius")]
        energy: Option<String>,
        #[arg(long, required = true)]
        time: Vec<String>,
        #[arg(long)]
        radius: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value = "1.2 kg m^-3")]
        rho: String,
    },
    /// Roasting time of a similar bird.
    Roast {
        #[arg(long)]
        mass: String,
        #[arg(long)]
        ref_mass: String,
        #[arg(long)]
        ref_time: String,
    },
    /// Hull speed of a displacement boat.
    Hull {
        #[arg(long)]
        length: String,
    },
    /// Terminal velocity of a similar animal.
    Fall {
        #[arg(long)]
        mass: String,
        #[arg(long)]
        ref_mass: String,
        #[arg(long)]
        ref_speed: String,
    },
}
