use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hodge", version, about = "Deligne splittings and heights of mixed Hodge structures")]
pub struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, env = "HODGE_TOL", default_value_t = 1e-9)]
    pub tol: f64,

    /// Mantissa bits: 53 (f64) or 106 (double-double).
    #[arg(long, global = true, default_value_t = 53)]
    pub precision: u32,

    /// Seed for generated inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Bigrading,
    Delta,
    Height,
    LimitHeight,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of the structure in a JSON file.
    Validate { path: PathBuf },

    /// Compute a quantity for the structure or orbit in a JSON file.
    Compute {
        #[arg(value_enum)]
        what: Quantity,
        path: PathBuf,
    },

    /// Run a worked example and compare against its closed form.
    Scenario {
        #[command(subcommand)]
        which: ScenarioCommand,
    },

    /// Heights along the ray `z = x + i y` for a variation file.
    Sweep {
        path: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        y_min: f64,
        #[arg(long, default_value_t = 10.0)]
        y_max: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Space the samples geometrically instead of linearly.
        #[arg(long)]
        log: bool,
    },

    /// Write an example input document.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Height of the dilogarithm fiber at `s`.
    Dilog {
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        s: String,
    },
    /// Fiber and limit heights of the weight-6 orbit at `z`.
    Orbit6iii {
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        z: String,
    },
    /// Height of a pair of triangles: the family member at `t`, the
    /// triangles in `--input`, or a built-in real triangle.
    Triangle {
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Height of the triangle family at `t` and its boundary limits.
    Family {
        #[arg(long, default_value = "-i", allow_hyphen_values = true)]
        t: String,
    },
    /// Biextension of two dimension-zero cycles.
    Dim0 {
        #[arg(long, default_value = "2.718281828459045", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value = "2.718281828459045", allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExampleCommand {
    /// Oriented dilogarithm fiber at `s`.
    DilogFiber {
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        s: String,
    },
    /// Dilogarithm variation near `s = 0`.
    DilogVariation {
        #[arg(long, default_value_t = 60)]
        terms: u32,
    },
    /// The weight-6 orbit.
    Orbit6iii,
    /// The weight-6 orbit as a variation.
    Orbit6iiiVariation,
    /// Split Hodge–Tate structure of ranks `1, m, 1`.
    Split {
        #[arg(long, default_value_t = 1)]
        middle: usize,
    },
    /// Random Hodge–Tate variation (uses `--seed`).
    RandomHodgeTate {
        /// Graded ranks, e.g. `1,2,1`.
        #[arg(long, default_value = "1,2,1", value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        nilpotents: usize,
    },
}
