use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "rsw", version, about = "Exact solutions and symmetry checks for rotating shallow water")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a catalog solution on a grid.
    Field(FieldCmd),
    /// Integrate particle paths.
    Trajectory(TrajectoryCmd),
    /// Residual of the governing equations on a grid.
    Residual(ResidualCmd),
    /// Structure constants of the symmetry algebra.
    Commutators(CommutatorsCmd),
    /// Map a solution between the rotating and classical systems, or
    /// transport it along the pulsation symmetry.
    Map(MapCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Polar,
    Cartesian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Fd,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct Physics {
    /// Coriolis parameter; the family default when omitted.
    #[arg(long)]
    pub f: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
}

/// Family parameters. Every flag also has a `--param name=value` spelling.
#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub h0: Option<String>,
    #[arg(long)]
    pub u0: Option<String>,
    #[arg(long)]
    pub v0: Option<String>,
    /// Stationary swirl profile: const:c, power:c:p or sine:a:k.
    #[arg(long)]
    pub vbar: Option<String>,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long)]
    pub c1: Option<String>,
    #[arg(long)]
    pub c2: Option<String>,
    #[arg(long)]
    pub c3: Option<String>,
    /// Ring branch: lower or upper.
    #[arg(long)]
    pub branch: Option<String>,
    #[arg(long)]
    pub lambda0: Option<String>,
    #[arg(long)]
    pub eta0: Option<String>,
    #[arg(long)]
    pub phi0: Option<String>,
    #[arg(long = "r-max")]
    pub r_max: Option<String>,
    #[arg(long = "r-lo")]
    pub r_lo: Option<String>,
    #[arg(long = "r-hi")]
    pub r_hi: Option<String>,
    /// Extra `name=value` parameter, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub extra: Vec<String>,
}

impl FamilyArgs {
    pub fn pairs(&self) -> Vec<(String, String)> {
        let named = [
            ("alpha", &self.alpha),
            ("h0", &self.h0),
            ("u0", &self.u0),
            ("v0", &self.v0),
            ("vbar", &self.vbar),
            ("psi", &self.psi),
            ("c1", &self.c1),
            ("c2", &self.c2),
            ("c3", &self.c3),
            ("branch", &self.branch),
            ("lambda0", &self.lambda0),
            ("eta0", &self.eta0),
            ("phi0", &self.phi0),
            ("r_max", &self.r_max),
            ("r_lo", &self.r_lo),
            ("r_hi", &self.r_hi),
        ];
        let mut out: Vec<(String, String)> = named
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        for e in &self.extra {
            match e.split_once('=') {
                Some((k, v)) => out.push((k.trim().replace('-', "_"), v.trim().to_string())),
                None => out.push((e.clone(), String::new())),
            }
        }
        out
    }
}

/// Sampling grid. Axes are `lo:hi:count`; times may also be a comma list.
#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Radii as fractions of the moving edge of a finite-radius solution.
    #[arg(long = "r-fraction", conflicts_with = "r")]
    pub r_fraction: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
}

#[derive(Args, Debug)]
pub struct FieldCmd {
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub params: FamilyArgs,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Coordinates of the output; the family's own frame by default.
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct TrajectoryCmd {
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub params: FamilyArgs,
    #[command(flatten)]
    pub physics: Physics,
    /// Starting radii, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub r0: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta0: f64,
    /// Output times; one rotation period in 200 steps by default.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct ResidualCmd {
    /// Single family; use --all for the whole catalog.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    pub family: Option<String>,
    /// Every catalog family with its default parameters.
    #[arg(long, visible_alias = "defaults")]
    pub all: bool,
    #[command(flatten)]
    pub params: FamilyArgs,
    #[command(flatten)]
    pub physics: Physics,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: ModeArg,
    #[arg(long = "fd-step", default_value_t = 1e-4)]
    pub fd_step: f64,
    /// Pass threshold; 1e-6 analytic and 1e-4 with finite differences.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Multiply the depth by this factor before checking.
    #[arg(long = "corrupt-depth")]
    pub corrupt_depth: Option<f64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    #[value(name = "Y", alias = "y")]
    Y,
    #[value(name = "Z", alias = "z")]
    Z,
}

#[derive(Args, Debug)]
pub struct CommutatorsCmd {
    #[arg(long, value_enum, default_value = "Y")]
    pub family: TableArg,
    #[arg(long, default_value_t = 1.0)]
    pub f: f64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Rsw2sw,
    Sw2rsw,
}

#[derive(Args, Debug)]
pub struct MapCmd {
    #[arg(long)]
    pub family: String,
    #[command(flatten)]
    pub params: FamilyArgs,
    #[command(flatten)]
    pub physics: Physics,
    #[arg(long, value_enum, conflicts_with = "transport", required_unless_present = "transport")]
    pub direction: Option<DirectionArg>,
    /// Transport along the pulsation symmetry with parameter --alpha.
    #[arg(long)]
    pub transport: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}
