use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "screened-casimir", version, about = "Classical Casimir interactions between dielectrics with free charges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Force per area between two half-spaces across a vacuum gap
    PlatesForce(PlanarArgs),
    /// Free energy per area between two half-spaces
    PlatesEnergy(PlanarArgs),
    /// Interaction potential of a polarizable particle with one half-space
    ParticlePotential(ParticleArgs),
    /// Free energy of a ball inside a concentric spherical cavity
    SpheresEnergy(SphereArgs),
    /// Transverse Fourier component of the charge correlation across the gap
    Correlation(CorrelationArgs),
    /// Evaluate one command over a range of one parameter (CSV by default)
    Sweep(SweepArgs),
    /// Run the cross-validation battery and print a pass/fail table
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Relative tolerance for integrals and series
    #[arg(long, default_value_t = screened_casimir::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct MediumArgs {
    /// Dielectric constant of the media (>= 1)
    #[arg(long)]
    pub epsilon: f64,
    /// Inverse screening length inside the media [default: 0]
    #[arg(long, conflicts_with = "kappa_a")]
    pub kappa_eps: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GapArgs {
    /// Gap width a
    #[arg(long)]
    pub gap: Option<f64>,
    /// Dimensionless mode: kappa_eps * a, with a = 1
    #[arg(long)]
    pub kappa_a: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PlanarArgs {
    #[command(flatten)]
    pub medium: MediumArgs,
    #[command(flatten)]
    pub gap: GapArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct ParticleArgs {
    #[command(flatten)]
    pub planar: PlanarArgs,
    /// Polarizability of the particle (volume)
    #[arg(long)]
    pub alpha: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelationArgs {
    #[command(flatten)]
    pub planar: PlanarArgs,
    /// Transverse wavenumber
    #[arg(long)]
    pub q: f64,
    /// Observation point, beyond the gap (z > a)
    #[arg(long, allow_hyphen_values = true)]
    pub z: f64,
    /// Source point, inside the first medium (z0 < 0)
    #[arg(long, allow_hyphen_values = true)]
    pub z0: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SphereArgs {
    /// Dielectric constant of the media (>= 1)
    #[arg(long)]
    pub epsilon: f64,
    /// Inverse screening length inside the media [default: 0]
    #[arg(long)]
    pub kappa_eps: Option<f64>,
    /// Radius of the inner ball
    #[arg(long, requires = "radius_b", conflicts_with = "radius_ratio")]
    pub radius_a: Option<f64>,
    /// Radius of the cavity
    #[arg(long, requires = "radius_a", conflicts_with = "radius_ratio")]
    pub radius_b: Option<f64>,
    /// Dimensionless mode: a/b, with b = 1
    #[arg(long, required_unless_present = "radius_a")]
    pub radius_ratio: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    PlatesForce,
    PlatesEnergy,
    ParticlePotential,
    SpheresEnergy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepParam {
    GapA,
    KappaEps,
    Epsilon,
    RadiusRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: Spacing,
    /// Fixed dielectric constant (unless swept) [default: 1]
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Fixed inverse screening length (unless swept) [default: 0]
    #[arg(long)]
    pub kappa_eps: Option<f64>,
    /// Fixed gap width for planar targets (unless swept) [default: 1]
    #[arg(long)]
    pub gap: Option<f64>,
    /// Polarizability for particle-potential
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fixed a/b for spheres-energy, with b = 1 (unless swept)
    #[arg(long)]
    pub radius_ratio: Option<f64>,
    #[arg(long, default_value_t = screened_casimir::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Reduced grids
    #[arg(long)]
    pub quick: bool,
    /// Print the checks as JSON instead of a table
    #[arg(long)]
    pub json: bool,
    /// Multiplies the planar reflection factor in the ionic-force check
    #[arg(long, hide = true, default_value_t = 1.0)]
    pub perturb_reflection: f64,
}
