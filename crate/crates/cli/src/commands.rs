use std::fmt;

use screened_casimir::planar::{
    correlation_hat, force_per_area, free_energy_per_area, particle_force, particle_potential,
};
use screened_casimir::spherical::{sphere_force, sphere_free_energy};
use screened_casimir::{Error, Medium, SphericalSetup};

use crate::args::{CorrelationArgs, GapArgs, MediumArgs, PlanarArgs, SphereArgs};
use crate::output::Record;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Library(e) => match e {
                Error::InvalidParameter { .. } | Error::Domain(_) => 2,
                _ => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub epsilon: f64,
    pub kappa_eps: f64,
    pub gap_a: f64,
}

impl PlanarPoint {
    fn medium(&self) -> Result<Medium, CliError> {
        Ok(Medium::new(self.epsilon, self.kappa_eps)?)
    }

    fn record(&self, command: &str, tol: f64) -> Record {
        Record::new()
            .text("command", command)
            .num("epsilon", self.epsilon)
            .num("kappa_eps", self.kappa_eps)
            .num("gap_a", self.gap_a)
            .num("kappa_a", self.kappa_eps * self.gap_a)
            .num("tol", tol)
    }
}

pub fn resolve_planar(medium: &MediumArgs, gap: &GapArgs) -> Result<PlanarPoint, CliError> {
    match (gap.gap, gap.kappa_a) {
        (Some(g), None) => Ok(PlanarPoint {
            epsilon: medium.epsilon,
            kappa_eps: medium.kappa_eps.unwrap_or(0.0),
            gap_a: g,
        }),
        (None, Some(ka)) => Ok(PlanarPoint {
            epsilon: medium.epsilon,
            kappa_eps: ka,
            gap_a: 1.0,
        }),
        _ => Err(CliError::Usage("exactly one of --gap and --kappa-a is required".into())),
    }
}

pub fn plates_force(p: &PlanarPoint, tol: f64) -> Result<Record, CliError> {
    let f = force_per_area(&p.medium()?, p.gap_a, tol)?;
    Ok(p.record("plates-force", tol)
        .num("beta_f", f.value)
        .num("beta_f_a3", f.value * p.gap_a.powi(3))
        .num("error_estimate", f.abs_error_estimate)
        .int("evaluations", f.evaluations as u64)
        .num("series_beta_f", f.series.value)
        .int("series_terms", f.series.terms_used)
        .num("series_tail_bound", f.series.tail_bound))
}

pub fn plates_energy(p: &PlanarPoint, tol: f64) -> Result<Record, CliError> {
    let e = free_energy_per_area(&p.medium()?, p.gap_a, tol)?;
    Ok(p.record("plates-energy", tol)
        .num("beta_F", e.value)
        .num("beta_F_a2", e.value * p.gap_a * p.gap_a)
        .num("error_estimate", e.abs_error_estimate)
        .int("evaluations", e.evaluations as u64))
}

pub fn particle(p: &PlanarPoint, alpha: f64, tol: f64) -> Result<Record, CliError> {
    let m = p.medium()?;
    let v = particle_potential(&m, alpha, p.gap_a, tol)?;
    let f = particle_force(&m, alpha, p.gap_a, tol)?;
    let reduced = if alpha > 0.0 { v.value * p.gap_a.powi(3) / alpha } else { 0.0 };
    Ok(p.record("particle-potential", tol)
        .num("alpha", alpha)
        .num("beta_V", v.value)
        .num("beta_V_a3_over_alpha", reduced)
        .num("error_estimate", v.abs_error_estimate)
        .num("beta_force", f.value)
        .num("beta_force_error_estimate", f.abs_error_estimate))
}

pub fn correlation(args: &CorrelationArgs) -> Result<Record, CliError> {
    let p = resolve_planar(&args.planar.medium, &args.planar.gap)?;
    let tol = args.planar.common.tol;
    let h = correlation_hat(&p.medium()?, args.q, args.z, args.z0, p.gap_a)?;
    Ok(p.record("correlation", tol)
        .num("q", args.q)
        .num("z", args.z)
        .num("z0", args.z0)
        .num("h_over_beta_qc2", h))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub epsilon: f64,
    pub kappa_eps: f64,
    pub radius_a: f64,
    pub radius_b: f64,
}

pub fn resolve_sphere(args: &SphereArgs) -> Result<SpherePoint, CliError> {
    let (a, b) = match (args.radius_a, args.radius_b, args.radius_ratio) {
        (Some(a), Some(b), None) => (a, b),
        (None, None, Some(r)) => (r, 1.0),
        _ => {
            return Err(CliError::Usage(
                "give either --radius-a and --radius-b, or --radius-ratio".into(),
            ))
        }
    };
    Ok(SpherePoint {
        epsilon: args.epsilon,
        kappa_eps: args.kappa_eps.unwrap_or(0.0),
        radius_a: a,
        radius_b: b,
    })
}

pub fn spheres(p: &SpherePoint, tol: f64) -> Result<Record, CliError> {
    let setup = SphericalSetup::new(Medium::new(p.epsilon, p.kappa_eps)?, p.radius_a, p.radius_b)?;
    let e = sphere_free_energy(&setup, tol)?;
    let force = sphere_force(&setup, tol)?;
    Ok(Record::new()
        .text("command", "spheres-energy")
        .num("epsilon", p.epsilon)
        .num("kappa_eps", p.kappa_eps)
        .num("radius_a", p.radius_a)
        .num("radius_b", p.radius_b)
        .num("radius_ratio", setup.ratio())
        .num("kappa_b", p.kappa_eps * p.radius_b)
        .num("tol", tol)
        .num("beta_F", e.value)
        .int("l_max", e.l_max as u64)
        .num("tail_bound", e.tail_bound)
        .num("beta_dF_db", force))
}

pub fn planar_point(args: &PlanarArgs) -> Result<PlanarPoint, CliError> {
    resolve_planar(&args.medium, &args.gap)
}
