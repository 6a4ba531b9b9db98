use rayon::prelude::*;

use crate::args::{Spacing, SweepArgs, SweepParam, Target};
use crate::commands::{particle, plates_energy, plates_force, spheres, CliError, PlanarPoint, SpherePoint};
use crate::output::Record;

/// Environment variable capping the worker threads of a sweep (0 = auto).
pub const THREADS_ENV: &str = "CASIMIR_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn new(param: SweepParam, lo: f64, hi: f64, count: usize, spacing: Spacing) -> Result<Self, CliError> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(CliError::Usage(format!("sweep range needs lo < hi, got [{lo}, {hi}]")));
        }
        if count < 2 {
            return Err(CliError::Usage("sweep needs --count >= 2".into()));
        }
        if spacing == Spacing::Log && lo <= 0.0 {
            return Err(CliError::Usage("log spacing needs lo > 0".into()));
        }
        Ok(Self {
            param,
            lo,
            hi,
            count,
            spacing,
        })
    }

    /// The sample points; both endpoints are exact.
    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|i| {
                if i == 0 {
                    return self.lo;
                }
                if i == n {
                    return self.hi;
                }
                let t = i as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.lo + t * (self.hi - self.lo),
                    Spacing::Log => 10f64.powf(self.lo.log10() + t * (self.hi.log10() - self.lo.log10())),
                }
            })
            .collect()
    }
}

pub fn param_name(p: SweepParam) -> &'static str {
    match p {
        SweepParam::GapA => "gap_a",
        SweepParam::KappaEps => "kappa_eps",
        SweepParam::Epsilon => "epsilon",
        SweepParam::RadiusRatio => "radius_ratio",
    }
}

fn check_compatible(target: Target, param: SweepParam) -> Result<(), CliError> {
    let ok = match param {
        SweepParam::GapA => target != Target::SpheresEnergy,
        SweepParam::RadiusRatio => target == Target::SpheresEnergy,
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "parameter {} cannot be swept for this target",
            param_name(param)
        )))
    }
}

fn evaluate(args: &SweepArgs, x: f64) -> Result<Record, CliError> {
    let pick = |p: SweepParam, fixed: Option<f64>| if args.param == p { Some(x) } else { fixed };
    let epsilon = pick(SweepParam::Epsilon, args.epsilon).unwrap_or(1.0);
    let kappa_eps = pick(SweepParam::KappaEps, args.kappa_eps).unwrap_or(0.0);
    match args.target {
        Target::SpheresEnergy => {
            let ratio = pick(SweepParam::RadiusRatio, args.radius_ratio)
                .ok_or_else(|| CliError::Usage("--radius-ratio is required unless it is swept".into()))?;
            let p = SpherePoint {
                epsilon,
                kappa_eps,
                radius_a: ratio,
                radius_b: 1.0,
            };
            spheres(&p, args.tol)
        }
        planar => {
            let p = PlanarPoint {
                epsilon,
                kappa_eps,
                gap_a: pick(SweepParam::GapA, args.gap).unwrap_or(1.0),
            };
            match planar {
                Target::PlatesForce => plates_force(&p, args.tol),
                Target::PlatesEnergy => plates_energy(&p, args.tol),
                _ => {
                    let alpha = args
                        .alpha
                        .ok_or_else(|| CliError::Usage("--alpha is required for particle-potential".into()))?;
                    particle(&p, alpha, args.tol)
                }
            }
        }
    }
}

fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

/// Evaluates every point and returns the header and the rows in sweep order.
/// Failed points keep their row with the error in the `status` column.
pub fn run(args: &SweepArgs) -> Result<(Vec<String>, Vec<Record>), CliError> {
    let spec = SweepSpec::new(args.param, args.lo, args.hi, args.count, args.spacing)?;
    check_compatible(args.target, args.param)?;
    // argument errors are the same at every point; report them once
    if let Err(e @ CliError::Usage(_)) = evaluate(args, spec.lo) {
        return Err(e);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count()?)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))?;
    let points = spec.points();
    let results: Vec<Result<Record, CliError>> = pool.install(|| points.par_iter().map(|&x| evaluate(args, x)).collect());

    let name = param_name(args.param);
    let mut header = vec!["index".to_string(), name.to_string(), "status".to_string()];
    if let Some(Ok(first)) = results.iter().find(|r| r.is_ok()) {
        header.extend(first.keys().filter(|k| *k != name).map(str::to_string));
    }
    let rows = points
        .iter()
        .zip(results)
        .enumerate()
        .map(|(i, (&x, r))| {
            let base = Record::new().int("index", i as u64).num(name, x);
            match r {
                Ok(rec) => base.text("status", "ok").merge(&rec),
                Err(e) => base.text("status", format!("error: {e}")),
            }
        })
        .collect();
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let s = SweepSpec::new(SweepParam::KappaEps, 0.01, 100.0, 5, Spacing::Log).unwrap();
        let p = s.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 0.01);
        assert_eq!(p[4], 100.0);
        assert!((p[2] - 1.0).abs() < 1e-12);
        let s = SweepSpec::new(SweepParam::GapA, 1.0, 2.0, 2, Spacing::Linear).unwrap();
        assert_eq!(s.points(), vec![1.0, 2.0]);
    }

    #[test]
    fn invalid_specs() {
        assert!(SweepSpec::new(SweepParam::GapA, 2.0, 1.0, 3, Spacing::Linear).is_err());
        assert!(SweepSpec::new(SweepParam::GapA, 1.0, 2.0, 1, Spacing::Linear).is_err());
        assert!(SweepSpec::new(SweepParam::GapA, 0.0, 2.0, 3, Spacing::Log).is_err());
        assert!(check_compatible(Target::SpheresEnergy, SweepParam::GapA).is_err());
        assert!(check_compatible(Target::PlatesForce, SweepParam::RadiusRatio).is_err());
    }
}
