//! Adaptive Gauss-Kronrod quadrature on semi-infinite and finite intervals,
//! and summation of slowly or geometrically convergent series.
//!
//! The integrators follow the QUADPACK error model (21-point Kronrod rule
//! embedded with a 10-point Gauss rule, globally adaptive bisection of the
//! panel with the largest error). Panels are processed sequentially so the
//! result is bit-for-bit reproducible.

use crate::error::{tolerance, Error, Result};

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// `true` iff `abs_error_estimate <= tol * |value|` (or the integrand
    /// vanished identically).
    pub converged: bool,
}

impl QuadratureResult {
    /// Converts a non-converged result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNonConvergence {
                value: self.value,
                abs_error: self.abs_error_estimate,
            })
        }
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_error_estimate: self.abs_error_estimate * factor.abs(),
            ..self
        }
    }
}

/// Outcome of a series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: u64,
    /// Bound (or, for [`sum_algebraic`], estimate) of the neglected remainder.
    pub tail_bound: f64,
}

const MAX_SUBDIVISIONS: usize = 4000;
/// The cutoff is placed where the integrand has dropped below this fraction
/// of the largest value seen so far.
const CUTOFF_FRACTION: f64 = 1e-16;
const MIN_CUTOFF: f64 = 4.0;
const MAX_CUTOFF: f64 = 1048576.0;

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss
// weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208887526707,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    max_abs: f64,
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut max_abs = fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
        max_abs = max_abs.max(f1.abs()).max(f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
        max_abs = max_abs.max(f1.abs()).max(f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let width = half.abs();
    let value = res_k * half;
    res_abs *= width;
    res_asc *= width;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Panel {
        lo,
        hi,
        value,
        error,
        max_abs,
    }
}

/// Bisects the worst panel until the summed error meets the target.
/// `extra_error` is a fixed contribution (e.g. a truncated tail).
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    mut panels: Vec<Panel>,
    tol: f64,
    extra_error: f64,
) -> QuadratureResult {
    let mut evaluations = 21 * panels.len();
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum::<f64>() + extra_error;
        let done = error <= tol * value.abs() || error == 0.0;
        if done || subdivisions >= MAX_SUBDIVISIONS || !value.is_finite() {
            return QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
                converged: done && value.is_finite(),
            };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // panel cannot be split further in floating point
            return QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
                converged: false,
            };
        }
        panels.push(kronrod21(f, p.lo, mid));
        panels.push(kronrod21(f, mid, p.hi));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Integrates `f(q)` over `q` in `(0, inf)`, where `f` decays roughly like
/// `exp(-q * decay_scale)`.
///
/// Works on `u = q * decay_scale`. The upper cutoff is the first power of two
/// (at least 4) where `|f|` has dropped below `1e-16` of the largest value
/// seen; the integrand at the cutoff is added to the error estimate as a
/// tail bound.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    decay_scale: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    tolerance(tol)?;
    crate::error::positive("decay_scale", decay_scale)?;
    let g = |u: f64| f(u / decay_scale) / decay_scale;

    let mut panels = vec![kronrod21(&g, 0.0, 0.5), kronrod21(&g, 0.5, 1.0)];
    let mut running_max = panels.iter().fold(0.0f64, |m, p| m.max(p.max_abs));
    let mut edge = 1.0;
    let mut tail = g(edge).abs();
    let mut evaluations_extra = 1;
    loop {
        if edge >= MIN_CUTOFF && tail <= CUTOFF_FRACTION * running_max {
            break;
        }
        if edge >= MAX_CUTOFF {
            let mut r = refine(&g, panels, tol, tail);
            r.evaluations += evaluations_extra;
            r.converged = false;
            return Ok(r);
        }
        let p = kronrod21(&g, edge, 2.0 * edge);
        running_max = running_max.max(p.max_abs);
        panels.push(p);
        edge *= 2.0;
        tail = g(edge).abs();
        evaluations_extra += 1;
    }
    let mut r = refine(&g, panels, tol, tail);
    r.evaluations += evaluations_extra;
    Ok(r)
}

/// Integrates `f` over the finite interval `[lo, hi]`. The endpoints are
/// never evaluated.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    tolerance(tol)?;
    crate::error::finite("lo", lo)?;
    crate::error::finite("hi", hi)?;
    if lo == hi {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let panels = vec![kronrod21(&f, lo, hi)];
    Ok(refine(&f, panels, tol, 0.0))
}

const MAX_SERIES_TERMS: u64 = 50_000_000;
/// Ratio violations are tolerated over the first terms ("eventually").
const RATIO_BURN_IN: u64 = 16;
const MAX_CONSECUTIVE_VIOLATIONS: u32 = 64;

/// Sums `term(1) + term(2) + ...` for a series whose terms eventually obey
/// `|term(n+1)| <= ratio_bound * |term(n)|`.
///
/// Stops after term `N` once `|term(N)| * r / (1 - r) < tol * |partial|`,
/// provided the ratio bound held at that step. For `ratio_bound` close to 1
/// (power-law tails) use [`sum_algebraic`].
pub fn sum_geometric_like<F: Fn(u64) -> f64>(term: F, ratio_bound: f64, tol: f64) -> Result<SeriesResult> {
    tolerance(tol)?;
    if !(0.0..1.0).contains(&ratio_bound) {
        return Err(Error::InvalidParameter {
            name: "ratio_bound",
            value: ratio_bound,
            reason: "must lie in [0, 1)",
        });
    }
    let factor = ratio_bound / (1.0 - ratio_bound);
    let mut partial = 0.0;
    let mut previous: Option<f64> = None;
    let mut violations = 0u32;
    let mut n = 1u64;
    loop {
        let t = term(n);
        if !t.is_finite() {
            return Err(Error::SeriesNonConvergence {
                value: partial,
                terms: n,
            });
        }
        partial += t;
        let ratio_ok = match previous {
            Some(p) => t.abs() <= ratio_bound * p.abs() * (1.0 + 1e-12) || t == 0.0,
            None => true,
        };
        if ratio_ok {
            violations = 0;
        } else if n > RATIO_BURN_IN {
            violations += 1;
            if violations > MAX_CONSECUTIVE_VIOLATIONS {
                return Err(Error::RatioBoundViolated { ratio_bound, n });
            }
        }
        let tail = t.abs() * factor;
        if ratio_ok && previous.is_some() && (tail < tol * partial.abs() || tail == 0.0) {
            return Ok(SeriesResult {
                value: partial,
                terms_used: n,
                tail_bound: tail,
            });
        }
        if n >= MAX_SERIES_TERMS {
            return Err(Error::SeriesNonConvergence {
                value: partial,
                terms: n,
            });
        }
        previous = Some(t);
        n += 1;
    }
}

/// Sums `term(1) + term(2) + ...` for terms decaying like a power law,
/// using the Euler-Maclaurin comparison with the integral of `term`:
///
/// `S ~ sum_{n<N} term(n) + int_N^inf term + term(N)/2 - term'(N)/12`.
///
/// `term` must be smooth on `[1, inf)` and integrable at infinity. `N` is
/// doubled from 8 until two successive estimates agree to `tol`; the
/// difference is reported as `tail_bound`.
pub fn sum_algebraic<F: Fn(f64) -> f64>(term: F, tol: f64) -> Result<SeriesResult> {
    tolerance(tol)?;
    let mut partial = 0.0; // sum of term(k) for k < n
    let mut next_k = 1u64;
    let mut n = 8u64;
    let mut previous: Option<f64> = None;
    while n <= 1 << 20 {
        while next_k < n {
            partial += term(next_k as f64);
            next_k += 1;
        }
        let estimate = partial + euler_maclaurin_tail(&term, n as f64, tol)?;
        if let Some(p) = previous {
            let diff = (estimate - p).abs();
            if diff <= tol * estimate.abs() || diff == 0.0 {
                return Ok(SeriesResult {
                    value: estimate,
                    terms_used: n,
                    tail_bound: diff,
                });
            }
        }
        previous = Some(estimate);
        n *= 2;
    }
    Err(Error::SeriesNonConvergence {
        value: previous.unwrap_or(partial),
        terms: n,
    })
}

fn euler_maclaurin_tail<F: Fn(f64) -> f64>(term: &F, n: f64, tol: f64) -> Result<f64> {
    // int_n^inf term(x) dx with x = n / s
    let integral = integrate_finite(|s: f64| term(n / s) * n / (s * s), 0.0, 1.0, (0.1 * tol).max(1e-13))?;
    if !integral.converged {
        return Err(Error::SeriesNonConvergence {
            value: integral.value,
            terms: n as u64,
        });
    }
    let h = 0.25;
    let derivative = (-term(n + 2.0 * h) + 8.0 * term(n + h) - 8.0 * term(n - h) + term(n - 2.0 * h)) / (12.0 * h);
    Ok(integral.value + 0.5 * term(n) - derivative / 12.0)
}

/// Riemann zeta function for real `s > 1`, summed with [`sum_algebraic`].
pub fn zeta(s: f64, tol: f64) -> Result<f64> {
    crate::error::finite("s", s)?;
    if s <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "zeta series needs s > 1",
        });
    }
    Ok(sum_algebraic(|x: f64| x.powf(-s), tol)?.value)
}

/// Polylogarithm `Li_s(z) = sum_n z^n / n^s` for real `|z| <= 1`, `s > 1`.
pub fn polylog(s: f64, z: f64, tol: f64) -> Result<f64> {
    crate::error::finite("z", z)?;
    if z.abs() > 1.0 {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "series representation needs |z| <= 1",
        });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return zeta(s, tol);
    }
    if z.abs() > 0.999 {
        // geometric ratio too close to one; compare against the integral
        let lz = z.abs().ln();
        let sign = z.signum();
        if sign > 0.0 {
            return Ok(sum_algebraic(|x: f64| (x * lz).exp() * x.powf(-s), tol)?.value);
        }
    }
    let r = sum_geometric_like(|n| z.powi(n as i32) / (n as f64).powf(s), z.abs(), tol)?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_integrals() {
        let r = integrate_semi_infinite(|q| q * q * (-2.0 * q).exp(), 2.0, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.25).abs() < 1e-14);
        let r = integrate_semi_infinite(|q| q * (-q).exp(), 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_integrand() {
        let r = integrate_semi_infinite(|_| 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn slowly_decaying_integrand_is_flagged() {
        let r = integrate_semi_infinite(|q| 1.0 / (1.0 + q * q), 1.0, 1e-10).unwrap();
        assert!(!r.converged);
        assert!(r.require_converged().is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(integrate_semi_infinite(|q| q, 0.0, 1e-10).is_err());
        assert!(integrate_semi_infinite(|q| q, 1.0, 0.0).is_err());
        assert!(sum_geometric_like(|n| 1.0 / n as f64, 1.0, 1e-10).is_err());
    }

    #[test]
    fn geometric_series() {
        let r = sum_geometric_like(|n| 0.5f64.powi(n as i32), 0.5, 1e-14).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!(r.tail_bound < 1e-14);
    }

    #[test]
    fn single_nonzero_term() {
        let r = sum_geometric_like(|n| if n == 1 { 3.5 } else { 0.0 }, 0.5, 1e-12).unwrap();
        assert_eq!(r.value, 3.5);
    }

    #[test]
    fn ratio_violation_detected() {
        // terms grow: 2^n
        let r = sum_geometric_like(|n| 2f64.powi(n as i32).min(1e300), 0.5, 1e-12);
        assert!(matches!(r, Err(Error::RatioBoundViolated { .. })));
    }

    #[test]
    fn zeta_three() {
        let z = zeta(3.0, 1e-12).unwrap();
        assert!((z - 1.2020569031595942).abs() < 1e-11, "{z}");
        let z2 = zeta(2.0, 1e-12).unwrap();
        let pi = std::f64::consts::PI;
        assert!((z2 - pi * pi / 6.0).abs() < 1e-10, "{z2}");
    }

    #[test]
    fn polylog_closed_forms() {
        // Li_1(z) = -ln(1 - z)
        let v = polylog(1.0 + 1e-15, 0.5, 1e-14).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-12);
        assert!((polylog(3.0, 1.0, 1e-12).unwrap() - 1.2020569031595942).abs() < 1e-11);
        assert_eq!(polylog(3.0, 0.0, 1e-12).unwrap(), 0.0);
        assert!(polylog(3.0, 1.5, 1e-12).is_err());
        // Li_2(1/2) = pi^2/12 - ln(2)^2/2
        let pi = std::f64::consts::PI;
        let expected = pi * pi / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((polylog(2.0, 0.5, 1e-15).unwrap() - expected).abs() < 1e-14);
        // near-one branch: Li_2(0.9995) vs direct summation
        let direct: f64 = (1..2_000_000).map(|n| 0.9995f64.powi(n) / (n as f64).powi(2)).sum();
        assert!((polylog(2.0, 0.9995, 1e-12).unwrap() - direct).abs() < 1e-10);
    }
}
