//! Parallel half-spaces and the polarizable particle in front of one
//! half-space.
//!
//! Geometry: medium for `z < 0` and `z > a`, vacuum in `0 < z < a`. A
//! transverse mode `q` sees the medium through `q_kappa = sqrt(q^2 + kappa_eps^2)`.
//! The reflection factor
//!
//! ```text
//! A(q) = ((eps q_kappa - q) / (eps q_kappa + q))^2
//! ```
//!
//! controls everything: the force per area is
//! `beta f = -(1/2pi) int A e^{-2qa} / (1 - A e^{-2qa}) q^2 dq` and the free
//! energy per area `beta F = (1/4pi) int q ln(1 - A e^{-2qa}) dq`.
//!
//! Factors such as `exp((q_kappa - q) a)` overflow for strong screening, so
//! the amplitude `D` is returned as an [`ExpScaled`] and combined with its
//! decaying partner analytically.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};

use crate::error::{finite, non_negative, positive, Error, Result};
use crate::medium::{Medium, TransverseMode};
use crate::quadrature::{
    integrate_semi_infinite, sum_algebraic, sum_geometric_like, QuadratureResult, SeriesResult,
};
use crate::scaled::ExpScaled;

/// `A = ((eps q_kappa - q)/(eps q_kappa + q))^2`, in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionFactor {
    pub a: f64,
    /// `1 - A`, computed without cancellation.
    pub one_minus_a: f64,
}

/// `q_kappa - q = kappa_eps^2 / (q_kappa + q)`, free of cancellation.
fn screening_excess(medium: &Medium, mode: &TransverseMode) -> f64 {
    let k = medium.kappa_eps();
    if k == 0.0 {
        0.0
    } else {
        k * k / (mode.q_kappa + mode.q)
    }
}

fn reflection_parts(medium: &Medium, mode: &TransverseMode) -> ReflectionFactor {
    let eq = medium.epsilon() * mode.q_kappa;
    let sum = eq + mode.q;
    let r = (eq - mode.q) / sum;
    // 1 - r^2 = 4 eps q q_kappa / (eps q_kappa + q)^2
    let one_minus_a = 4.0 * eq * mode.q / (sum * sum);
    ReflectionFactor {
        a: r * r,
        one_minus_a,
    }
}

pub fn reflection_a(medium: &Medium, q: f64) -> Result<ReflectionFactor> {
    positive("q", q)?;
    Ok(reflection_parts(medium, &TransverseMode::unchecked(medium, q)))
}

/// `(eps q_kappa - q)/(eps q_kappa + q)`, the single-interface amplitude.
fn reflection_amplitude(medium: &Medium, mode: &TransverseMode) -> f64 {
    let eq = medium.epsilon() * mode.q_kappa;
    (eq - mode.q) / (eq + mode.q)
}

/// `lambda = A e^{-2qa}` and `1 - lambda`, both accurate.
fn round_trip(refl: &ReflectionFactor, q: f64, gap_a: f64) -> (f64, f64) {
    let damp = (-2.0 * q * gap_a).exp();
    let lambda = refl.a * damp;
    let one_minus = refl.one_minus_a + refl.a * -(-2.0 * q * gap_a).exp_m1();
    (lambda, one_minus)
}

/// The transmitted amplitude of the two-plate potential,
/// `D = 4q e^{(q_kappa - q)a} / ((eps q_kappa + q)^2 (1 - A e^{-2qa}))`,
/// with the exponential kept in `log_scale`.
pub fn coefficient_d_plates(medium: &Medium, q: f64, gap_a: f64) -> Result<ExpScaled> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    let mode = TransverseMode::unchecked(medium, q);
    Ok(d_plates(medium, &mode, gap_a))
}

fn d_plates(medium: &Medium, mode: &TransverseMode, gap_a: f64) -> ExpScaled {
    let refl = reflection_parts(medium, mode);
    let (_, one_minus) = round_trip(&refl, mode.q, gap_a);
    let sum = medium.epsilon() * mode.q_kappa + mode.q;
    ExpScaled::new(
        4.0 * mode.q / (sum * sum * one_minus),
        screening_excess(medium, mode) * gap_a,
    )
}

/// Amplitudes of the piecewise transverse potential for a source at `z0 < 0`:
///
/// ```text
/// Phi(z) = 2 pi e^{q_kappa z0} * { e^{-q_kappa z}/(eps q_kappa) + B e^{q_kappa z},  z0 < z < 0
///                                 { C e^{-qz} + C1 e^{qz},                         0 < z < a
///                                 { D e^{-q_kappa z},                              a < z
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarCoefficients {
    pub b: f64,
    pub c: f64,
    pub c1: f64,
    pub d: ExpScaled,
    medium: Medium,
    mode: TransverseMode,
    gap_a: f64,
    z0: f64,
}

impl PlanarCoefficients {
    /// Relative residuals of the four continuity conditions (potential and
    /// `eps dPhi/dz` at `z = 0` and `z = a`).
    pub fn residuals(&self) -> [f64; 4] {
        let eps = self.medium.epsilon();
        let (q, qk, a) = (self.mode.q, self.mode.q_kappa, self.gap_a);
        let damp = (-q * a).exp();
        // e^{qa} C1 and e^{-q_kappa a} D
        let c1s = self.c1 * (q * a).exp();
        let c1s = if c1s.is_finite() { c1s } else { 0.0 };
        let ds = self.d.value_times_exp(-qk * a);
        let rel = |terms: &[f64]| {
            let sum: f64 = terms.iter().sum();
            let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            if scale == 0.0 {
                0.0
            } else {
                (sum / scale).abs()
            }
        };
        [
            rel(&[1.0 / (eps * qk), self.b, -self.c, -self.c1]),
            rel(&[-1.0, eps * qk * self.b, q * self.c, -q * self.c1]),
            rel(&[self.c * damp, c1s, -ds]),
            rel(&[-q * self.c * damp, q * c1s, eps * qk * ds]),
        ]
    }

    /// The transverse potential at `z > z0`. The region `z < z0` is not
    /// represented.
    pub fn potential(&self, z: f64) -> Result<f64> {
        finite("z", z)?;
        if z <= self.z0 {
            return Err(Error::Domain(format!(
                "potential is only represented for z > z0 = {}",
                self.z0
            )));
        }
        let eps = self.medium.epsilon();
        let (q, qk, a) = (self.mode.q, self.mode.q_kappa, self.gap_a);
        let pre = 2.0 * PI;
        let v = if z < 0.0 {
            pre * ((-qk * (z - self.z0)).exp() / (eps * qk) + self.b * (qk * (z + self.z0)).exp())
        } else if z <= a {
            let c1s = self.c1 * (q * a).exp();
            let c1s = if c1s.is_finite() { c1s } else { 0.0 };
            pre * (qk * self.z0).exp() * (self.c * (-q * z).exp() + c1s * (q * (z - a)).exp())
        } else {
            pre * self.d.value_times_exp(qk * (self.z0 - z))
        };
        Ok(v)
    }
}

/// Solves the 4x4 continuity system for `(B, C, C1, D)` directly, as an
/// independent check on the closed forms.
pub fn solve_planar_coefficients(medium: &Medium, q: f64, gap_a: f64, z0: f64) -> Result<PlanarCoefficients> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    finite("z0", z0)?;
    if z0 >= 0.0 {
        return Err(Error::InvalidParameter {
            name: "z0",
            value: z0,
            reason: "source must lie inside the left medium (z0 < 0)",
        });
    }
    let mode = TransverseMode::unchecked(medium, q);
    let eq = medium.epsilon() * mode.q_kappa;
    let damp = (-q * gap_a).exp();
    // unknowns: B, C, C1 e^{qa}, D e^{-q_kappa a}
    #[rustfmt::skip]
    let m = Matrix4::new(
        1.0, -1.0,      -damp,     0.0,
        eq,   q,        -q * damp, 0.0,
        0.0,  damp,      1.0,     -1.0,
        0.0, -q * damp,  q,        eq,
    );
    let rhs = Vector4::new(-1.0 / eq, 1.0, 0.0, 0.0);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or(Error::Singular("planar continuity system"))?;
    Ok(PlanarCoefficients {
        b: x[0],
        c: x[1],
        c1: x[2] * damp,
        d: if q * gap_a < 700.0 {
            // same exponent split as the closed form
            ExpScaled::new(x[3] * (q * gap_a).exp(), screening_excess(medium, &mode) * gap_a)
        } else {
            ExpScaled::new(x[3], mode.q_kappa * gap_a)
        },
        medium: *medium,
        mode,
        gap_a,
        z0,
    })
}

/// `h / (beta q_c^2) = -2 pi D e^{-q_kappa (z - z0)}` for `z0 < 0`, `z > a`.
pub fn correlation_hat(medium: &Medium, q: f64, z: f64, z0: f64, gap_a: f64) -> Result<f64> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    finite("z", z)?;
    finite("z0", z0)?;
    if z0 >= 0.0 || z <= gap_a {
        return Err(Error::Domain(
            "correlation needs z0 < 0 and z > gap_a".to_string(),
        ));
    }
    let mode = TransverseMode::unchecked(medium, q);
    let d = d_plates(medium, &mode, gap_a);
    Ok(-2.0 * PI * d.value_times_exp(-mode.q_kappa * (z - z0)))
}

/// Force per area from the free-charge correlations alone (no dipole
/// contribution): `beta f = -(kappa^4/8pi) int D e^{-(q_kappa+q)a}/(q_kappa+q)^2 q dq`.
///
/// Coincides with [`force_per_area`] for `eps = 1`; weaker otherwise.
pub fn force_ionic_raw(medium: &Medium, gap_a: f64, tol: f64) -> Result<QuadratureResult> {
    positive("gap_a", gap_a)?;
    let kappa_sq = medium.kappa_sq();
    if kappa_sq == 0.0 {
        return Ok(exact_zero());
    }
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        // D e^{-(q_kappa + q) a} = mantissa * e^{-2qa}
        let d = d_plates(medium, &mode, gap_a);
        let s = mode.q_kappa + q;
        d.mantissa * (-2.0 * q * gap_a).exp() / (s * s) * q
    };
    let r = integrate_semi_infinite(integrand, 2.0 * gap_a, tol)?.require_converged()?;
    Ok(r.scaled(-kappa_sq * kappa_sq / (8.0 * PI)))
}

/// Force per area with both evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateForce {
    /// `beta f` from adaptive quadrature (1/length^3); negative is attractive.
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    /// `beta f` from the multiple-reflection series `sum_n int A^n q^2 e^{-2nqa} dq`.
    pub series: SeriesResult,
}

fn exact_zero() -> QuadratureResult {
    QuadratureResult {
        value: 0.0,
        abs_error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    }
}

fn force_quadrature(medium: &Medium, gap_a: f64, tol: f64, a_scale: f64) -> Result<QuadratureResult> {
    if medium.is_vacuum() {
        return Ok(exact_zero());
    }
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        let mut refl = reflection_parts(medium, &mode);
        if a_scale != 1.0 {
            refl.a *= a_scale;
            refl.one_minus_a = 1.0 - refl.a;
        }
        let (lambda, one_minus) = round_trip(&refl, q, gap_a);
        lambda / one_minus * q * q
    };
    let r = integrate_semi_infinite(integrand, 2.0 * gap_a, tol)?.require_converged()?;
    Ok(r.scaled(-1.0 / (2.0 * PI)))
}

/// `beta f = -(1/2pi) int_0^inf A e^{-2qa}/(1 - A e^{-2qa}) q^2 dq` by
/// quadrature only.
pub fn force_per_area_quadrature(medium: &Medium, gap_a: f64, tol: f64) -> Result<QuadratureResult> {
    positive("gap_a", gap_a)?;
    force_quadrature(medium, gap_a, tol, 1.0)
}

/// Same as [`force_per_area_quadrature`] with `A` multiplied by `a_scale`.
/// Exists so validation can demonstrate that its checks detect a corrupted
/// reflection factor.
#[doc(hidden)]
pub fn force_per_area_with_reflection_scale(
    medium: &Medium,
    gap_a: f64,
    tol: f64,
    a_scale: f64,
) -> Result<QuadratureResult> {
    positive("gap_a", gap_a)?;
    positive("a_scale", a_scale)?;
    force_quadrature(medium, gap_a, tol, a_scale)
}

/// `n`-th reflection term `int_0^inf A(q)^n q^2 e^{-2nqa} dq` for real `n >= 1`.
fn reflection_series_term(medium: &Medium, gap_a: f64, n: f64, tol: f64) -> f64 {
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        let r = reflection_amplitude(medium, &mode);
        if r <= 0.0 {
            return 0.0;
        }
        // A^n e^{-2nqa} = exp(n (2 ln r - 2qa))
        (n * (2.0 * r.ln() - 2.0 * q * gap_a)).exp() * q * q
    };
    match integrate_semi_infinite(integrand, 2.0 * n * gap_a, tol) {
        Ok(r) if r.converged => r.value,
        _ => f64::NAN,
    }
}

/// Multiple-reflection series for the force. For unscreened media `A` is a
/// constant below one and the series is geometric; with screening
/// `A(0) = 1` and the terms fall off like `n^-3`.
pub fn force_per_area_series(medium: &Medium, gap_a: f64, tol: f64) -> Result<SeriesResult> {
    positive("gap_a", gap_a)?;
    if medium.is_vacuum() {
        return Ok(SeriesResult {
            value: 0.0,
            terms_used: 0,
            tail_bound: 0.0,
        });
    }
    let term_tol = (0.1 * tol).max(1e-13);
    let prefactor = -1.0 / (2.0 * PI);
    let mut r = if medium.kappa_eps() == 0.0 {
        let eps = medium.epsilon();
        let a = ((eps - 1.0) / (eps + 1.0)).powi(2);
        sum_geometric_like(
            |n| reflection_series_term(medium, gap_a, n as f64, term_tol),
            a,
            tol,
        )?
    } else {
        sum_algebraic(|x| reflection_series_term(medium, gap_a, x, term_tol), tol)?
    };
    if !r.value.is_finite() {
        return Err(Error::SeriesNonConvergence {
            value: r.value,
            terms: r.terms_used,
        });
    }
    r.value *= prefactor;
    r.tail_bound *= prefactor.abs();
    Ok(r)
}

/// Force per area between the half-spaces, `beta f` (1/length^3).
/// Quadrature is the returned value; the reflection series rides along as a
/// diagnostic.
pub fn force_per_area(medium: &Medium, gap_a: f64, tol: f64) -> Result<PlateForce> {
    let q = force_per_area_quadrature(medium, gap_a, tol)?;
    let series = force_per_area_series(medium, gap_a, tol)?;
    Ok(PlateForce {
        value: q.value,
        abs_error_estimate: q.abs_error_estimate,
        evaluations: q.evaluations,
        series,
    })
}

/// Free energy per area, `beta F = (1/4pi) int_0^inf q ln(1 - A e^{-2qa}) dq`
/// (1/length^2).
pub fn free_energy_per_area(medium: &Medium, gap_a: f64, tol: f64) -> Result<QuadratureResult> {
    positive("gap_a", gap_a)?;
    if medium.is_vacuum() {
        return Ok(exact_zero());
    }
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        let refl = reflection_parts(medium, &mode);
        let (lambda, one_minus) = round_trip(&refl, q, gap_a);
        let log = if lambda < 0.5 {
            (-lambda).ln_1p()
        } else {
            one_minus.ln()
        };
        q * log
    };
    let r = integrate_semi_infinite(integrand, 2.0 * gap_a, tol)?.require_converged()?;
    Ok(r.scaled(1.0 / (4.0 * PI)))
}

/// Transmitted amplitude for a unit source at the surface of a vacuum
/// layer in front of one half-space, `D = 2 e^{(q_kappa - q)a}/(eps q_kappa + q)`.
pub fn coefficient_d_halfspace(medium: &Medium, q: f64, gap_a: f64) -> Result<ExpScaled> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    let mode = TransverseMode::unchecked(medium, q);
    Ok(d_halfspace(medium, &mode, gap_a))
}

fn d_halfspace(medium: &Medium, mode: &TransverseMode, gap_a: f64) -> ExpScaled {
    ExpScaled::new(
        2.0 / (medium.epsilon() * mode.q_kappa + mode.q),
        screening_excess(medium, mode) * gap_a,
    )
}

/// Amplitudes for the source layer at `z = 0` in front of a half-space at
/// `z > a`: `Phi = 2pi (e^{-qz}/q + B e^{qz})` in the gap, `2pi D e^{-q_kappa z}` beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfspaceCoefficients {
    pub b: f64,
    pub d: ExpScaled,
}

/// 2x2 solve of the two continuity conditions at `z = a`.
pub fn solve_halfspace_coefficients(medium: &Medium, q: f64, gap_a: f64) -> Result<HalfspaceCoefficients> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    let mode = TransverseMode::unchecked(medium, q);
    let eq = medium.epsilon() * mode.q_kappa;
    // unknowns X = B e^{2qa}, Y = D e^{-(q_kappa - q) a}:
    //   X - Y = -1/q,  q X + eps q_kappa Y = 1
    let det = eq + q;
    if det == 0.0 {
        return Err(Error::Singular("half-space continuity system"));
    }
    let rhs1 = -1.0 / q;
    // eliminate X from the second row
    let y = (1.0 - q * rhs1) / det;
    let x = rhs1 + y;
    Ok(HalfspaceCoefficients {
        b: x * (-2.0 * q * gap_a).exp(),
        d: ExpScaled::new(y, screening_excess(medium, &mode) * gap_a),
    })
}

/// Interaction potential of a particle with polarizability `alpha`
/// (volume) at distance `gap_a` from the half-space:
/// `beta V = -alpha int_0^inf (eps q_kappa - q)/(eps q_kappa + q) e^{-2qa} q^2 dq`.
pub fn particle_potential(medium: &Medium, alpha: f64, gap_a: f64, tol: f64) -> Result<QuadratureResult> {
    non_negative("alpha", alpha)?;
    positive("gap_a", gap_a)?;
    if alpha == 0.0 || medium.is_vacuum() {
        return Ok(exact_zero());
    }
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        reflection_amplitude(medium, &mode) * (-2.0 * q * gap_a).exp() * q * q
    };
    let r = integrate_semi_infinite(integrand, 2.0 * gap_a, tol)?.require_converged()?;
    Ok(r.scaled(-alpha))
}

/// Force on one particle, `beta f_1` (1/length), assembled from the
/// half-space amplitude `D` and the effective screening parameters of the
/// half-space, `(eps q_kappa - q)(q_kappa + q)`, and of a dilute particle
/// layer, `8 pi alpha rho_1 q^2`. Equals `-d(beta V)/da`.
pub fn particle_force(medium: &Medium, alpha: f64, gap_a: f64, tol: f64) -> Result<QuadratureResult> {
    non_negative("alpha", alpha)?;
    positive("gap_a", gap_a)?;
    if alpha == 0.0 || medium.is_vacuum() {
        return Ok(exact_zero());
    }
    let eps = medium.epsilon();
    let integrand = |q: f64| {
        if q <= 0.0 {
            return 0.0;
        }
        let mode = TransverseMode::unchecked(medium, q);
        let s = mode.q_kappa + q;
        let kappa2_sq = (eps * mode.q_kappa - q) * s;
        // per particle: kappa_1^2 / rho_1 = 8 pi alpha q^2
        let kappa1_sq = 8.0 * PI * q * q;
        let d = d_halfspace(medium, &mode, gap_a);
        // D e^{-(q_kappa + q) a} = mantissa * e^{-2qa}
        kappa1_sq * kappa2_sq * d.mantissa * (-2.0 * q * gap_a).exp() / s * q
    };
    let r = integrate_semi_infinite(integrand, 2.0 * gap_a, tol)?.require_converged()?;
    Ok(r.scaled(-alpha / (8.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflection_a(&Medium::vacuum(), 0.7).unwrap().a, 0.0);
        let a = reflection_a(&Medium::new(2.0, 0.0).unwrap(), 3.0).unwrap();
        assert!(rel(a.a, 1.0 / 9.0) < 1e-15);
        assert!(rel(a.one_minus_a, 8.0 / 9.0) < 1e-15);
        let strong = reflection_a(&Medium::new(1.0, 1e8).unwrap(), 1.0).unwrap();
        assert!(strong.a > 0.9999999 && strong.a < 1.0);
        assert!(reflection_a(&Medium::vacuum(), 0.0).is_err());
    }

    #[test]
    fn d_plates_vacuum_is_inverse_q() {
        for &q in &[0.1, 1.0, 7.0] {
            let d = coefficient_d_plates(&Medium::vacuum(), q, 1.3).unwrap();
            assert!(rel(d.value(), 1.0 / q) < 1e-15);
        }
    }

    #[test]
    fn d_plates_matches_linear_solve() {
        let m = Medium::new(2.0, 1.0).unwrap();
        let closed = coefficient_d_plates(&m, 1.0, 1.0).unwrap();
        let solved = solve_planar_coefficients(&m, 1.0, 1.0, -0.5).unwrap();
        assert!((solved.d.ratio(&closed) - 1.0).abs() < 1e-12);
        for r in solved.residuals() {
            assert!(r < 1e-12);
        }
    }

    #[test]
    fn vacuum_coefficients_reduce_to_free_space() {
        let s = solve_planar_coefficients(&Medium::vacuum(), 0.8, 1.0, -0.3).unwrap();
        assert!(s.b.abs() < 1e-15 && s.c1.abs() < 1e-15);
        assert!(rel(s.c, 1.0 / 0.8) < 1e-14);
        for &z in &[-0.2, 0.4, 2.5] {
            let free = 2.0 * PI / 0.8 * (-0.8 * (z - (-0.3f64))).exp();
            assert!(rel(s.potential(z).unwrap(), free) < 1e-13);
        }
        assert!(s.potential(-0.5).is_err());
        assert!(solve_planar_coefficients(&Medium::vacuum(), 0.8, 1.0, 0.1).is_err());
    }

    #[test]
    fn strong_screening_does_not_overflow() {
        let m = Medium::new(3.0, 1e4).unwrap();
        let d = coefficient_d_plates(&m, 0.5, 1.0).unwrap();
        assert!(d.value().is_infinite());
        let s = solve_planar_coefficients(&m, 0.5, 1.0, -0.01).unwrap();
        assert!((s.d.ratio(&d) - 1.0).abs() < 1e-12);
        let h = correlation_hat(&m, 0.5, 1.001, -0.001, 1.0).unwrap();
        assert!(h.is_finite() && h < 0.0);
    }

    #[test]
    fn correlation_sign_and_decay() {
        let m = Medium::new(2.0, 1.5).unwrap();
        let qk = m.q_kappa(0.7);
        let h1 = correlation_hat(&m, 0.7, 1.5, -0.2, 1.0).unwrap();
        let h2 = correlation_hat(&m, 0.7, 2.1, -0.2, 1.0).unwrap();
        assert!(h1 < 0.0 && h2 < 0.0);
        assert!(rel(h2 / h1, (-qk * 0.6f64).exp()) < 1e-12);
        assert!(correlation_hat(&m, 0.7, 0.5, -0.2, 1.0).is_err());
        assert!(correlation_hat(&m, 0.7, 1.5, 0.2, 1.0).is_err());
    }

    #[test]
    fn halfspace_amplitudes() {
        let d = coefficient_d_halfspace(&Medium::vacuum(), 2.0, 1.0).unwrap();
        assert!(rel(d.value(), 0.5) < 1e-15);
        for &(eps, kappa, q) in &[(2.0, 0.0, 1.0), (3.0, 2.0, 0.4), (1.0, 50.0, 3.0)] {
            let m = Medium::new(eps, kappa).unwrap();
            let closed = coefficient_d_halfspace(&m, q, 1.2).unwrap();
            let solved = solve_halfspace_coefficients(&m, q, 1.2).unwrap();
            assert!((solved.d.ratio(&closed) - 1.0).abs() < 1e-12);
        }
        let conductor = coefficient_d_halfspace(&Medium::new(1e12, 0.0).unwrap(), 1.0, 1.0).unwrap();
        assert!(conductor.value() < 1e-11);
    }

    #[test]
    fn trivial_zeros() {
        let v = Medium::vacuum();
        assert_eq!(force_per_area(&v, 1.0, 1e-10).unwrap().value, 0.0);
        assert_eq!(free_energy_per_area(&v, 1.0, 1e-10).unwrap().value, 0.0);
        assert_eq!(force_ionic_raw(&Medium::new(3.0, 0.0).unwrap(), 1.0, 1e-10).unwrap().value, 0.0);
        let m = Medium::new(2.0, 1.0).unwrap();
        assert_eq!(particle_potential(&m, 0.0, 1.0, 1e-10).unwrap().value, 0.0);
        assert_eq!(particle_force(&m, 0.0, 1.0, 1e-10).unwrap().value, 0.0);
        assert!(force_per_area(&m, 0.0, 1e-10).is_err());
        assert!(particle_potential(&m, -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn static_particle_potential() {
        let m = Medium::new(3.0, 0.0).unwrap();
        let v = particle_potential(&m, 1.0, 1.0, 1e-12).unwrap();
        assert!(rel(v.value, -0.125) < 1e-10);
    }
}
