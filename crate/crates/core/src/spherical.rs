//! A dielectric ball of radius `a` inside a spherical cavity of radius `b`
//! cut into the same medium, vacuum in between.
//!
//! For multipole order `l` the radial potential is
//!
//! ```text
//! Phi_l(r) = e_eps + B s_eps      r < a
//!            C e + C1 s           a < r < b
//!            D e_eps              b < r
//! ```
//!
//! with `s, e = r^l, r^-(l+1)` in vacuum and `s_eps, e_eps = i_l(kappa r),
//! k_l(kappa r)` in the medium (power laws again when `kappa_eps = 0`).
//! Writing `D = D0 / (1 - lambda)` defines the eigenvalue
//!
//! ```text
//! lambda = (eps s_a s'_aeps - s'_a s_aeps)(eps e_b e'_beps - e'_b e_beps)
//!        / ((eps e_a s'_aeps - e'_a s_aeps)(eps e'_beps s_b - e_beps s'_b))
//! ```
//!
//! and the interaction free energy `beta F = 1/2 sum_{l>=1} (2l+1) ln(1 - lambda_l)`.
//! The monopole `l = 0` is not part of the sum.

use crate::dd::DoubleDouble as Dd;
use crate::error::{positive, tolerance, Error, Result};
use crate::medium::{Medium, SphericalSetup};
use crate::special_fn::{radial_basis, vacuum_basis, BasisValue, RadialBasis, L_MAX_SUPPORTED};

/// Relative cancellation in a bracket beyond which the result is flagged.
const CANCELLATION_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalEigenvalue {
    pub l: u32,
    pub lambda: f64,
    /// Set when one of the four brackets lost more than six digits to
    /// cancellation; `lambda` is then only accurate in absolute terms.
    pub precision_warning: bool,
}

/// Radial solutions at both interfaces for one order `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalBases {
    pub l: u32,
    pub epsilon: f64,
    pub radius_a: f64,
    pub radius_b: f64,
    pub vacuum_a: RadialBasis,
    pub medium_a: RadialBasis,
    pub vacuum_b: RadialBasis,
    pub medium_b: RadialBasis,
}

impl SphericalBases {
    pub fn new(setup: &SphericalSetup, l: u32) -> Result<Self> {
        check_order(l)?;
        let (a, b) = (setup.radius_a, setup.radius_b);
        Ok(Self {
            l,
            epsilon: setup.medium.epsilon(),
            radius_a: a,
            radius_b: b,
            vacuum_a: vacuum_basis(l, a)?,
            medium_a: radial_basis(&setup.medium, l, a)?,
            vacuum_b: vacuum_basis(l, b)?,
            medium_b: radial_basis(&setup.medium, l, b)?,
        })
    }

    /// Multiplies each of the four families `s_eps, e_eps, s, e` by its own
    /// constant.
    pub fn rescaled(&self, s_eps: f64, e_eps: f64, s: f64, e: f64) -> Self {
        let scale = |basis: &RadialBasis, cs: f64, ce: f64| RadialBasis {
            s: basis.s.scaled_by(cs),
            e: basis.e.scaled_by(ce),
        };
        Self {
            vacuum_a: scale(&self.vacuum_a, s, e),
            medium_a: scale(&self.medium_a, s_eps, e_eps),
            vacuum_b: scale(&self.vacuum_b, s, e),
            medium_b: scale(&self.medium_b, s_eps, e_eps),
            ..*self
        }
    }
}

fn check_order(l: u32) -> Result<()> {
    if l == 0 || l > L_MAX_SUPPORTED {
        return Err(Error::InvalidParameter {
            name: "l",
            value: l as f64,
            reason: "order must lie in 1..=L_MAX_SUPPORTED",
        });
    }
    Ok(())
}

/// `eps p q' - p' q` for a vacuum solution `p` and a medium solution `q`.
struct Bracket {
    mantissa: f64,
    vacuum_tag: f64,
    medium_tag: f64,
    cancelled: bool,
}

fn bracket(eps: f64, p: &BasisValue, q: &BasisValue) -> Bracket {
    let left = eps * p.value * q.deriv;
    let right = p.deriv * q.value;
    let mantissa = left - right;
    Bracket {
        mantissa,
        vacuum_tag: p.log_scale,
        medium_tag: q.log_scale,
        cancelled: mantissa.abs() < CANCELLATION_WARNING * (left.abs() + right.abs()),
    }
}

/// The closed-form eigenvalue evaluated from explicit bases. Any of the
/// four families may carry an arbitrary constant factor.
pub fn lambda_from_bases(bases: &SphericalBases) -> Result<SphericalEigenvalue> {
    let eps = bases.epsilon;
    let (va, ma, vb, mb) = (&bases.vacuum_a, &bases.medium_a, &bases.vacuum_b, &bases.medium_b);
    let num_a = bracket(eps, &va.s, &ma.s);
    let num_b = bracket(eps, &vb.e, &mb.e);
    let den_a = bracket(eps, &va.e, &ma.s);
    let den_b = bracket(eps, &vb.s, &mb.e);

    // the medium scales enter numerator and denominator identically
    let medium_net = (num_a.medium_tag + num_b.medium_tag) - (den_a.medium_tag + den_b.medium_tag);
    if medium_net != 0.0 {
        return Err(Error::PrecisionLoss(format!(
            "medium exponent tags failed to cancel: {medium_net:e}"
        )));
    }
    let vacuum_net = (num_a.vacuum_tag + num_b.vacuum_tag) - (den_a.vacuum_tag + den_b.vacuum_tag);

    let ratio_a = num_a.mantissa / den_a.mantissa;
    let ratio_b = num_b.mantissa / den_b.mantissa;
    let direct = ratio_a * ratio_b * vacuum_net.exp();
    let lambda = if direct.is_normal() || direct == 0.0 && (num_a.mantissa == 0.0 || num_b.mantissa == 0.0) {
        direct
    } else {
        let ln = ratio_a.abs().ln() + ratio_b.abs().ln() + vacuum_net;
        (ratio_a * ratio_b).signum() * ln.exp()
    };
    let precision_warning = [&num_a, &num_b, &den_a, &den_b].iter().any(|b| b.cancelled);
    check_lambda(bases.l, lambda, precision_warning)
}

fn check_lambda(l: u32, lambda: f64, precision_warning: bool) -> Result<SphericalEigenvalue> {
    if !lambda.is_finite() || lambda >= 1.0 {
        return Err(Error::Domain(format!("eigenvalue for l = {l} is {lambda}, outside [0, 1)")));
    }
    let lambda = if lambda < 0.0 {
        // only cancellation noise may push it below zero
        if !precision_warning {
            return Err(Error::Domain(format!("eigenvalue for l = {l} is negative: {lambda:e}")));
        }
        0.0
    } else {
        lambda
    };
    Ok(SphericalEigenvalue {
        l,
        lambda,
        precision_warning,
    })
}

/// Eigenvalue of order `l >= 1` from the closed-form ratio.
pub fn lambda_eps_l(setup: &SphericalSetup, l: u32) -> Result<SphericalEigenvalue> {
    check_order(l)?;
    if setup.medium.is_vacuum() {
        return Ok(SphericalEigenvalue {
            l,
            lambda: 0.0,
            precision_warning: false,
        });
    }
    lambda_from_bases(&SphericalBases::new(setup, l)?)
}

/// The unscreened eigenvalue
/// `(eps-1)^2 l(l+1) / ((eps l + l + 1)(eps (l+1) + l)) (a/b)^(2l+1)`.
pub fn lambda_static(epsilon: f64, l: u32, radius_a: f64, radius_b: f64) -> Result<f64> {
    Medium::new(epsilon, 0.0)?;
    check_order(l)?;
    let setup = SphericalSetup::new(Medium::vacuum(), radius_a, radius_b)?;
    let lf = l as f64;
    let em1 = epsilon - 1.0;
    let coeff = em1 * em1 * lf * (lf + 1.0) / ((epsilon * lf + lf + 1.0) * (epsilon * (lf + 1.0) + lf));
    Ok(coeff * setup.ratio().powi(2 * l as i32 + 1))
}

fn dd(v: f64) -> Dd {
    Dd::from(v)
}

/// The continuity conditions at `r = a` and `r = b` as a 4x4 linear system
/// for `(B, C, C1, D)`, together with the single-interface constants
/// `c1 = C` (outer interface removed) and `c2 = D / C` (inner ball removed).
///
/// Unknowns and constants are expressed in the exponent-stripped units of
/// the bases: the true `C, C1, D, c1, c2` differ from the stored ones by
/// fixed exponential factors that cancel in `lambda = 1 - c1 c2 / D`.
/// Derivative rows are multiplied by the interface radius.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySystem {
    pub matrix: [[f64; 4]; 4],
    pub rhs: [f64; 4],
    pub c1: f64,
    pub c2: f64,
    exact_matrix: [[Dd; 4]; 4],
    exact_rhs: [Dd; 4],
    exact_c1: Dd,
    exact_c2: Dd,
}

impl BoundarySystem {
    pub fn new(setup: &SphericalSetup, l: u32) -> Result<Self> {
        Self::from_bases(&SphericalBases::new(setup, l)?)
    }

    pub fn from_bases(bases: &SphericalBases) -> Result<Self> {
        let eps = dd(bases.epsilon);
        let (ra, rb) = (dd(bases.radius_a), dd(bases.radius_b));
        let (va, ma, vb, mb) = (&bases.vacuum_a, &bases.medium_a, &bases.vacuum_b, &bases.medium_b);
        // relative size of s_b once C1 is measured in the units of row 1
        let g = (va.e.log_scale - va.s.log_scale + vb.s.log_scale - vb.e.log_scale).exp();
        if !g.is_finite() || g == 0.0 {
            return Err(Error::PrecisionLoss(
                "power-law scales of the vacuum shell are out of range".to_string(),
            ));
        }
        let g = dd(g);
        let z = Dd::ZERO;
        let m = [
            [dd(ma.s.value), -dd(va.e.value), -dd(va.s.value), z],
            [
                ra * eps * dd(ma.s.deriv),
                -(ra * dd(va.e.deriv)),
                -(ra * dd(va.s.deriv)),
                z,
            ],
            [z, dd(vb.e.value), dd(vb.s.value) * g, -dd(mb.e.value)],
            [
                z,
                rb * dd(vb.e.deriv),
                rb * dd(vb.s.deriv) * g,
                -(rb * eps * dd(mb.e.deriv)),
            ],
        ];
        let rhs = [-dd(ma.e.value), -(ra * eps * dd(ma.e.deriv)), z, z];
        let c1 = eps * (dd(ma.e.value) * dd(ma.s.deriv) - dd(ma.e.deriv) * dd(ma.s.value))
            / (eps * dd(va.e.value) * dd(ma.s.deriv) - dd(va.e.deriv) * dd(ma.s.value));
        let c2 = (dd(vb.e.deriv) * dd(vb.s.value) - dd(vb.e.value) * dd(vb.s.deriv))
            / (eps * dd(mb.e.deriv) * dd(vb.s.value) - dd(mb.e.value) * dd(vb.s.deriv));
        if !c1.is_finite() || !c2.is_finite() {
            return Err(Error::Singular("single-interface constants"));
        }
        Ok(Self {
            matrix: m.map(|row| row.map(Dd::to_f64)),
            rhs: rhs.map(Dd::to_f64),
            c1: c1.to_f64(),
            c2: c2.to_f64(),
            exact_matrix: m,
            exact_rhs: rhs,
            exact_c1: c1,
            exact_c2: c2,
        })
    }

    /// `(B, C, C1, D)` in scaled units.
    pub fn solve(&self) -> Result<[f64; 4]> {
        Ok(solve4(self.exact_matrix, self.exact_rhs)?.map(Dd::to_f64))
    }

    /// `lambda = 1 - c1 c2 / D`, evaluated in extended precision so that
    /// eigenvalues far below the `f64` epsilon survive the subtraction.
    pub fn lambda(&self) -> Result<f64> {
        let x = solve4(self.exact_matrix, self.exact_rhs)?;
        let lambda = (Dd::ONE - self.exact_c1 * self.exact_c2 / x[3]).to_f64();
        if !lambda.is_finite() {
            return Err(Error::Singular("boundary system"));
        }
        Ok(lambda)
    }
}

/// Gaussian elimination with partial pivoting.
fn solve4(mut m: [[Dd; 4]; 4], mut r: [Dd; 4]) -> Result<[Dd; 4]> {
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m[pivot][col].to_f64() == 0.0 || !m[pivot][col].is_finite() {
            return Err(Error::Singular("boundary system"));
        }
        m.swap(col, pivot);
        r.swap(col, pivot);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] = m[row][k] - f * m[col][k];
            }
            r[row] = r[row] - f * r[col];
        }
    }
    let mut x = [Dd::ZERO; 4];
    for row in (0..4).rev() {
        let mut acc = r[row];
        for k in row + 1..4 {
            acc = acc - m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Eigenvalue of order `l` from the full boundary-value solve,
/// `lambda = 1 - D0 / D` with `D0 = c1 c2`.
pub fn lambda_via_d(setup: &SphericalSetup, l: u32) -> Result<f64> {
    BoundarySystem::new(setup, l)?.lambda()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereFreeEnergy {
    /// `beta F` (dimensionless); negative.
    pub value: f64,
    /// Highest order included.
    pub l_max: u32,
    /// Bound on the omitted orders.
    pub tail_bound: f64,
}

fn energy_term(setup: &SphericalSetup, l: u32) -> Result<f64> {
    let lambda = lambda_eps_l(setup, l)?.lambda;
    Ok((2 * l + 1) as f64 * (-lambda).ln_1p())
}

/// `beta F = 1/2 sum_{l=1}^{L} (2l+1) ln(1 - lambda_l)`.
///
/// Truncation: once the terms decay geometrically, the omitted orders are
/// bounded by `1/2 |(2L+3) ln(1 - lambda_{L+1})| / (1 - r)` with `r` the
/// larger of `(a/b)^2` and the last observed term ratio. `L` is the first
/// order where that bound is below `tol * |beta F|` and the observed ratio
/// is at most `(1 + (a/b)^2) / 2`.
pub fn sphere_free_energy(setup: &SphericalSetup, tol: f64) -> Result<SphereFreeEnergy> {
    tolerance(tol)?;
    if setup.medium.is_vacuum() {
        return Ok(SphereFreeEnergy {
            value: 0.0,
            l_max: 1,
            tail_bound: 0.0,
        });
    }
    let rho = setup.ratio() * setup.ratio();
    let settled_ratio = 0.5 * (1.0 + rho);
    let mut partial = 0.0;
    let mut current = energy_term(setup, 1)?;
    let mut l = 1u32;
    while l < L_MAX_SUPPORTED {
        partial += current;
        let next = energy_term(setup, l + 1)?;
        let observed = if current == 0.0 { 0.0 } else { (next / current).abs() };
        let settled = next == 0.0 || observed <= settled_ratio;
        let bound = 0.5 * next.abs() / (1.0 - observed.max(rho));
        if settled && (bound < tol * 0.5 * partial.abs() || bound == 0.0) {
            return Ok(SphereFreeEnergy {
                value: 0.5 * partial,
                l_max: l,
                tail_bound: bound,
            });
        }
        current = next;
        l += 1;
    }
    Err(Error::SeriesNonConvergence {
        value: 0.5 * partial,
        terms: l as u64,
    })
}

/// `1/2 sum_{l=1}^{l_max} (2l+1) ln(1 - lambda_l)` without truncation logic.
pub fn sphere_free_energy_partial(setup: &SphericalSetup, l_max: u32) -> Result<f64> {
    let mut sum = 0.0;
    for l in 1..=l_max {
        sum += energy_term(setup, l)?;
    }
    Ok(0.5 * sum)
}

/// `beta dF/db` at fixed `a` by central difference with step `b * 1e-4`,
/// both sides summed to the same order. Diagnostic only; positive means
/// attraction.
pub fn sphere_force(setup: &SphericalSetup, tol: f64) -> Result<f64> {
    sphere_force_with_step(setup, tol, 1e-4)
}

#[doc(hidden)]
pub fn sphere_force_with_step(setup: &SphericalSetup, tol: f64, rel_step: f64) -> Result<f64> {
    positive("rel_step", rel_step)?;
    let energy = sphere_free_energy(setup, tol)?;
    if energy.value == 0.0 {
        return Ok(0.0);
    }
    let h = setup.radius_b * rel_step;
    let at = |b: f64| -> Result<f64> {
        let s = SphericalSetup::new(setup.medium, setup.radius_a, b)?;
        sphere_free_energy_partial(&s, energy.l_max + 1)
    };
    Ok((at(setup.radius_b + h)? - at(setup.radius_b - h)?) / (2.0 * h))
}
