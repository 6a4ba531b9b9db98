//! Shared domain types: the charged dielectric and the two geometries.
//!
//! Lengths are in arbitrary but consistent units; inverse lengths
//! (`kappa_eps`, `q`) use the reciprocal unit.

use std::f64::consts::PI;

use crate::error::{finite, non_negative, positive, Error, Result};

/// A dielectric with constant permittivity containing a dilute
/// one-component plasma of free charges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    epsilon: f64,
    kappa_eps: f64,
}

impl Medium {
    /// `epsilon >= 1` is the relative permittivity, `kappa_eps >= 0` the
    /// inverse Debye-Hückel screening length inside the medium.
    pub fn new(epsilon: f64, kappa_eps: f64) -> Result<Self> {
        finite("epsilon", epsilon)?;
        if epsilon < 1.0 {
            return Err(Error::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                reason: "must be at least 1",
            });
        }
        non_negative("kappa_eps", kappa_eps)?;
        let medium = Self { epsilon, kappa_eps };
        if !medium.kappa_sq().is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa_eps",
                value: kappa_eps,
                reason: "epsilon * kappa_eps^2 overflows",
            });
        }
        Ok(medium)
    }

    /// The vacuum: `epsilon = 1`, no charges.
    pub fn vacuum() -> Self {
        Self {
            epsilon: 1.0,
            kappa_eps: 0.0,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn kappa_eps(&self) -> f64 {
        self.kappa_eps
    }

    /// `kappa^2 = epsilon * kappa_eps^2`, the screening parameter without the
    /// dielectric factor, i.e. `4 pi beta q_c^2 rho`.
    pub fn kappa_sq(&self) -> f64 {
        self.epsilon * self.kappa_eps * self.kappa_eps
    }

    /// `sqrt(q^2 + kappa_eps^2)`.
    pub fn q_kappa(&self, q: f64) -> f64 {
        q.hypot(self.kappa_eps)
    }

    pub fn is_vacuum(&self) -> bool {
        self.epsilon == 1.0 && self.kappa_eps == 0.0
    }
}

/// Microscopic parameters from which a [`Medium`] is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumInputs {
    /// `1 / k_B T`.
    pub beta: f64,
    /// Ionic charge (Gaussian units). Only its square enters.
    pub q_c: f64,
    /// Number density of free charges.
    pub rho: f64,
    pub epsilon: f64,
}

/// `kappa_eps^2 = 4 pi beta q_c^2 rho / epsilon`.
pub fn medium_from_inputs(inputs: MediumInputs) -> Result<Medium> {
    positive("beta", inputs.beta)?;
    finite("q_c", inputs.q_c)?;
    non_negative("rho", inputs.rho)?;
    finite("epsilon", inputs.epsilon)?;
    if inputs.epsilon < 1.0 {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: inputs.epsilon,
            reason: "must be at least 1",
        });
    }
    let kappa_eps_sq = 4.0 * PI * inputs.beta * inputs.q_c * inputs.q_c * inputs.rho / inputs.epsilon;
    Medium::new(inputs.epsilon, kappa_eps_sq.sqrt())
}

/// Two identical half-spaces `z < 0` and `z > gap_a` with vacuum between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSetup {
    pub medium: Medium,
    pub gap_a: f64,
}

impl PlanarSetup {
    pub fn new(medium: Medium, gap_a: f64) -> Result<Self> {
        positive("gap_a", gap_a)?;
        Ok(Self { medium, gap_a })
    }
}

/// A ball of radius `radius_a` inside a cavity of radius `radius_b` cut out
/// of an unbounded medium; both bodies are made of `medium`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalSetup {
    pub medium: Medium,
    pub radius_a: f64,
    pub radius_b: f64,
}

impl SphericalSetup {
    pub fn new(medium: Medium, radius_a: f64, radius_b: f64) -> Result<Self> {
        positive("radius_a", radius_a)?;
        positive("radius_b", radius_b)?;
        if radius_a >= radius_b {
            return Err(Error::InvalidParameter {
                name: "radius_a",
                value: radius_a,
                reason: "must be smaller than radius_b",
            });
        }
        Ok(Self {
            medium,
            radius_a,
            radius_b,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.radius_a / self.radius_b
    }
}

/// A transverse Fourier mode `q = |k_perp|` together with its screened
/// counterpart `q_kappa = sqrt(q^2 + kappa_eps^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMode {
    pub q: f64,
    pub q_kappa: f64,
}

impl TransverseMode {
    pub fn new(medium: &Medium, q: f64) -> Result<Self> {
        non_negative("q", q)?;
        Ok(Self {
            q,
            q_kappa: medium.q_kappa(q),
        })
    }

    pub(crate) fn unchecked(medium: &Medium, q: f64) -> Self {
        Self {
            q,
            q_kappa: medium.q_kappa(q),
        }
    }
}
