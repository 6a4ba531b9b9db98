//! Finite-volume solvers for the screened potential, used only to check the
//! analytic coefficients from first principles.
//!
//! Both geometries are solved in conservative form,
//!
//! ```text
//! planar:  d/dz (eps Phi') - eps (q^2 + kappa_eps^2) Phi      = -4 pi delta(z - z0)
//! radial:  d/dr (eps r^2 Phi') - eps (l(l+1) + kappa_eps^2 r^2) Phi = -delta(r - r0)
//! ```
//!
//! with `kappa_eps = 0` and `eps = 1` in the vacuum regions. Interfaces and
//! the source sit on nodes, so the flux `eps Phi'` is continuous by
//! construction. The domain ends carry the exact outgoing (Robin)
//! conditions of the outer media, so truncation adds no error.

use std::f64::consts::PI;

use crate::error::{finite, positive, Error, Result};
use crate::medium::Medium;
use crate::special_fn::radial_basis;

/// Uniform grid `z_min, z_min + h, ..., z_max` with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub z_min: f64,
    pub z_max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(z_min: f64, z_max: f64, n: usize) -> Result<Self> {
        finite("z_min", z_min)?;
        finite("z_max", z_max)?;
        if z_min >= z_max {
            return Err(Error::InvalidParameter {
                name: "z_max",
                value: z_max,
                reason: "must exceed z_min",
            });
        }
        if n < 3 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "need at least three nodes",
            });
        }
        Ok(Self { z_min, z_max, n })
    }

    /// Grid with spacing `h = gap / nodes_per_gap` spanning `[z_min, z_max]`;
    /// both ends are rounded outward to whole steps from zero.
    pub fn with_spacing(z_min: f64, z_max: f64, gap: f64, nodes_per_gap: usize) -> Result<Self> {
        positive("gap", gap)?;
        let h = gap / nodes_per_gap.max(1) as f64;
        let lo = (z_min / h).floor();
        let hi = (z_max / h).ceil();
        Self::new(lo * h, hi * h, (hi - lo) as usize + 1)
    }

    pub fn h(&self) -> f64 {
        (self.z_max - self.z_min) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.z_min + i as f64 * self.h()
    }

    /// Index of the node at `z`; errors if `z` is not (to rounding) a node.
    pub fn index_of(&self, z: f64) -> Result<usize> {
        let t = (z - self.z_min) / self.h();
        let i = t.round();
        if (t - i).abs() > 1e-6 || i < 0.0 || i > (self.n - 1) as f64 {
            return Err(Error::Domain(format!("{z} is not a grid node")));
        }
        Ok(i as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub grid: Grid1D,
    pub phi: Vec<f64>,
    /// Largest relative mismatch of the one-sided fluxes `eps Phi'` across
    /// an interface node.
    pub interface_residual: f64,
    /// Set when `interface_residual` exceeds 5 %.
    pub coarse_grid_warning: bool,
}

impl BvpSolution {
    /// Linear interpolation between nodes.
    pub fn value_at(&self, z: f64) -> Result<f64> {
        let g = &self.grid;
        if !(g.z_min..=g.z_max).contains(&z) {
            return Err(Error::Domain(format!("{z} outside the grid")));
        }
        let t = (z - g.z_min) / g.h();
        let i = (t.floor() as usize).min(g.n - 2);
        let w = t - i as f64;
        Ok(self.phi[i] * (1.0 - w) + self.phi[i + 1] * w)
    }
}

const COARSE_GRID_RESIDUAL: f64 = 0.05;

/// Assembles and solves the symmetric tridiagonal finite-volume system.
///
/// `flux(z)` is the coefficient multiplying `Phi'` at cell faces,
/// `reaction(z_node, z_side)` the absorption density for the half cell on
/// the side of `z_side`. `left_robin` and `right_robin` are the outgoing
/// flux coefficients at the ends (both positive).
struct FvProblem<'a> {
    grid: Grid1D,
    flux: &'a dyn Fn(f64) -> f64,
    reaction: &'a dyn Fn(f64, f64) -> f64,
    left_robin: f64,
    right_robin: f64,
    source: usize,
    load: f64,
}

fn solve_fv(p: &FvProblem) -> Vec<f64> {
    let n = p.grid.n;
    let h = p.grid.h();
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    for i in 0..n {
        let z = p.grid.node(i);
        if i > 0 {
            let f = (p.flux)(z - 0.5 * h) / h;
            lower[i] = -f;
            diag[i] += f + 0.5 * h * (p.reaction)(z, z - 0.25 * h);
        } else {
            diag[i] += p.left_robin;
        }
        if i + 1 < n {
            let f = (p.flux)(z + 0.5 * h) / h;
            upper[i] = -f;
            diag[i] += f + 0.5 * h * (p.reaction)(z, z + 0.25 * h);
        } else {
            diag[i] += p.right_robin;
        }
    }
    rhs[p.source] = p.load;
    // Thomas algorithm; the matrix is diagonally dominant
    for i in 1..n {
        let m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    }
    x
}

fn interface_residual(grid: &Grid1D, phi: &[f64], flux: &dyn Fn(f64) -> f64, interfaces: &[usize]) -> f64 {
    let h = grid.h();
    interfaces
        .iter()
        .filter(|&&i| i > 0 && i + 1 < grid.n)
        .map(|&i| {
            let z = grid.node(i);
            let left = flux(z - 0.5 * h) * (phi[i] - phi[i - 1]);
            let right = flux(z + 0.5 * h) * (phi[i + 1] - phi[i]);
            let scale = left.abs() + right.abs();
            if scale == 0.0 {
                0.0
            } else {
                (left - right).abs() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// Transverse potential of a unit point charge at `z0 < 0` for the
/// two-half-space geometry (medium for `z < 0` and `z > gap_a`).
/// `0`, `gap_a` and `z0` must be grid nodes.
pub fn solve_planar_bvp(medium: &Medium, q: f64, gap_a: f64, z0: f64, grid: Grid1D) -> Result<BvpSolution> {
    positive("q", q)?;
    positive("gap_a", gap_a)?;
    finite("z0", z0)?;
    if !(grid.z_min < z0 && z0 < 0.0 && gap_a < grid.z_max) {
        return Err(Error::Domain(
            "need z_min < z0 < 0 < gap_a < z_max".to_string(),
        ));
    }
    let source = grid.index_of(z0)?;
    let interfaces = [grid.index_of(0.0)?, grid.index_of(gap_a)?];
    let eps = medium.epsilon();
    let in_medium = |z: f64| z < 0.0 || z > gap_a;
    let flux = |z: f64| if in_medium(z) { eps } else { 1.0 };
    let reaction = |_: f64, side: f64| {
        if in_medium(side) {
            eps * (q * q + medium.kappa_sq() / eps)
        } else {
            q * q
        }
    };
    let outgoing = eps * medium.q_kappa(q);
    let problem = FvProblem {
        grid,
        flux: &flux,
        reaction: &reaction,
        left_robin: outgoing,
        right_robin: outgoing,
        source,
        load: 4.0 * PI,
    };
    let phi = solve_fv(&problem);
    let residual = interface_residual(&grid, &phi, &flux, &interfaces);
    Ok(BvpSolution {
        grid,
        phi,
        interface_residual: residual,
        coarse_grid_warning: residual > COARSE_GRID_RESIDUAL,
    })
}

/// Transmitted amplitude `D` read off the numerical solution at `z = gap_a`,
/// using `Phi(z) = 2 pi D e^{-q_kappa (z - z0)}` beyond the gap.
pub fn planar_d_estimate(medium: &Medium, q: f64, gap_a: f64, z0: f64, solution: &BvpSolution) -> Result<f64> {
    let i = solution.grid.index_of(gap_a)?;
    let qk = medium.q_kappa(q);
    Ok(solution.phi[i] * (qk * (gap_a - z0)).exp() / (2.0 * PI))
}

/// Radial potential of order `l` for a unit shell source at `source_r`
/// (outside the cavity, `radius_b < source_r`). The grid must start inside
/// the ball and have `radius_a`, `radius_b` and `source_r` as nodes.
pub fn solve_radial_bvp(
    medium: &Medium,
    l: u32,
    radius_a: f64,
    radius_b: f64,
    source_r: f64,
    grid: Grid1D,
) -> Result<BvpSolution> {
    positive("radius_a", radius_a)?;
    if !(0.0 < grid.z_min && grid.z_min < radius_a && radius_a < radius_b && radius_b < source_r && source_r < grid.z_max) {
        return Err(Error::Domain(
            "need 0 < r_min < radius_a < radius_b < source_r < r_max".to_string(),
        ));
    }
    let source = grid.index_of(source_r)?;
    let interfaces = [grid.index_of(radius_a)?, grid.index_of(radius_b)?];
    let eps = medium.epsilon();
    let kappa_sq = medium.kappa_sq() / eps;
    let ll = (l as f64) * (l as f64 + 1.0);
    let in_medium = |r: f64| r < radius_a || r > radius_b;
    let flux = |r: f64| if in_medium(r) { eps * r * r } else { r * r };
    let reaction = |r: f64, side: f64| {
        if in_medium(side) {
            eps * (ll + kappa_sq * r * r)
        } else {
            ll
        }
    };
    let inner = radial_basis(medium, l, grid.z_min)?.s;
    let outer = radial_basis(medium, l, grid.z_max)?.e;
    let (r0, r1) = (grid.z_min, grid.z_max);
    let problem = FvProblem {
        grid,
        flux: &flux,
        reaction: &reaction,
        left_robin: eps * r0 * r0 * inner.deriv / inner.value,
        right_robin: -eps * r1 * r1 * outer.deriv / outer.value,
        source,
        load: 1.0,
    };
    let phi = solve_fv(&problem);
    let residual = interface_residual(&grid, &phi, &flux, &interfaces);
    Ok(BvpSolution {
        grid,
        phi,
        interface_residual: residual,
        coarse_grid_warning: residual > COARSE_GRID_RESIDUAL,
    })
}

/// Eigenvalue extracted from a radial solution.
///
/// Inside the ball the solution is `T s_eps`; a single pass through both
/// interfaces would give `T0 = P tau_b tau_a`, where `P s_eps` is the
/// source field in the unbounded medium and `tau_b`, `tau_a` the
/// single-interface transmission factors. Multiple reflections give
/// `T = T0 / (1 - lambda)`.
pub fn radial_lambda_estimate(
    medium: &Medium,
    l: u32,
    radius_a: f64,
    radius_b: f64,
    source_r: f64,
    solution: &BvpSolution,
) -> Result<f64> {
    if medium.kappa_eps() == 0.0 {
        return Err(Error::Domain(
            "radial extraction needs kappa_eps > 0".to_string(),
        ));
    }
    let eps = medium.epsilon();
    let kappa = medium.kappa_eps();
    let unscaled = |r: f64| -> Result<[f64; 4]> {
        let b = radial_basis(medium, l, r)?;
        let (s, ds) = b.s.unscaled();
        let (e, de) = b.e.unscaled();
        Ok([s, ds, e, de])
    };
    // source field for r < source_r: P i_l(kappa r)
    let [_, _, k0, _] = unscaled(source_r)?;
    let p = 2.0 * kappa * k0 / (eps * PI);
    let vac = |r: f64| -> Result<[f64; 4]> {
        let lf = l as f64;
        Ok([r.powf(lf), lf * r.powf(lf - 1.0), r.powf(-lf - 1.0), -(lf + 1.0) * r.powf(-lf - 2.0)])
    };
    let [sm, dsm, em, dem] = unscaled(radius_b)?;
    let [s, ds, _, _] = vac(radius_b)?;
    let tau_b = eps * (sm * dem - dsm * em) / (eps * s * dem - ds * em);
    let [sm, dsm, _, _] = unscaled(radius_a)?;
    let [s, ds, e, de] = vac(radius_a)?;
    let tau_a = (ds * e - s * de) / (eps * dsm * e - sm * de);
    let t0 = p * tau_b * tau_a;
    let [s_min, _, _, _] = unscaled(solution.grid.z_min)?;
    let t = solution.phi[0] / s_min;
    Ok(1.0 - t0 / t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = Grid1D::new(-1.0, 1.0, 21).unwrap();
        assert!((g.h() - 0.1).abs() < 1e-15);
        assert_eq!(g.index_of(0.0).unwrap(), 10);
        assert!(g.index_of(0.05).is_err());
        assert!(Grid1D::new(1.0, 0.0, 5).is_err());
        assert!(Grid1D::new(0.0, 1.0, 2).is_err());
        let s = Grid1D::with_spacing(-0.55, 1.3, 1.0, 10).unwrap();
        assert!(s.index_of(1.0).is_ok() && s.index_of(-0.5).is_ok());
    }

    #[test]
    fn free_space_response() {
        let q = 1.3;
        let grid = Grid1D::with_spacing(-2.0, 3.0, 1.0, 200).unwrap();
        let sol = solve_planar_bvp(&Medium::vacuum(), q, 1.0, -0.5, grid).unwrap();
        for &z in &[-1.5, -0.5, 0.7, 2.5] {
            let exact = 2.0 * PI / q * (-q * (z + 0.5f64).abs()).exp();
            let got = sol.value_at(z).unwrap();
            assert!(((got - exact) / exact).abs() < 1e-4, "z = {z}");
        }
        assert!(!sol.coarse_grid_warning);
    }
}
