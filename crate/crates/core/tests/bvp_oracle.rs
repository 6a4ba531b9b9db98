use screened_casimir::bvp_oracle::{
    planar_d_estimate, radial_lambda_estimate, solve_planar_bvp, solve_radial_bvp, Grid1D,
};
use screened_casimir::planar::coefficient_d_plates;
use screened_casimir::spherical::lambda_eps_l;
use screened_casimir::{Medium, SphericalSetup};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn planar_error(m: &Medium, q: f64, nodes: usize) -> f64 {
    let grid = Grid1D::with_spacing(-1.0, 2.0, 1.0, nodes).unwrap();
    let sol = solve_planar_bvp(m, q, 1.0, -0.5, grid).unwrap();
    let d = planar_d_estimate(m, q, 1.0, -0.5, &sol).unwrap();
    rel(d, coefficient_d_plates(m, q, 1.0).unwrap().value())
}

#[test]
fn planar_amplitude_converges_at_second_order() {
    for &(eps, kappa, q) in &[(3.0, 1.5, 0.8), (1.0, 2.0, 0.3), (10.0, 0.0, 1.7)] {
        let m = Medium::new(eps, kappa).unwrap();
        let errs: Vec<f64> = [100, 200, 400].iter().map(|&n| planar_error(&m, q, n)).collect();
        assert!(errs[1] < 0.01);
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 2.0).abs() < 0.2, "eps {eps}: order {order}");
        }
    }
}

fn radial_error(m: &Medium, intervals: usize) -> f64 {
    let grid = Grid1D::new(0.4, 1.2, intervals + 1).unwrap();
    let sol = solve_radial_bvp(m, 1, 0.8, 1.0, 1.1, grid).unwrap();
    let lam = radial_lambda_estimate(m, 1, 0.8, 1.0, 1.1, &sol).unwrap();
    rel(lam, lambda_eps_l(&SphericalSetup::new(*m, 0.8, 1.0).unwrap(), 1).unwrap().lambda)
}

#[test]
fn radial_eigenvalue_converges_at_second_order() {
    let m = Medium::new(10.0, 0.5).unwrap();
    let errs: Vec<f64> = [400, 800, 1600].iter().map(|&n| radial_error(&m, n)).collect();
    assert!(errs[0] < 0.02);
    for w in errs.windows(2) {
        assert!(((w[0] / w[1]).log2() - 2.0).abs() < 0.2);
    }
}

#[test]
fn radial_other_orders() {
    for &(eps, kappa, l) in &[(4.0, 2.0, 2u32), (2.0, 0.1, 3)] {
        let m = Medium::new(eps, kappa).unwrap();
        let grid = Grid1D::new(0.4, 1.2, 801).unwrap();
        let sol = solve_radial_bvp(&m, l, 0.8, 1.0, 1.1, grid).unwrap();
        let lam = radial_lambda_estimate(&m, l, 0.8, 1.0, 1.1, &sol).unwrap();
        let exact = lambda_eps_l(&SphericalSetup::new(m, 0.8, 1.0).unwrap(), l).unwrap().lambda;
        assert!(rel(lam, exact) < 0.01, "l = {l}");
    }
}

#[test]
fn unscreened_radial_solution_decays_as_power_law() {
    let l = 2u32;
    let grid = Grid1D::new(0.2, 3.0, 1401).unwrap();
    let sol = solve_radial_bvp(&Medium::vacuum(), l, 0.5, 1.0, 1.5, grid).unwrap();
    let c = sol.value_at(2.0).unwrap() * 2.0f64.powi(3);
    for &r in &[1.6, 2.4, 3.0] {
        assert!(rel(sol.value_at(r).unwrap() * r.powi(3), c) < 1e-4);
    }
}

#[test]
fn reciprocity_and_positivity() {
    let m = Medium::new(4.0, 1.0).unwrap();
    let grid = Grid1D::with_spacing(-2.0, 3.0, 1.0, 100).unwrap();
    let (z1, z2) = (-0.5, -1.2);
    let a = solve_planar_bvp(&m, 0.6, 1.0, z1, grid).unwrap();
    let b = solve_planar_bvp(&m, 0.6, 1.0, z2, grid).unwrap();
    let ab = a.phi[grid.index_of(z2).unwrap()];
    let ba = b.phi[grid.index_of(z1).unwrap()];
    assert!(rel(ab, ba) < 1e-12);
    assert!(a.phi.iter().all(|&v| v > 0.0));
    assert!(!a.coarse_grid_warning);

    let rg = Grid1D::new(0.3, 1.5, 601).unwrap();
    let r = solve_radial_bvp(&m, 2, 0.6, 1.0, 1.2, rg).unwrap();
    assert!(r.phi.iter().all(|&v| v > 0.0));
}

#[test]
fn coarse_grid_is_flagged() {
    let m = Medium::new(50.0, 20.0).unwrap();
    let grid = Grid1D::with_spacing(-1.0, 2.0, 1.0, 4).unwrap();
    let sol = solve_planar_bvp(&m, 0.5, 1.0, -0.5, grid).unwrap();
    assert!(sol.coarse_grid_warning);
}

#[test]
fn rejects_misplaced_geometry() {
    let m = Medium::new(2.0, 1.0).unwrap();
    let grid = Grid1D::with_spacing(-1.0, 2.0, 1.0, 10).unwrap();
    assert!(solve_planar_bvp(&m, 0.5, 1.0, -0.55, grid).is_err());
    assert!(solve_planar_bvp(&m, 0.5, 1.0, 0.5, grid).is_err());
    let rg = Grid1D::new(0.4, 1.2, 401).unwrap();
    assert!(solve_radial_bvp(&m, 1, 0.8, 1.0, 0.9, rg).is_err());
}
