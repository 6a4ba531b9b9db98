use std::f64::consts::PI;

use screened_casimir::quadrature::{
    integrate_finite, integrate_semi_infinite, polylog, sum_algebraic, sum_geometric_like, zeta,
};

struct Case {
    name: &'static str,
    estimate: f64,
    true_error: f64,
}

fn semi(name: &'static str, f: impl Fn(f64) -> f64, scale: f64, tol: f64, exact: f64) -> Case {
    let r = integrate_semi_infinite(f, scale, tol).unwrap();
    assert!(r.converged, "{name}");
    Case {
        name,
        estimate: r.abs_error_estimate,
        true_error: (r.value - exact).abs(),
    }
}

fn finite(name: &'static str, f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64, exact: f64) -> Case {
    let r = integrate_finite(f, lo, hi, tol).unwrap();
    assert!(r.converged, "{name}");
    Case {
        name,
        estimate: r.abs_error_estimate,
        true_error: (r.value - exact).abs(),
    }
}

fn cases() -> Vec<Case> {
    vec![
        semi("q^2 e^-2q", |q| q * q * (-2.0 * q).exp(), 2.0, 1e-12, 0.25),
        semi("q e^-q", |q| q * (-q).exp(), 1.0, 1e-10, 1.0),
        semi("q^5 e^-q", |q| q.powi(5) * (-q).exp(), 1.0, 1e-10, 120.0),
        semi("e^-3q", |q| (-3.0 * q).exp(), 3.0, 1e-8, 1.0 / 3.0),
        semi("1/(1+q^2)^2", |q| 1.0 / (1.0 + q * q).powi(2), 1.0, 1e-6, PI / 4.0),
        semi("q^2/(e^q-1)", |q| q * q / q.exp_m1(), 1.0, 1e-10, 2.0 * 1.2020569031595942),
        semi("q/(e^q+1)", |q| q / (q.exp() + 1.0), 1.0, 1e-10, PI * PI / 12.0),
        semi("sqrt(q) e^-q", |q| q.sqrt() * (-q).exp(), 1.0, 1e-8, PI.sqrt() / 2.0),
        semi("e^-q^2", |q| (-q * q).exp(), 1.0, 1e-12, PI.sqrt() / 2.0),
        semi("cos(q) e^-q", |q| q.cos() * (-q).exp(), 1.0, 1e-10, 0.5),
        semi("q^2 e^-200q", |q| q * q * (-200.0 * q).exp(), 200.0, 1e-10, 2.0 / 200f64.powi(3)),
        semi("ln(1+e^-q)", |q| (-q).exp().ln_1p(), 1.0, 1e-10, PI * PI / 12.0),
        finite("x^3 on [0,2]", |x| x.powi(3), 0.0, 2.0, 1e-12, 4.0),
        finite("sin on [0,pi]", f64::sin, 0.0, PI, 1e-12, 2.0),
        finite("sqrt on [0,1]", f64::sqrt, 0.0, 1.0, 1e-10, 2.0 / 3.0),
        finite("1/x on [1,e^3]", |x| 1.0 / x, 1.0, 3f64.exp(), 1e-12, 3.0),
        {
            let r = sum_geometric_like(|n| (1.0f64 / 9.0).powi(n as i32) / (n as f64).powi(3), 1.0 / 9.0, 1e-14).unwrap();
            let direct: f64 = (1..60).map(|n| (1.0f64 / 9.0).powi(n) / (n as f64).powi(3)).sum();
            Case { name: "Li3(1/9)", estimate: r.tail_bound, true_error: (r.value - direct).abs() }
        },
        {
            let r = sum_geometric_like(|n| 0.5f64.powi(n as i32), 0.5, 1e-12).unwrap();
            Case { name: "sum 2^-n", estimate: r.tail_bound, true_error: (r.value - 1.0).abs() }
        },
        {
            let r = sum_algebraic(|x| 1.0 / (x * x), 1e-12).unwrap();
            Case { name: "zeta(2)", estimate: r.tail_bound, true_error: (r.value - PI * PI / 6.0).abs() }
        },
        {
            let r = sum_algebraic(|x| 1.0 / x.powi(4), 1e-12).unwrap();
            Case { name: "zeta(4)", estimate: r.tail_bound, true_error: (r.value - PI.powi(4) / 90.0).abs() }
        },
    ]
}

#[test]
fn error_estimates_are_honest() {
    let cases = cases();
    assert_eq!(cases.len(), 20);
    let mut honest = 0;
    for c in &cases {
        // values at the rounding floor carry no information about the estimator
        let floor = 4.0 * f64::EPSILON;
        let ok = c.true_error <= c.estimate.max(floor);
        if ok {
            honest += 1;
        }
        assert!(
            c.true_error <= 10.0 * c.estimate.max(floor),
            "{}: true {:e}, estimate {:e}",
            c.name,
            c.true_error,
            c.estimate
        );
    }
    assert!(honest >= 19, "only {honest} of 20 honest");
}

#[test]
fn reference_constants() {
    let z3 = zeta(3.0, 1e-13).unwrap();
    assert!((z3 - 1.2020569031595942).abs() < 1e-12);
    let li = polylog(3.0, 1.0 / 9.0, 1e-14).unwrap();
    let direct: f64 = (1..40).map(|n| (1.0f64 / 9.0).powi(n) / (n as f64).powi(3)).sum();
    assert!((li - direct).abs() < 1e-15);
    assert!((li - 0.1127077).abs() < 1e-7);
    assert!((polylog(3.0, 1.0, 1e-13).unwrap() - z3).abs() < 1e-11);
}

#[test]
fn results_are_deterministic() {
    let f = |q: f64| q * q * (-q).exp() / (1.0 + 0.3 * (-q).exp());
    let a = integrate_semi_infinite(f, 1.0, 1e-11).unwrap();
    let b = integrate_semi_infinite(f, 1.0, 1e-11).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.abs_error_estimate.to_bits(), b.abs_error_estimate.to_bits());
    assert_eq!(a.evaluations, b.evaluations);
}
