//! Modified spherical Bessel functions `i_l(x)`, `k_l(x)` with exponential
//! scaling, and the radial basis functions built from them.
//!
//! Convention: `i_0(x) = sinh(x) / x`, `k_0(x) = (pi/2) exp(-x) / x`, so that
//! the Wronskian is `i_l k_l' - i_l' k_l = -pi / (2 x^2)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{positive, Error, Result};
use crate::medium::Medium;

/// Largest order accepted by [`modified_spherical_bessel`].
pub const L_MAX_SUPPORTED: u32 = 5000;

/// Below this argument `i_l` comes from its ascending series.
const SMALL_X: f64 = 1e-3;
/// Power laws beyond `exp(+-FOLD_LIMIT)` keep an explicit log scale.
const FOLD_LIMIT: f64 = 600.0;

/// `i_l(x)`, `k_l(x)` and their `x`-derivatives.
///
/// The values are stored as `i_l(x) = i_scaled * exp(i_log_scale)` and
/// `k_l(x) = k_scaled * exp(k_log_scale)` (derivatives share the scale of
/// their function). Normally `i_log_scale = x` and `k_log_scale = -x`, i.e.
/// `i_scaled = exp(-x) i_l(x)` and `k_scaled = exp(x) k_l(x)`; only when those
/// products leave the `f64` range (tiny `x` at large `l`) does the log scale
/// absorb the extra power-law factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBesselPair {
    pub l: u32,
    pub x: f64,
    pub i_scaled: f64,
    pub di_scaled: f64,
    pub i_log_scale: f64,
    pub k_scaled: f64,
    pub dk_scaled: f64,
    pub k_log_scale: f64,
}

impl ScaledBesselPair {
    /// Unscaled `i_l(x)`; may overflow for large `x`.
    pub fn i(&self) -> f64 {
        self.i_scaled * self.i_log_scale.exp()
    }

    pub fn di(&self) -> f64 {
        self.di_scaled * self.i_log_scale.exp()
    }

    /// Unscaled `k_l(x)`; may underflow for large `x`.
    pub fn k(&self) -> f64 {
        self.k_scaled * self.k_log_scale.exp()
    }

    pub fn dk(&self) -> f64 {
        self.dk_scaled * self.k_log_scale.exp()
    }

    /// `x^2 (i_l k_l' - i_l' k_l) + pi/2`, which vanishes identically.
    /// The exponential scales cancel before they are evaluated.
    pub fn wronskian_residual(&self) -> f64 {
        let w = self.i_scaled * self.dk_scaled - self.di_scaled * self.k_scaled;
        self.x * self.x * w * (self.i_log_scale + self.k_log_scale).exp() + FRAC_PI_2
    }
}

/// Binary exponent step used when rescaling recurrences; multiplying by a
/// power of two is exact.
const RESCALE_BITS: i32 = 600;

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// `v * 2^e`, exact unless the result itself leaves the normal range.
fn ldexp(v: f64, e: i32) -> f64 {
    let half = e / 2;
    v * pow2(half) * pow2(e - half)
}

/// Turns `(mantissa, deriv) * 2^bin_exp * exp(reference)` into the stored
/// form: scale `exp(reference)` with the binary factor folded into the
/// mantissas whenever that stays in range, otherwise mantissas of order one
/// and the remainder moved into the log scale.
fn fold(mantissa: f64, deriv: f64, bin_exp: i32, reference: f64) -> (f64, f64, f64) {
    if bin_exp.abs() <= 2000 {
        let (m, d) = (ldexp(mantissa, bin_exp), ldexp(deriv, bin_exp));
        if m.is_normal() && d.is_finite() && (d == 0.0 || d.is_normal()) && m.abs() < 1e300 {
            return (m, d, reference);
        }
    }
    let e_m = mantissa.abs().log2().floor() as i32;
    let total = e_m + bin_exp;
    (
        ldexp(mantissa, -e_m),
        ldexp(deriv, -e_m),
        reference + total as f64 * std::f64::consts::LN_2,
    )
}

/// Computes the scaled pair `(i_l, k_l)` with derivatives.
///
/// `k_l` comes from upward recurrence starting at `k_0`, `k_1`. `i_l` comes
/// from the ascending series for `x < 1e-3` and otherwise from downward
/// (Miller) recurrence normalized to `i_0 = sinh(x)/x`, repeated from a
/// second, higher start order as a precision check.
pub fn modified_spherical_bessel(l: u32, x: f64) -> Result<ScaledBesselPair> {
    positive("x", x)?;
    if l > L_MAX_SUPPORTED {
        return Err(Error::InvalidParameter {
            name: "l",
            value: l as f64,
            reason: "exceeds the supported order",
        });
    }
    let (i_m, di_m, i_exp) = if x < SMALL_X {
        let (m, d, e) = i_series(l, x);
        let damp = (-x).exp();
        (m * damp, d * damp, e)
    } else {
        i_miller_checked(l, x)?
    };
    let (i_scaled, di_scaled, i_log_scale) = fold(i_m, di_m, i_exp, x);
    let (k_m, dk_m, k_exp) = k_upward(l, x);
    let (k_scaled, dk_scaled, k_log_scale) = fold(k_m, dk_m, k_exp, -x);
    Ok(ScaledBesselPair {
        l,
        x,
        i_scaled,
        di_scaled,
        i_log_scale,
        k_scaled,
        dk_scaled,
        k_log_scale,
    })
}

/// Ascending series `i_l(x) = x^l/(2l+1)!! sum_k (x^2/2)^k / (k! (2l+3)...(2l+2k+1))`.
/// Returns unscaled `(i_l, i_l')` as mantissas times `2^exp`.
fn i_series(l: u32, x: f64) -> (f64, f64, i32) {
    let half_x2 = 0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut dsum = l as f64;
    let mut k = 1u32;
    loop {
        term *= half_x2 / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        dsum += (l + 2 * k) as f64 * term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1;
    }
    // x^l / (2l+1)!!
    let mut prefactor = 1.0;
    let mut exp = 0i32;
    for j in 1..=l {
        prefactor *= x / (2 * j + 1) as f64;
        if prefactor < pow2(-RESCALE_BITS) {
            prefactor *= pow2(RESCALE_BITS);
            exp -= RESCALE_BITS;
        }
    }
    (sum * prefactor, dsum * prefactor / x, exp)
}

/// Upward recurrence `k_{n+1} = k_{n-1} + (2n+1)/x k_n` on `exp(x) k_n`.
/// Returns `(k_l, k_l')` scaled by `exp(x)`, as mantissas times `2^exp`.
fn k_upward(l: u32, x: f64) -> (f64, f64, i32) {
    let k0 = FRAC_PI_2 / x;
    let k1 = k0 * (1.0 + 1.0 / x);
    let mut exp = 0i32;
    if l == 0 {
        return (k0, -k1, exp);
    }
    let (mut prev, mut cur) = (k0, k1);
    for n in 1..l {
        let next = prev + (2 * n + 1) as f64 / x * cur;
        prev = cur;
        cur = next;
        if cur > pow2(RESCALE_BITS) {
            let s = pow2(-RESCALE_BITS);
            prev *= s;
            cur *= s;
            exp += RESCALE_BITS;
        }
    }
    // k_l' = -k_{l-1} - (l+1)/x k_l
    let dk = -prev - (l + 1) as f64 / x * cur;
    (cur, dk, exp)
}

/// Start order for the downward recurrence.
fn miller_start(l: u32, x: f64) -> u32 {
    let base = l + 15.max((40.0 * l as f64).sqrt().ceil() as u32);
    // for x >> l the unwanted solution only dies off once n^2 >> x
    let wide = ((l as f64).powi(2) + 40.0 * x).sqrt().ceil() as u32 + 15;
    base.max(wide)
}

fn i_miller_checked(l: u32, x: f64) -> Result<(f64, f64, i32)> {
    let mut start = miller_start(l, x);
    for _ in 0..4 {
        let a = i_miller(l, x, start);
        let higher = start + 20 + start / 4;
        let b = i_miller(l, x, higher);
        let diff = ((a.0 - ldexp(b.0, b.2 - a.2)) / a.0).abs();
        if diff <= 1e-14 {
            return Ok(b);
        }
        start = 2 * higher;
    }
    Err(Error::PrecisionLoss(format!(
        "downward recurrence for i_{l}({x}) did not settle"
    )))
}

/// Miller's algorithm from order `start`, normalized to `i_0`. Returns
/// `(i_l, i_l')` scaled by `exp(-x)`, as mantissas times `2^exp`.
fn i_miller(l: u32, x: f64, start: u32) -> (f64, f64, i32) {
    // (f_{n+1}, f_n) sharing the binary exponent `exp`
    let mut upper = 0.0;
    let mut cur = 1.0;
    let mut exp = 0i32;
    // (f_l, f_{l+1}) and the exponent at which they were recorded
    let mut at_l = (0.0, 0.0, 0i32);
    let mut f0 = 0.0;
    let mut n = start;
    while n > 0 {
        let lower = upper + (2 * n + 1) as f64 / x * cur;
        upper = cur;
        cur = lower;
        n -= 1;
        if n == l {
            at_l = (cur, upper, exp);
        }
        if n == 0 {
            f0 = cur;
            break;
        }
        if cur > pow2(RESCALE_BITS) {
            let s = pow2(-RESCALE_BITS);
            upper *= s;
            cur *= s;
            exp += RESCALE_BITS;
        }
    }
    // exp(-x) i_0 = (1 - exp(-2x)) / (2x)
    let i0_scaled = -(-2.0 * x).exp_m1() / (2.0 * x);
    let (fl, fl_plus, exp_l) = at_l;
    let norm = i0_scaled / f0;
    // i_l' = i_{l+1} + l/x i_l
    let dfl = fl_plus + l as f64 / x * fl;
    (fl * norm, dfl * norm, exp_l - exp)
}

/// A radial solution and its `r`-derivative sharing one exponential scale:
/// the actual values are `(value, deriv) * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValue {
    pub value: f64,
    pub deriv: f64,
    pub log_scale: f64,
}

impl BasisValue {
    /// Multiplies the function by a constant.
    pub fn scaled_by(&self, c: f64) -> Self {
        Self {
            value: self.value * c,
            deriv: self.deriv * c,
            ..*self
        }
    }

    /// `(value, deriv)` with the scale applied; may overflow.
    pub fn unscaled(&self) -> (f64, f64) {
        let f = self.log_scale.exp();
        (self.value * f, self.deriv * f)
    }
}

/// The regular (`s`) and decaying (`e`) radial solutions at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBasis {
    pub s: BasisValue,
    pub e: BasisValue,
}

/// Radial solutions of the screened Laplace equation in `medium` at order
/// `l`, evaluated at `r`.
///
/// For `kappa_eps > 0`: `s = i_l(kappa_eps r)`, `e = k_l(kappa_eps r)` with
/// `d/dr = kappa_eps * d/dx`, carrying the exponential scales of
/// [`ScaledBesselPair`]. For `kappa_eps = 0`: the power laws `s = r^l`,
/// `e = r^-(l+1)` with exact derivatives. Overall constant factors are
/// arbitrary; nothing downstream depends on them.
pub fn radial_basis(medium: &Medium, l: u32, r: f64) -> Result<RadialBasis> {
    positive("r", r)?;
    let kappa = medium.kappa_eps();
    if kappa == 0.0 {
        return vacuum_basis(l, r);
    }
    let p = modified_spherical_bessel(l, kappa * r)?;
    Ok(RadialBasis {
        s: BasisValue {
            value: p.i_scaled,
            deriv: kappa * p.di_scaled,
            log_scale: p.i_log_scale,
        },
        e: BasisValue {
            value: p.k_scaled,
            deriv: kappa * p.dk_scaled,
            log_scale: p.k_log_scale,
        },
    })
}

/// The unscreened solutions `s = r^l`, `e = r^-(l+1)`.
pub fn vacuum_basis(l: u32, r: f64) -> Result<RadialBasis> {
    positive("r", r)?;
    let lf = l as f64;
    let ln_r = r.ln();
    let s = if (lf * ln_r).abs() < FOLD_LIMIT {
        let v = r.powi(l as i32);
        BasisValue {
            value: v,
            deriv: if l == 0 { 0.0 } else { lf * r.powi(l as i32 - 1) },
            log_scale: 0.0,
        }
    } else {
        BasisValue {
            value: 1.0,
            deriv: lf / r,
            log_scale: lf * ln_r,
        }
    };
    let e = if ((lf + 1.0) * ln_r).abs() < FOLD_LIMIT {
        let v = r.powi(-(l as i32) - 1);
        BasisValue {
            value: v,
            deriv: -(lf + 1.0) * v / r,
            log_scale: 0.0,
        }
    } else {
        BasisValue {
            value: 1.0,
            deriv: -(lf + 1.0) / r,
            log_scale: -(lf + 1.0) * ln_r,
        }
    };
    Ok(RadialBasis { s, e })
}
