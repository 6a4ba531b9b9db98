/// A real number stored as `mantissa * exp(log_scale)`.
///
/// Used wherever a factor such as `exp(kappa * a)` overflows on its own but
/// cancels against another exponential in the quantity actually needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpScaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ExpScaled {
    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        Self {
            mantissa,
            log_scale,
        }
    }

    /// The plain value. Overflows to infinity (or underflows to zero) when the
    /// exponent is out of range.
    pub fn value(&self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// `self * exp(extra)` evaluated with the exponents combined first.
    pub fn value_times_exp(&self, extra: f64) -> f64 {
        self.mantissa * (self.log_scale + extra).exp()
    }

    /// `self / other` with the exponents combined first.
    pub fn ratio(&self, other: &ExpScaled) -> f64 {
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }
}
