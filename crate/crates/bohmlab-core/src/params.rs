//! Model parameters for the three-state superposition.

use crate::error::{Error, Result};

/// Largest denominator checked when deciding whether `c` is close to a
/// rational; see [`ModelParams::rational_c_warning`].
const RATIONAL_Q_MAX: u64 = 64;
/// Proximity to a ratio p/q that triggers the rational-c warning.
const RATIONAL_C_TOL: f64 = 1e-9;

/// Amplitudes `a`, `b` and frequency ratio `c` of the guiding wavefunction
///
/// ```text
/// psi(x, y, t) = e^{-(x^2 + c y^2)/2 - i(1+c)t/2} (1 + a x e^{-it} + b sqrt(c) x y e^{-i(1+c)t})
/// ```
///
/// All quantities are dimensionless (hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Set when `c` is within 1e-9 of a ratio p/q with q <= 64. Rational `c`
    /// makes the nodal lines periodic and the orbits near the X-point stiff
    /// enough that double precision cannot verify their periodicity; see the
    /// crate docs for this documented limitation.
    pub rational_c_warning: bool,
}

impl ModelParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument("amplitudes a, b must be finite"));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument("frequency ratio c must be finite and > 0"));
        }
        Ok(Self { a, b, c, rational_c_warning: near_rational(c) })
    }

    /// The combination b*sqrt(c) that multiplies every y-coupling term.
    #[inline]
    pub fn bq(&self) -> f64 {
        self.b * self.c.sqrt()
    }

    /// The reference configuration used throughout: a = b = 1, c = sqrt(2)/2.
    pub fn reference() -> Self {
        Self::new(1.0, 1.0, std::f64::consts::SQRT_2 / 2.0).unwrap()
    }
}

fn near_rational(c: f64) -> bool {
    for q in 1..=RATIONAL_Q_MAX {
        let p = (c * q as f64).round();
        if p >= 0.0 && (c - p / q as f64).abs() < RATIONAL_C_TOL {
            return true;
        }
    }
    false
}

/// Parse a frequency-ratio token: `sqrt2/2`, a rational `p/q`, or a decimal.
///
/// The symbolic form keeps full double precision for the irrational reference
/// value instead of whatever digits a user would care to type.
pub fn parse_c(token: &str) -> Result<f64> {
    let t = token.trim();
    if t.eq_ignore_ascii_case("sqrt2/2") || t.eq_ignore_ascii_case("sqrt(2)/2") {
        return Ok(std::f64::consts::SQRT_2 / 2.0);
    }
    if let Some((num, den)) = t.split_once('/') {
        if let (Ok(p), Ok(q)) = (num.trim().parse::<f64>(), den.trim().parse::<f64>()) {
            if q != 0.0 {
                return Ok(p / q);
            }
        }
        return Err(Error::InvalidArgument("malformed rational c token"));
    }
    t.parse::<f64>()
        .map_err(|_| Error::InvalidArgument("malformed c token"))
}
