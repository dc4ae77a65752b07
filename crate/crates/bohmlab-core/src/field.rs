//! Exact evaluation of the wavefunction, the guidance velocity field, the
//! nodal point, and the rest-frame frozen-time stream function.
//!
//! The guiding field is the three-state superposition
//!
//! ```text
//! psi(x, y, t) = e^{-(x^2 + c y^2)/2 - i(1+c)t/2} (1 + a x e^{-it} + b sqrt(c) x y e^{-i(1+c)t})
//! ```
//!
//! and trajectories follow (dx/dt, dy/dt) = Im(grad psi / psi), which in
//! closed form reads
//!
//! ```text
//! dx/dt = -(a sin t + b sqrt(c) y sin((1+c)t)) / G
//! dy/dt = -(b sqrt(c) x (a x sin(ct) + sin((1+c)t))) / G
//! ```
//!
//! with `G` the squared modulus of the bracketed polynomial factor of psi.
//! `G` vanishes exactly on the nodal set, where the field is singular.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Below this value of G the velocity evaluation refuses and reports
/// `NearNode`: the field is 0/0-adjacent and step control must own the
/// decision of how to proceed.
pub const G_FLOOR: f64 = 1e-12;

/// Floor for the sine denominators of the nodal-point equations; below it the
/// nodal point is treated as escaped to infinity.
pub const TOL_DIV: f64 = 1e-12;

/// A configuration-space point at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl PhaseState {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }
}

/// Complex value of the wavefunction.
pub type ComplexAmplitude = Complex64;

/// Guidance velocity (dx/dt, dy/dt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity2 {
    pub vx: f64,
    pub vy: f64,
}

/// Nodal point position and velocity at a given time.
///
/// The position solves psi = 0; the velocity components are the exact time
/// derivatives of the closed-form position (they feed the moving-frame
/// averages and must be noise-free, hence no finite differencing here).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalFrame {
    pub t: f64,
    pub x0: f64,
    pub y0: f64,
    pub x0dot: f64,
    pub y0dot: f64,
}

/// psi evaluated at `s`; entire in all arguments.
pub fn eval_psi(p: &ModelParams, s: &PhaseState) -> ComplexAmplitude {
    let bq = p.bq();
    let envelope = (-(s.x * s.x + p.c * s.y * s.y) / 2.0).exp();
    let phase = Complex64::from_polar(1.0, -(1.0 + p.c) * s.t / 2.0);
    let poly = Complex64::new(1.0, 0.0)
        + p.a * s.x * Complex64::from_polar(1.0, -s.t)
        + bq * s.x * s.y * Complex64::from_polar(1.0, -(1.0 + p.c) * s.t);
    envelope * phase * poly
}

/// The Gaussian envelope magnitude at `s`; the natural scale for deciding
/// whether |psi| is "zero" at a point.
pub fn envelope(p: &ModelParams, s: &PhaseState) -> f64 {
    (-(s.x * s.x + p.c * s.y * s.y) / 2.0).exp()
}

/// The guidance-field denominator
///
/// ```text
/// G = 1 + 2 a x cos t + 2 b sqrt(c) x y cos((1+c)t) + a^2 x^2
///       + 2 a b sqrt(c) x^2 y cos(ct) + b^2 c x^2 y^2
/// ```
///
/// equal to the squared modulus of the polynomial factor of psi, so G >= 0
/// everywhere with equality exactly on the nodal set.
pub fn eval_g(p: &ModelParams, s: &PhaseState) -> f64 {
    let (a, bq) = (p.a, p.bq());
    let (x, y, t) = (s.x, s.y, s.t);
    1.0 + 2.0 * a * x * t.cos()
        + 2.0 * bq * x * y * ((1.0 + p.c) * t).cos()
        + a * a * x * x
        + 2.0 * a * bq * x * x * y * (p.c * t).cos()
        + bq * bq * x * x * y * y
}

#[inline]
fn g_partials(p: &ModelParams, s: &PhaseState) -> (f64, f64) {
    let (a, bq) = (p.a, p.bq());
    let (x, y, t) = (s.x, s.y, s.t);
    let (ct, c1t, cct) = (t.cos(), ((1.0 + p.c) * t).cos(), (p.c * t).cos());
    let gx = 2.0 * a * ct
        + 2.0 * bq * y * c1t
        + 2.0 * a * a * x
        + 4.0 * a * bq * x * y * cct
        + 2.0 * bq * bq * x * y * y;
    let gy = 2.0 * bq * x * c1t + 2.0 * a * bq * x * x * cct + 2.0 * bq * bq * x * x * y;
    (gx, gy)
}

#[inline]
fn numerators(p: &ModelParams, s: &PhaseState) -> (f64, f64) {
    let (a, bq) = (p.a, p.bq());
    let (x, y, t) = (s.x, s.y, s.t);
    let s1 = ((1.0 + p.c) * t).sin();
    let nx = -(a * t.sin() + bq * y * s1);
    let ny = -bq * x * (a * x * (p.c * t).sin() + s1);
    (nx, ny)
}

/// Guidance velocity at `s`. Fails with `NearNode` when G <= [`G_FLOOR`].
pub fn velocity(p: &ModelParams, s: &PhaseState) -> Result<Velocity2> {
    let g = eval_g(p, s);
    if g <= G_FLOOR {
        return Err(Error::NearNode { t: s.t, g });
    }
    let (nx, ny) = numerators(p, s);
    Ok(Velocity2 { vx: nx / g, vy: ny / g })
}

/// Jacobian of the guidance field with respect to (x, y), row-major:
/// `[[d vx/dx, d vx/dy], [d vy/dx, d vy/dy]]`. Drives the variational
/// (deviation-vector) equations.
pub fn velocity_jacobian(p: &ModelParams, s: &PhaseState) -> Result<[[f64; 2]; 2]> {
    let g = eval_g(p, s);
    if g <= G_FLOOR {
        return Err(Error::NearNode { t: s.t, g });
    }
    let (a, bq) = (p.a, p.bq());
    let (nx, ny) = numerators(p, s);
    let (gx, gy) = g_partials(p, s);
    let s1 = ((1.0 + p.c) * s.t).sin();
    let sc = (p.c * s.t).sin();
    let g2 = g * g;
    let nx_y = -bq * s1;
    let ny_x = -bq * (2.0 * a * s.x * sc + s1);
    Ok([
        [-nx * gx / g2, (nx_y * g - nx * gy) / g2],
        [(ny_x * g - ny * gx) / g2, -ny * gy / g2],
    ])
}

/// The moving nodal point
///
/// ```text
/// x0 = -sin((1+c)t) / (a sin(ct)),   y0 = -a sin t / (b sqrt(c) sin((1+c)t))
/// ```
///
/// with velocities by analytic differentiation. Fails with `NodalAtInfinity`
/// when either sine denominator is below [`TOL_DIV`]: the nodal point escapes
/// to infinity from either side of the y-axis at those times.
pub fn nodal_point(p: &ModelParams, t: f64) -> Result<NodalFrame> {
    if p.a == 0.0 || p.b == 0.0 {
        return Err(Error::InvalidArgument("nodal point requires a != 0 and b != 0"));
    }
    let (a, bq, c) = (p.a, p.bq(), p.c);
    let s1 = ((1.0 + c) * t).sin();
    let sc = (c * t).sin();
    if sc.abs() < TOL_DIV || s1.abs() < TOL_DIV {
        return Err(Error::NodalAtInfinity { t });
    }
    let st = t.sin();
    let c1 = ((1.0 + c) * t).cos();
    let cc = (c * t).cos();

    let x0 = -s1 / (a * sc);
    let y0 = -a * st / (bq * s1);
    // d/dt of the two quotients, kept in closed form
    let x0dot = -((1.0 + c) * c1 * sc - c * s1 * cc) / (a * sc * sc);
    let y0dot = -(a / bq) * (t.cos() * s1 - st * (1.0 + c) * c1) / (s1 * s1);
    Ok(NodalFrame { t, x0, y0, x0dot, y0dot })
}

/// Stream function of the frozen-time rest-frame flow:
///
/// ```text
/// C = a sin t * y + b sqrt(c) sin((1+c)t) y^2/2
///     - a b sqrt(c) sin(ct) x^3/3 - b sqrt(c) sin((1+c)t) x^2/2
/// ```
///
/// With t frozen, the guidance field is (-C_y, C_x)/G, so C is constant along
/// frozen-time integral curves.
pub fn rest_frame_stream(p: &ModelParams, s: &PhaseState) -> f64 {
    let (a, bq) = (p.a, p.bq());
    let (x, y, t) = (s.x, s.y, s.t);
    let s1 = ((1.0 + p.c) * t).sin();
    let sc = (p.c * t).sin();
    a * t.sin() * y + bq * s1 * y * y / 2.0 - a * bq * sc * x * x * x / 3.0 - bq * s1 * x * x / 2.0
}

/// A critical point of the frozen-time rest-frame flow with the eigenvalues
/// of its linearization (the rotated-gradient field (-C_y, C_x), G factored
/// out).
#[derive(Debug, Clone, Copy)]
pub struct RestFrameCritical {
    pub x: f64,
    pub y: f64,
    pub eigenvalues: [Complex64; 2],
}

/// The two critical points of the frozen-time rest-frame flow at time `t`.
///
/// The first coincides with the nodal point and carries a pure imaginary
/// eigenvalue pair +-i b sqrt(c) sin((1+c)t) (a center: the rest-frame flow
/// lines near the node are ellipses). The second sits on the y-axis at
/// (0, y0) and is a saddle with real eigenvalues +-b sqrt(c) sin((1+c)t),
/// bounded by quantities of order a or b.
pub fn rest_frame_critical_points(p: &ModelParams, t: f64) -> Result<[RestFrameCritical; 2]> {
    let nf = nodal_point(p, t)?;
    let lam = p.bq() * ((1.0 + p.c) * t).sin();
    Ok([
        RestFrameCritical {
            x: nf.x0,
            y: nf.y0,
            eigenvalues: [Complex64::new(0.0, lam), Complex64::new(0.0, -lam)],
        },
        RestFrameCritical {
            x: 0.0,
            y: nf.y0,
            eigenvalues: [Complex64::new(lam, 0.0), Complex64::new(-lam, 0.0)],
        },
    ])
}
