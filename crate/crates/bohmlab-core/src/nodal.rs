//! Bounds for the domain of nodal lines and nodal-line sampling.
//!
//! In the scaled variables X0 = sin((1+c)t)/sin(ct), Y0 = sin t/sin((1+c)t)
//! (so that x0 = -X0/a, y0 = -a Y0/(b sqrt(c))), the nodal points are confined
//! by four families of limiting hyperbolae, one per quartile combination of
//! the trigonometric arguments. The permissible domain is the union of the
//! four case regions: the less restrictive of all bounds wins.

use std::f64::consts::{FRAC_PI_2, FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::field::{nodal_point, NodalFrame};
use crate::params::ModelParams;

/// Tolerance applied when classifying points sitting exactly on a limiting
/// hyperbola; the case inequalities are non-strict at the lemma's endpoints.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Nodal position in the amplitude-independent scaled variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledNodal {
    /// X0 = sin((1+c)t) / sin(ct)
    pub x: f64,
    /// Y0 = sin t / sin((1+c)t)
    pub y: f64,
}

/// The four quartile cases of the bounding lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    A,
    B,
    C,
    D,
}

/// Closed admissible interval of |X0| at fixed |Y0|; `hi` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }
}

/// Which cases admit a given scaled point, and the union verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundVerdict {
    pub case_a_ok: bool,
    pub case_b_ok: bool,
    pub case_c_ok: bool,
    pub case_d_ok: bool,
    pub permissible: bool,
}

/// Map a nodal frame to the scaled variables. Exact algebraic rescaling.
pub fn scale_nodal(p: &ModelParams, nf: &NodalFrame) -> ScaledNodal {
    ScaledNodal { x: -nf.x0 * p.a, y: -nf.y0 * p.bq() / p.a }
}

/// Inverse of [`scale_nodal`]: physical (x0, y0) from scaled coordinates.
pub fn unscale_nodal(p: &ModelParams, sn: &ScaledNodal) -> (f64, f64) {
    (-sn.x / p.a, -p.a * sn.y / p.bq())
}

/// Admissible |X0| interval for one case at |Y0| = `abs_y0`.
///
/// Case D folds in its extra disjunction |X0| <= 1 or |Y0| <= 2, so the
/// returned interval is the full Case-D admissible set at this |Y0|.
pub fn bounds_case(case: BoundCase, abs_y0: f64) -> Result<Interval> {
    debug_assert!(abs_y0 >= 0.0);
    let y = abs_y0;
    match case {
        BoundCase::A => {
            // 1/(pi/2 - |Y0|) <= |X0| <= 1/(2/pi - |Y0|); needs |Y0| < pi/2,
            // upper bound opens to infinity once |Y0| >= 2/pi.
            if y >= FRAC_PI_2 {
                return Err(Error::EmptyInterval { case: 'A', abs_y0: y });
            }
            let lo = 1.0 / (FRAC_PI_2 - y);
            let hi = if y < FRAC_2_PI { 1.0 / (FRAC_2_PI - y) } else { f64::INFINITY };
            Ok(Interval { lo, hi })
        }
        BoundCase::B => {
            // 1/((pi/2)|Y0| - 1) <= |X0| <= 1/((2/pi)|Y0| - 1); empty unless
            // |Y0| > 2/pi, upper bound infinite until |Y0| > pi/2.
            if y <= FRAC_2_PI {
                return Err(Error::EmptyInterval { case: 'B', abs_y0: y });
            }
            let lo = 1.0 / (FRAC_PI_2 * y - 1.0);
            let hi = if y > FRAC_PI_2 { 1.0 / (FRAC_2_PI * y - 1.0) } else { f64::INFINITY };
            Ok(Interval { lo, hi })
        }
        BoundCase::C => {
            // 2/(pi(|Y0|+1)) <= |X0| <= pi/(2(|Y0|+1))
            Ok(Interval { lo: 2.0 / (PI * (y + 1.0)), hi: PI / (2.0 * (y + 1.0)) })
        }
        BoundCase::D => {
            // 2/(pi((pi/2)|Y0|+1)) <= |X0| <= 1/(2/pi - |Y0|), plus
            // (|X0| <= 1 or |Y0| <= 2).
            let lo = 2.0 / (PI * (FRAC_PI_2 * y + 1.0));
            let mut hi = if y < FRAC_2_PI { 1.0 / (FRAC_2_PI - y) } else { f64::INFINITY };
            if y > 2.0 + BOUNDARY_TOL {
                hi = hi.min(1.0);
            }
            if hi < lo {
                return Err(Error::EmptyInterval { case: 'D', abs_y0: y });
            }
            Ok(Interval { lo, hi })
        }
    }
}

/// Union verdict at (|X0|, |Y0|) with boundary tolerance [`BOUNDARY_TOL`].
pub fn permissible(abs_x0: f64, abs_y0: f64) -> BoundVerdict {
    let check = |case| {
        bounds_case(case, abs_y0)
            .map(|iv| iv.contains(abs_x0, BOUNDARY_TOL))
            .unwrap_or(false)
    };
    let a = check(BoundCase::A);
    let b = check(BoundCase::B);
    let c = check(BoundCase::C);
    let d = check(BoundCase::D);
    BoundVerdict { case_a_ok: a, case_b_ok: b, case_c_ok: c, case_d_ok: d, permissible: a || b || c || d }
}

/// Closest approach of the innermost limiting hyperbola to the origin:
/// X0min solves pi^4 X^4/16 + pi X/2 - 1 = 0 on (0, 1), and
/// Y0min = (2/pi)(2/(pi X0min) - 1).
///
/// Safeguarded Newton with bisection fallback; the quartic has a single real
/// root in (0, 1).
pub fn innermost_minimum() -> (f64, f64) {
    let f = |x: f64| PI.powi(4) * x.powi(4) / 16.0 + FRAC_PI_2 * x - 1.0;
    let df = |x: f64| PI.powi(4) * x.powi(3) / 4.0 + FRAC_PI_2;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut x = 0.4;
    for _ in 0..200 {
        let fx = f(x);
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let step = fx / df(x);
        let mut next = x - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() < 1e-16 {
            x = next;
            break;
        }
        x = next;
    }
    let y = FRAC_2_PI * (2.0 / (PI * x) - 1.0);
    (x, y)
}

/// Lower bound for the distance of a nodal point from the origin in the
/// physical variables: d_min = sqrt((X0min/a)^2 + (a Y0min/(b sqrt(c)))^2).
pub fn d_min(p: &ModelParams) -> f64 {
    let (x0m, y0m) = innermost_minimum();
    let sn = ScaledNodal { x: x0m, y: y0m };
    let (x, y) = unscale_nodal(p, &sn);
    x.hypot(y)
}

/// One sampled nodal point with its scaled coordinates and union verdict.
#[derive(Debug, Clone, Copy)]
pub struct NodalSample {
    pub t: f64,
    pub x0: f64,
    pub y0: f64,
    pub scaled: ScaledNodal,
    pub permissible: bool,
}

/// Sample the nodal lines over [t0, t1] at step `dt`, skipping times at which
/// the nodal point is at infinity. Returns the samples and the skip count.
pub fn nodal_lines_sample(
    p: &ModelParams,
    t0: f64,
    t1: f64,
    dt: f64,
) -> (Vec<NodalSample>, usize) {
    assert!(dt > 0.0, "dt must be positive");
    let n = ((t1 - t0) / dt).floor() as usize;
    let mut out = Vec::with_capacity(n + 1);
    let mut skipped = 0;
    for i in 0..=n {
        let t = t0 + i as f64 * dt;
        match nodal_point(p, t) {
            Ok(nf) => {
                let scaled = scale_nodal(p, &nf);
                let v = permissible(scaled.x.abs(), scaled.y.abs());
                out.push(NodalSample { t, x0: nf.x0, y0: nf.y0, scaled, permissible: v.permissible });
            }
            Err(_) => skipped += 1,
        }
    }
    (out, skipped)
}
