//! Analysis in the frame attached to the moving nodal point: adiabatic
//! averaging, the mean cubic coefficient of the radial equation, the spiral
//! law, X-point location and eigen-analysis, flow charts, Hopf scans and
//! limit-cycle detection.
//!
//! With u = x - x0(t), v = y - y0(t) the equations of motion read
//!
//! ```text
//! du/dt = -b sqrt(c) v sin((1+c)t) / G            - x0dot
//! dv/dt = (b sqrt(c) u sin((1+c)t) - a b sqrt(c) u^2 sin(ct)) / G - y0dot
//! ```
//!
//! where G = G2 + G3 + G4 is the guidance denominator expanded about the
//! nodal point. The expanded form avoids the catastrophic cancellation the
//! rest-frame polynomial suffers near the node.

use crate::error::{Error, Result};
use crate::field::{nodal_point, NodalFrame, G_FLOOR};
use crate::params::ModelParams;
use crate::rk::{integrate, StepAction, StepOpts};

/// Trapezoid points for the angular averages; the integrands are low-degree
/// trigonometric polynomials in phi, so this is spectrally exact.
pub const QUADRATURE_POINTS: usize = 2048;

/// Newton refinement target for the frozen-field stationary point.
const XPT_RESIDUAL_TOL: f64 = 1e-12;
const XPT_NEWTON_MAX: usize = 50;
/// Eigenvalues below this are degenerate saddles.
const DEGENERATE_LAMBDA: f64 = 1e-10;
/// Hopf scan grid step before bisection.
const HOPF_GRID_STEP: f64 = 1e-2;
/// Event times refined to this width.
const HOPF_REFINE_TOL: f64 = 1e-9;
/// Limit-cycle bisection tolerance in radius.
const CYCLE_RADIUS_TOL: f64 = 1e-8;
/// A bisection candidate counts as a cycle only if its one-revolution drift
/// residual closes to this level; at the separatrix the return map is
/// discontinuous and the residual stays finite.
const CYCLE_CLOSURE_TOL: f64 = 1e-6;
/// Winding threshold (radians) that marks a branch as spiral-connected.
const SPIRAL_WINDING_MIN: f64 = 4.0 * std::f64::consts::PI;

/// Moving-frame coordinates relative to the instantaneous nodal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingState {
    pub u: f64,
    pub v: f64,
    pub t: f64,
}

impl MovingState {
    pub fn radius(&self) -> f64 {
        self.u.hypot(self.v)
    }

    pub fn angle(&self) -> f64 {
        self.v.atan2(self.u)
    }
}

/// The frozen-time moving-frame field at a fixed t0, with the nodal data
/// precomputed. All the stationary-point and flow-chart machinery runs on
/// this struct.
#[derive(Debug, Clone, Copy)]
pub struct FrozenFrame {
    pub nf: NodalFrame,
    a: f64,
    bq: f64,
    s1: f64,
    c1: f64,
    sc: f64,
}

impl FrozenFrame {
    pub fn new(p: &ModelParams, t0: f64) -> Result<Self> {
        let nf = nodal_point(p, t0)?;
        let th = (1.0 + p.c) * t0;
        Ok(Self { nf, a: p.a, bq: p.bq(), s1: th.sin(), c1: th.cos(), sc: (p.c * t0).sin() })
    }

    /// G2 + G3 + G4: the guidance denominator expanded about the node.
    pub fn g(&self, u: f64, v: f64) -> f64 {
        let (x0, bq, c1) = (self.nf.x0, self.bq, self.c1);
        let g2 = u * u / (x0 * x0) - 2.0 * bq * u * v * c1 + bq * bq * x0 * x0 * v * v;
        let g3 = -(2.0 * bq / x0) * u * u * v * c1 + 2.0 * bq * bq * x0 * u * v * v;
        let g4 = bq * bq * u * u * v * v;
        g2 + g3 + g4
    }

    /// Frozen-time field (du/dt', dv/dt') including the -x0dot, -y0dot frame
    /// terms.
    pub fn field(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let g = self.g(u, v);
        if g <= G_FLOOR {
            return Err(Error::NearNode { t: self.nf.t, g });
        }
        let n1 = -self.bq * v * self.s1;
        let n2 = self.bq * u * self.s1 - self.a * self.bq * u * u * self.sc;
        Ok((n1 / g - self.nf.x0dot, n2 / g - self.nf.y0dot))
    }

    /// Analytic Jacobian of the frozen field.
    pub fn jacobian(&self, u: f64, v: f64) -> Result<[[f64; 2]; 2]> {
        let g = self.g(u, v);
        if g <= G_FLOOR {
            return Err(Error::NearNode { t: self.nf.t, g });
        }
        let (x0, bq, c1) = (self.nf.x0, self.bq, self.c1);
        let gu = 2.0 * u / (x0 * x0) - 2.0 * bq * v * c1 - (4.0 * bq / x0) * u * v * c1
            + 2.0 * bq * bq * x0 * v * v
            + 2.0 * bq * bq * u * v * v;
        let gv = -2.0 * bq * u * c1 + 2.0 * bq * bq * x0 * x0 * v - (2.0 * bq / x0) * u * u * c1
            + 4.0 * bq * bq * x0 * u * v
            + 2.0 * bq * bq * u * u * v;
        let n1 = -bq * v * self.s1;
        let n2 = bq * u * self.s1 - self.a * bq * u * u * self.sc;
        let n2u = bq * self.s1 - 2.0 * self.a * bq * u * self.sc;
        let g2 = g * g;
        Ok([
            [-n1 * gu / g2, (-bq * self.s1 * g - n1 * gv) / g2],
            [(n2u * g - n2 * gu) / g2, -n2 * gv / g2],
        ])
    }
}

/// Moving-frame field at (u, v, t); equals the rest-frame velocity at the
/// shifted point minus the nodal velocity.
pub fn moving_frame_field(p: &ModelParams, u: f64, v: f64, t: f64) -> Result<(f64, f64)> {
    FrozenFrame::new(p, t)?.field(u, v)
}

/// G evaluated through the moving-frame expansion G2 + G3 + G4.
pub fn moving_g(p: &ModelParams, u: f64, v: f64, t: f64) -> Result<f64> {
    Ok(FrozenFrame::new(p, t)?.g(u, v))
}

/// Leading-order angular rate d(phi)/dt' of the adiabatic motion around the
/// nodal point. The denominator is the squared diagonal of a parallelepiped
/// with sides |cos(phi)/x0| and |b sqrt(c) x0 sin(phi)| at angle (1+c)t0, so
/// it is strictly positive; the sign of the rate is the sign of
/// b sqrt(c) sin((1+c)t0) for every phi.
pub fn adiabatic_phi_rate(p: &ModelParams, phi: f64, t0: f64) -> Result<f64> {
    let fr = FrozenFrame::new(p, t0)?;
    let x0 = fr.nf.x0;
    let (cp, sp) = (phi.cos(), phi.sin());
    let g2 = cp * cp / (x0 * x0) - 2.0 * fr.bq * cp * sp * fr.c1 + fr.bq * fr.bq * x0 * x0 * sp * sp;
    Ok(fr.bq * fr.s1 / g2)
}

/// Closed-form phi-average of the cubic radial coefficient.
///
/// With K = b^2 c x0^4 and s = sin((1+c)t0):
///
/// ```text
/// <f3> = [ x0 x0dot (1-K) + x0dot y0dot (K^2-1)/(b sqrt(c) s)
///          - x0^2 (x0dot^2 - y0dot^2) (1+K) cot((1+c)t0) ] / (4 b sqrt(c) s x0^4)
/// ```
///
/// The sign of the K-term on x0 x0dot follows from averaging the integrand of
/// [`f3_mean_quadrature`]; the two routes agree to spectral accuracy.
pub fn f3_mean(p: &ModelParams, t0: f64) -> Result<f64> {
    let nf = nodal_point(p, t0)?;
    f3_mean_from_frame(p, &nf)
}

pub(crate) fn f3_mean_from_frame(p: &ModelParams, nf: &NodalFrame) -> Result<f64> {
    let bq = p.bq();
    let th = (1.0 + p.c) * nf.t;
    let (s, co) = (th.sin(), th.cos());
    if s.abs() < crate::field::TOL_DIV {
        return Err(Error::NodalAtInfinity { t: nf.t });
    }
    let x0 = nf.x0;
    let x04 = x0 * x0 * x0 * x0;
    let k = bq * bq * x04;
    let bracket = x0 * nf.x0dot * (1.0 - k)
        + nf.x0dot * nf.y0dot * (k * k - 1.0) / (bq * s)
        - x0 * x0 * (nf.x0dot * nf.x0dot - nf.y0dot * nf.y0dot) * (co / s) * (1.0 + k);
    Ok(bracket / (4.0 * bq * s * x04))
}

/// Trapezoid phi-averages of the f2 and f3 integrands of the radial equation
/// dR/dphi = f2 R^2 + f3 R^3 + O(R^4). Returns (<f2>, <f3>); <f2> vanishes
/// identically.
pub fn f2_f3_quadrature(p: &ModelParams, t0: f64, n: usize) -> Result<(f64, f64)> {
    let nf = nodal_point(p, t0)?;
    let bq = p.bq();
    let th = (1.0 + p.c) * t0;
    let (s1, c1) = (th.sin(), th.cos());
    let sc = (p.c * t0).sin();
    let (x0, x0d, y0d) = (nf.x0, nf.x0dot, nf.y0dot);
    let b_cap = bq * s1;
    let mut sum2 = 0.0;
    let mut sum3 = 0.0;
    for i in 0..n {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        let (cp, sp) = (phi.cos(), phi.sin());
        let a_cap = p.a * bq * cp * cp * sp * sc;
        let c_cap = p.a * bq * cp * cp * cp * sc;
        let g2 = cp * cp / (x0 * x0) - 2.0 * bq * sp * cp * c1 + bq * bq * x0 * x0 * sp * sp;
        let g3 = -(2.0 * bq / x0) * c1 * cp * cp * sp + 2.0 * bq * bq * x0 * cp * sp * sp;
        let f2 = (-a_cap - x0d * g2 * cp - y0d * g2 * sp) / b_cap;
        let f3 = f2 * (c_cap / b_cap + y0d * (g2 / b_cap) * cp - x0d * (g2 / b_cap) * sp)
            + (-x0d * g3 * cp - y0d * g3 * sp) / b_cap;
        sum2 += f2;
        sum3 += f3;
    }
    Ok((sum2 / n as f64, sum3 / n as f64))
}

/// Solution R(phi) = R0 / sqrt(1 - 2 R0^2 f3 (phi - phi0)) of the averaged
/// radial equation dR/dphi = f3 R^3 — a spiral terminating at the nodal
/// point.
pub fn spiral_radius(r0: f64, phi0: f64, phi: f64, f3: f64) -> Result<f64> {
    let arg = 1.0 - 2.0 * r0 * r0 * f3 * (phi - phi0);
    if arg <= 0.0 {
        return Err(Error::DomainExceeded { arg });
    }
    Ok(r0 / arg.sqrt())
}

/// Saddle stationary point of the frozen-time moving-frame field.
#[derive(Debug, Clone, Copy)]
pub struct XPoint {
    pub t0: f64,
    pub u0: f64,
    pub v0: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eigvec_plus: [f64; 2],
    pub eigvec_minus: [f64; 2],
    /// Distance to the nodal point.
    pub d0: f64,
    /// Max-norm of the frozen field at the converged point.
    pub residual: f64,
    /// Frozen-field Jacobian at the point (symmetric up to rounding).
    pub jac: [[f64; 2]; 2],
}

/// Residual the Newton iteration can be expected to reach: the field
/// subtracts the nodal velocities, so the evaluation noise floor scales with
/// their magnitude.
fn residual_floor(nf: &NodalFrame) -> f64 {
    XPT_RESIDUAL_TOL.max(1e-14 * (1.0 + nf.x0dot.abs() + nf.y0dot.abs()))
}

fn newton_refine(fr: &FrozenFrame, mut u: f64, mut v: f64) -> Option<(f64, f64, f64)> {
    let mut best: Option<(f64, f64, f64)> = None;
    let mut stagnant = 0;
    for _ in 0..XPT_NEWTON_MAX {
        let (f1, f2) = match fr.field(u, v) {
            Ok(f) => f,
            Err(_) => return best,
        };
        let res = f1.abs().max(f2.abs());
        match best {
            Some((_, _, r)) if res >= r => {
                // bouncing around the rounding floor
                stagnant += 1;
                if stagnant >= 2 {
                    return best;
                }
            }
            _ => {
                stagnant = 0;
                best = Some((u, v, res));
            }
        }
        let j = fr.jacobian(u, v).ok()?;
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return best;
        }
        let mut du = (-f1 * j[1][1] + f2 * j[0][1]) / det;
        let mut dv = (-f2 * j[0][0] + f1 * j[1][0]) / det;
        let norm = du.hypot(dv);
        if norm > 1.0 {
            du /= norm;
            dv /= norm;
        }
        u += du;
        v += dv;
        if !u.is_finite() || !v.is_finite() {
            return best;
        }
    }
    best
}

/// Eigen-decomposition of a (symmetrized) 2x2 Jacobian. The second
/// eigenvector is the exact perpendicular of the first, which is what
/// symmetry guarantees.
fn symmetric_eigen(j: &[[f64; 2]; 2]) -> (f64, f64, [f64; 2], [f64; 2]) {
    let a = j[0][0];
    let d = j[1][1];
    let off = 0.5 * (j[0][1] + j[1][0]);
    let tr = a + d;
    let disc = ((a - d) * 0.5).hypot(off);
    let lp = 0.5 * tr + disc;
    let lm = 0.5 * tr - disc;
    // (a - lp) x + off y = 0: pick the better-conditioned representation
    let v1 = [off, lp - a];
    let v2 = [lp - d, off];
    let raw = if v1[0].hypot(v1[1]) >= v2[0].hypot(v2[1]) { v1 } else { v2 };
    let n = raw[0].hypot(raw[1]);
    let ep = if n > 0.0 { [raw[0] / n, raw[1] / n] } else { [1.0, 0.0] };
    let em = [-ep[1], ep[0]];
    (lp, lm, ep, em)
}

fn accept_saddle(fr: &FrozenFrame, u: f64, v: f64, res: f64) -> Result<XPoint> {
    let d0 = u.hypot(v);
    let j = fr.jacobian(u, v)?;
    let (lp, lm, ep, em) = symmetric_eigen(&j);
    if lp.abs().min(lm.abs()) < DEGENERATE_LAMBDA {
        return Err(Error::DegenerateSaddle { t0: fr.nf.t, lambda: lp.abs().min(lm.abs()) });
    }
    if lp * lm >= 0.0 {
        return Err(Error::NoConvergence { context: "stationary point is not a saddle" });
    }
    Ok(XPoint {
        t0: fr.nf.t,
        u0: u,
        v0: v,
        lambda_plus: lp,
        lambda_minus: lm,
        eigvec_plus: ep,
        eigvec_minus: em,
        d0,
        residual: res,
        jac: j,
    })
}

/// Locate the X-point at frozen time t0.
///
/// The closed-form seed u0 = K/L (with v0 from the exact division of the two
/// stationarity equations) is used when it is finite and lands near the node;
/// its denominator L crosses zero at isolated times, so a ring of fallback
/// seeds around the node backs it up. Among converged saddles the one closest
/// to the nodal point is returned.
pub fn xpoint_locate(p: &ModelParams, t0: f64) -> Result<XPoint> {
    let fr = FrozenFrame::new(p, t0)?;
    let nf = &fr.nf;
    let bq = p.bq();
    let mut seeds: Vec<(f64, f64)> = Vec::with_capacity(34);
    if nf.y0dot.abs() >= 1e-8 {
        let k_cap = bq * fr.s1;
        let l_cap = 2.0 * nf.x0dot * bq * fr.c1
            + nf.y0dot / (nf.x0 * nf.x0)
            + bq * bq * nf.x0 * nf.x0 * nf.x0dot * nf.x0dot / nf.y0dot
            + p.a * bq * fr.sc;
        if l_cap.abs() > 1e-12 {
            let u0 = k_cap / l_cap;
            let v0 = (nf.x0dot / nf.y0dot) * (p.a * u0 * u0 * fr.sc / fr.s1 - u0);
            if u0.is_finite() && v0.is_finite() && u0.hypot(v0) < 10.0 * nf.x0.abs().max(1.0) {
                seeds.push((u0, v0));
            }
        }
    }
    let r_scale = 0.1 * nf.x0.abs().max(0.5);
    for radius in [r_scale, 3.0 * r_scale, 9.0 * r_scale, 27.0 * r_scale] {
        for k in 0..8 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            seeds.push((radius * phi.cos(), radius * phi.sin()));
        }
    }

    let accept = residual_floor(nf);
    let mut best: Option<XPoint> = None;
    for (su, sv) in seeds {
        if let Some((u, v, res)) = newton_refine(&fr, su, sv) {
            if res >= accept || u.hypot(v) < 1e-8 {
                continue;
            }
            if let Ok(xp) = accept_saddle(&fr, u, v, res) {
                if best.as_ref().map_or(true, |b| xp.d0 < b.d0) {
                    best = Some(xp);
                }
            }
        }
    }
    best.ok_or(Error::NoConvergence { context: "no saddle converged from any seed" })
}

/// Newton with an explicit warm-start seed; used for continuation along t0
/// sweeps. Falls back to the full search when the seed does not converge to
/// a saddle.
pub fn xpoint_locate_seeded(p: &ModelParams, t0: f64, seed: (f64, f64)) -> Result<XPoint> {
    let fr = FrozenFrame::new(p, t0)?;
    let accept = residual_floor(&fr.nf);
    if let Some((u, v, res)) = newton_refine(&fr, seed.0, seed.1) {
        if res < accept && u.hypot(v) >= 1e-8 {
            if let Ok(xp) = accept_saddle(&fr, u, v, res) {
                return Ok(xp);
            }
        }
    }
    xpoint_locate(p, t0)
}

/// Which invariant manifold a branch belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

/// How a traced branch ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchEnd {
    /// Wound down to the nodal point (or onto a cycle around it).
    Spiral,
    /// Left the chart window (recorded, not fatal).
    Escaped,
    /// Arc-length budget exhausted.
    LengthBudget,
}

/// One traced manifold branch in (u, v).
#[derive(Debug, Clone)]
pub struct ManifoldBranch {
    pub kind: ManifoldKind,
    /// +1/-1: which side of the X-point along the eigenvector.
    pub side: i8,
    pub points: Vec<(f64, f64)>,
    /// Unwrapped angle accumulated about the nodal point, radians.
    pub winding: f64,
    pub end: BranchEnd,
}

/// Attractor/repellor character of the nodal point in the adiabatic picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeCharacter {
    Attractor,
    Repellor,
}

/// The instantaneous nodal-point / X-point complex.
#[derive(Debug, Clone)]
pub struct FlowChart {
    pub t0: f64,
    pub xpoint: XPoint,
    pub branches: Vec<ManifoldBranch>,
    /// Index into `branches` of the one spiral-connected branch.
    pub spiral_branch: usize,
    pub node: NodeCharacter,
    pub f3: f64,
}

fn trace_branch(
    fr: &FrozenFrame,
    start: (f64, f64),
    forward: bool,
    d0: f64,
) -> Result<(Vec<(f64, f64)>, f64, BranchEnd)> {
    let box_half = 6.0 * d0.max(1.0);
    let r_capture = 0.03 * d0.max(0.1);
    let s_max = 80.0 * d0.max(1.0);
    let sign = if forward { 1.0 } else { -1.0 };
    let rhs = |_s: f64, z: &[f64; 2]| -> Result<[f64; 2]> {
        let (fu, fv) = fr.field(z[0], z[1])?;
        let n = fu.hypot(fv);
        if n < 1e-14 {
            return Err(Error::NoConvergence { context: "stagnation while tracing manifold" });
        }
        Ok([sign * fu / n, sign * fv / n])
    };
    let mut points = vec![start];
    let mut winding = 0.0f64;
    let mut phi_prev = start.1.atan2(start.0);
    let mut end = BranchEnd::LengthBudget;
    let opts = StepOpts { rtol: 1e-8, atol: 1e-10, h_max: 5e-3, h_min: 1e-13, h_init: 1e-4 };
    let res = integrate(rhs, 0.0, [start.0, start.1], s_max, &opts, |_step, z| {
        points.push((z[0], z[1]));
        let phi = z[1].atan2(z[0]);
        let mut dphi = phi - phi_prev;
        while dphi > std::f64::consts::PI {
            dphi -= 2.0 * std::f64::consts::PI;
        }
        while dphi < -std::f64::consts::PI {
            dphi += 2.0 * std::f64::consts::PI;
        }
        winding += dphi;
        phi_prev = phi;
        let r = z[0].hypot(z[1]);
        if r < r_capture {
            end = BranchEnd::Spiral;
            return Ok(StepAction::Stop);
        }
        if z[0].abs() > box_half || z[1].abs() > box_half {
            end = BranchEnd::Escaped;
            return Ok(StepAction::Stop);
        }
        Ok(StepAction::Continue)
    });
    match res {
        Ok(_) => Ok((points, winding, end)),
        // winding into the node can legitimately stall the normalized field
        Err(Error::NearNode { .. }) | Err(Error::NoConvergence { .. }) => {
            Ok((points, winding, BranchEnd::Spiral))
        }
        Err(e) => Err(e),
    }
}

/// Trace the four invariant-manifold branches of the frozen-t0 field and
/// identify the spiral connection.
///
/// Unstable branches are traced along the flow, stable branches against it,
/// from offsets of 1e-4 along each eigenvector. Exactly one branch winds
/// onto the nodal spiral (or onto the limit cycle around the node when one
/// exists); it is the branch with the largest unwrapped winding.
pub fn flow_chart(p: &ModelParams, t0: f64) -> Result<FlowChart> {
    let xp = xpoint_locate(p, t0)?;
    let fr = FrozenFrame::new(p, t0)?;
    let f3 = f3_mean_from_frame(p, &fr.nf)?;
    let mut branches = Vec::with_capacity(4);
    for (kind, vec) in [(ManifoldKind::Unstable, xp.eigvec_plus), (ManifoldKind::Stable, xp.eigvec_minus)]
    {
        for side in [1i8, -1i8] {
            let start = (
                xp.u0 + side as f64 * 1e-4 * vec[0],
                xp.v0 + side as f64 * 1e-4 * vec[1],
            );
            let forward = kind == ManifoldKind::Unstable;
            let (points, winding, end) = trace_branch(&fr, start, forward, xp.d0)?;
            branches.push(ManifoldBranch { kind, side, points, winding, end });
        }
    }
    let spiral_branch = branches
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.winding.abs().total_cmp(&b.winding.abs()))
        .map(|(i, _)| i)
        .unwrap();
    let rot = (p.bq() * fr.s1).signum();
    let node = if f3 * rot < 0.0 { NodeCharacter::Attractor } else { NodeCharacter::Repellor };
    Ok(FlowChart { t0, xpoint: xp, branches, spiral_branch, node, f3 })
}

/// Does the identified spiral branch carry enough winding to count.
pub fn spiral_winding_ok(chart: &FlowChart) -> bool {
    chart.branches[chart.spiral_branch].winding.abs() >= SPIRAL_WINDING_MIN
}

/// Kinds of events found by [`hopf_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfEventKind {
    /// Sign change of <f3>: the nodal point flips attractor/repellor.
    F3Zero,
    /// sin((1+c)t0) = 0: the X-point collides with the nodal point (which is
    /// itself at infinity at that instant).
    Collision,
}

#[derive(Debug, Clone, Copy)]
pub struct HopfEvent {
    pub t: f64,
    pub kind: HopfEventKind,
}

/// Scan [t_lo, t_hi] for <f3> zeros and node/X-point collisions, each refined
/// by bisection to 1e-9 in t. Grid step 1e-2; brackets containing a
/// divergence of the nodal point are skipped rather than reported as zeros.
pub fn hopf_scan(p: &ModelParams, t_lo: f64, t_hi: f64) -> Vec<HopfEvent> {
    assert!(t_lo < t_hi);
    let mut events = Vec::new();
    let omega1 = 1.0 + p.c;

    // collisions: roots of sin((1+c)t), bisected on the bracketing grid
    let sin1 = |t: f64| (omega1 * t).sin();
    let scan_roots = |f: &dyn Fn(f64) -> f64, kind: HopfEventKind, events: &mut Vec<HopfEvent>| {
        let n = ((t_hi - t_lo) / HOPF_GRID_STEP).ceil() as usize;
        for i in 0..n {
            let a = t_lo + i as f64 * HOPF_GRID_STEP;
            let b = (a + HOPF_GRID_STEP).min(t_hi);
            let (fa, fb) = (f(a), f(b));
            if !(fa.is_finite() && fb.is_finite()) || fa == 0.0 || fa * fb > 0.0 {
                continue;
            }
            if kind == HopfEventKind::F3Zero {
                // skip brackets holding a nodal divergence: f3 flips sign
                // through infinity there, not through zero
                let crosses = |w: f64| ((w * a) / std::f64::consts::PI).floor()
                    != ((w * b) / std::f64::consts::PI).floor();
                if crosses(omega1) || crosses(p.c) {
                    continue;
                }
            }
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > HOPF_REFINE_TOL {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if !fm.is_finite() {
                    break;
                }
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            events.push(HopfEvent { t: 0.5 * (lo + hi), kind });
        }
    };
    let f3_of = |t: f64| f3_mean(p, t).unwrap_or(f64::NAN);
    scan_roots(&f3_of, HopfEventKind::F3Zero, &mut events);
    scan_roots(&sin1, HopfEventKind::Collision, &mut events);
    events.sort_by(|a, b| a.t.total_cmp(&b.t));
    events
}

/// Result of the frozen-time limit-cycle search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitCycle {
    Present { radius: f64 },
    Absent,
}

enum Revolution {
    Returned { radius: f64 },
    /// Left the neighborhood or stalled: counts as outward drift.
    NoReturn,
    /// Fell into the node: counts as inward drift.
    Inward,
}

fn revolve(fr: &FrozenFrame, r_start: f64, d0: f64) -> Revolution {
    let rhs = |_t: f64, z: &[f64; 2]| -> Result<[f64; 2]> {
        let (fu, fv) = fr.field(z[0], z[1])?;
        Ok([fu, fv])
    };
    let opts = StepOpts { rtol: 1e-10, atol: 1e-12, h_max: 1e-2, h_min: 1e-14, h_init: 1e-4 };
    let escape = 20.0 * d0.max(1.0);
    let target = 2.0 * std::f64::consts::PI;
    let mut phi_acc = 0.0f64;
    let mut phi_prev = 0.0f64;
    let mut prev_pt = (r_start, 0.0f64);
    let mut outcome: Option<Revolution> = None;
    let res = integrate(rhs, 0.0, [r_start, 0.0], 2000.0, &opts, |step, z| {
        let phi = z[1].atan2(z[0]);
        let mut dphi = phi - phi_prev;
        while dphi > std::f64::consts::PI {
            dphi -= 2.0 * std::f64::consts::PI;
        }
        while dphi < -std::f64::consts::PI {
            dphi += 2.0 * std::f64::consts::PI;
        }
        if (phi_acc + dphi).abs() >= target {
            // refine the 2pi crossing inside this step by bisection on the
            // dense output; the per-step angle increment is < pi so the
            // wrapped difference from the step start is unambiguous
            let (mut lo, mut hi) = (step.t0, step.t1);
            let phi_start = prev_pt.1.atan2(prev_pt.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let zm = step.interp(mid);
                let mut d = zm[1].atan2(zm[0]) - phi_start;
                while d > std::f64::consts::PI {
                    d -= 2.0 * std::f64::consts::PI;
                }
                while d < -std::f64::consts::PI {
                    d += 2.0 * std::f64::consts::PI;
                }
                if (phi_acc + d).abs() >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-14 {
                    break;
                }
            }
            let zf = step.interp(0.5 * (lo + hi));
            outcome = Some(Revolution::Returned { radius: zf[0].hypot(zf[1]) });
            return Ok(StepAction::Stop);
        }
        phi_acc += dphi;
        phi_prev = phi;
        prev_pt = (z[0], z[1]);
        if z[0].hypot(z[1]) > escape {
            outcome = Some(Revolution::NoReturn);
            return Ok(StepAction::Stop);
        }
        Ok(StepAction::Continue)
    });
    match (res, outcome) {
        (_, Some(o)) => o,
        (Err(Error::NearNode { .. }), None) => Revolution::Inward,
        (Ok(_), None) => Revolution::NoReturn, // time budget spent
        (Err(_), None) => Revolution::NoReturn,
    }
}

/// Radial drift of the frozen flow after one full revolution from the ray
/// phi = 0 at radius r; positive means outward.
fn drift(fr: &FrozenFrame, r: f64, d0: f64) -> f64 {
    match revolve(fr, r, d0) {
        Revolution::Returned { radius } => radius - r,
        Revolution::NoReturn => f64::INFINITY,
        Revolution::Inward => f64::NEG_INFINITY,
    }
}

/// Search [r_lo, r_hi] (radii from the nodal point along phi = 0) for the
/// frozen-t0 limit cycle by bisecting the sign of the one-revolution radial
/// drift of the full (non-averaged) field.
///
/// `Absent` is returned when the drift sign is uniform, and also when the
/// bisection converges onto the separatrix instead of a closed orbit (there
/// the return map is discontinuous and the candidate never closes).
pub fn limit_cycle_find(p: &ModelParams, t0: f64, r_lo: f64, r_hi: f64) -> Result<LimitCycle> {
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(Error::InvalidArgument("need 0 < r_lo < r_hi"));
    }
    let fr = FrozenFrame::new(p, t0)?;
    let d0 = xpoint_locate(p, t0).map(|x| x.d0).unwrap_or(1.0);
    let d_lo = drift(&fr, r_lo, d0);
    let d_hi = drift(&fr, r_hi, d0);
    if d_lo.signum() == d_hi.signum() {
        return Ok(LimitCycle::Absent);
    }
    let (mut lo, mut hi, mut dlo) = (r_lo, r_hi, d_lo);
    while hi - lo > CYCLE_RADIUS_TOL {
        let mid = 0.5 * (lo + hi);
        let dm = drift(&fr, mid, d0);
        if dlo.signum() == dm.signum() {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let closure = drift(&fr, r, d0);
    if closure.abs() < CYCLE_CLOSURE_TOL * d0.max(1.0) {
        Ok(LimitCycle::Present { radius: r })
    } else {
        Ok(LimitCycle::Absent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{eval_g, velocity, PhaseState};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reference() -> ModelParams {
        ModelParams::reference()
    }

    fn admissible(p: &ModelParams, t: f64) -> bool {
        ((1.0 + p.c) * t).sin().abs() > 0.05 && (p.c * t).sin().abs() > 0.05
    }

    #[test]
    fn frame_consistency_with_rest_frame_velocity() {
        // safe points: away from the node (the rest-frame G route loses
        // digits to cancellation there) and with a moderate nodal position
        let p = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut n = 0;
        while n < 200 {
            let t = rng.gen_range(0.5..100.0);
            if !admissible(&p, t) {
                continue;
            }
            let nf = nodal_point(&p, t).unwrap();
            if nf.x0.abs() > 1.5 || nf.y0.abs() > 1.5 {
                continue;
            }
            let u = rng.gen_range(-0.7..0.7);
            let v = rng.gen_range(-0.7..0.7);
            let s = PhaseState::new(nf.x0 + u, nf.y0 + v, t);
            if eval_g(&p, &s) < 5e-2 {
                continue;
            }
            let (du, dv) = moving_frame_field(&p, u, v, t).unwrap();
            let vel = velocity(&p, &s).unwrap();
            let scale = vel.vx.abs().max(vel.vy.abs()).max(nf.x0dot.abs()).max(nf.y0dot.abs()).max(1.0);
            assert!(
                ((du + nf.x0dot) - vel.vx).abs() <= 1e-12 * scale,
                "t={t} u={u} v={v}"
            );
            assert!(((dv + nf.y0dot) - vel.vy).abs() <= 1e-12 * scale);
            n += 1;
        }
    }

    #[test]
    fn moving_g_matches_rest_frame_g() {
        let p = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut n = 0;
        while n < 200 {
            let t = rng.gen_range(0.5..100.0);
            if !admissible(&p, t) {
                continue;
            }
            let nf = nodal_point(&p, t).unwrap();
            if nf.x0.abs() > 2.0 || nf.y0.abs() > 2.0 {
                continue;
            }
            let u = rng.gen_range(-0.8..0.8);
            let v = rng.gen_range(-0.8..0.8);
            let g_frame = moving_g(&p, u, v, t).unwrap();
            let g_rest = eval_g(&p, &PhaseState::new(nf.x0 + u, nf.y0 + v, t));
            // the rest-frame route cancels terms of size ~ (1 + |x0 y0|)^2
            let cancel = (1.0 + (p.a * nf.x0).abs() + (p.bq() * nf.x0 * nf.y0).abs()).powi(2);
            assert!(
                (g_frame - g_rest).abs() <= 1e-12 * cancel.max(g_rest),
                "t={t}: {g_frame} vs {g_rest}"
            );
            n += 1;
        }
    }

    #[test]
    fn field_vanishes_at_xpoint() {
        let p = reference();
        let xp = xpoint_locate(&p, 10.0).unwrap();
        let (fu, fv) = moving_frame_field(&p, xp.u0, xp.v0, 10.0).unwrap();
        assert!(fu.abs() < 1e-12 && fv.abs() < 1e-12);
        assert!(xp.residual < 1e-12);
    }

    #[test]
    fn adiabatic_rate_positive_denominator_and_constant_sign() {
        let p = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut n = 0;
        while n < 10_000 {
            let t0 = rng.gen_range(0.5..1000.0);
            if !admissible(&p, t0) {
                continue;
            }
            let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
            let rate = adiabatic_phi_rate(&p, phi, t0).unwrap();
            assert!(rate.is_finite());
            let expect_sign = ((1.0 + p.c) * t0).sin().signum();
            assert_eq!(rate.signum(), expect_sign, "t0={t0} phi={phi}");
            n += 1;
        }
    }

    #[test]
    fn adiabatic_rate_sign_flips_across_collision() {
        let p = reference();
        let t_col = std::f64::consts::PI / (1.0 + p.c);
        let before = adiabatic_phi_rate(&p, 1.0, t_col - 0.01).unwrap();
        let after = adiabatic_phi_rate(&p, 1.0, t_col + 0.01).unwrap();
        assert!(before * after < 0.0);
    }

    #[test]
    fn f2_average_vanishes_and_f3_matches_quadrature() {
        let p = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut n = 0;
        while n < 100 {
            let t0 = rng.gen_range(0.5..1000.0);
            if !admissible(&p, t0) {
                continue;
            }
            let (f2, f3q) = f2_f3_quadrature(&p, t0, QUADRATURE_POINTS).unwrap();
            assert!(f2.abs() < 1e-10, "<f2> = {f2:e} at t0 = {t0}");
            let f3c = f3_mean(&p, t0).unwrap();
            assert!(
                (f3c - f3q).abs() <= 1e-6 * f3c.abs().max(1e-12),
                "t0={t0}: closed {f3c:e} vs quad {f3q:e}"
            );
            n += 1;
        }
    }

    #[test]
    fn spiral_radius_identities() {
        // f3 = 0: circles
        assert_eq!(spiral_radius(0.4, 0.0, 7.0, 0.0).unwrap(), 0.4);
        // derivative identity dR/dphi = f3 R^3 at random points
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let r0: f64 = rng.gen_range(0.05..0.5);
            let f3: f64 = rng.gen_range(-2.0..2.0);
            let phi: f64 = rng.gen_range(-0.3..0.3);
            if 1.0 - 2.0 * r0 * r0 * f3 * phi <= 0.1 {
                continue;
            }
            let h = 1e-6;
            let rp = spiral_radius(r0, 0.0, phi + h, f3).unwrap();
            let rm = spiral_radius(r0, 0.0, phi - h, f3).unwrap();
            let r = spiral_radius(r0, 0.0, phi, f3).unwrap();
            let want = f3 * r * r * r;
            assert!(((rp - rm) / (2.0 * h) - want).abs() < 1e-6 * want.abs().max(1e-6));
        }
        // attractor case: f3 < 0, phi -> +inf drives R -> 0
        let r_far = spiral_radius(0.3, 0.0, 1e6, -1.0).unwrap();
        assert!(r_far < 1e-3);
        // domain exceeded on the other side
        assert!(matches!(
            spiral_radius(0.3, 0.0, 1e6, 1.0),
            Err(Error::DomainExceeded { .. })
        ));
    }

    #[test]
    fn xpoint_at_t10_matches_paper_distance() {
        let p = reference();
        let xp = xpoint_locate(&p, 10.0).unwrap();
        assert!((xp.d0 - 0.9).abs() < 0.1, "d0 = {}", xp.d0);
        assert!(xp.lambda_plus > 0.0 && xp.lambda_minus < 0.0);
        // symmetric Jacobian
        let scale = xp.jac.iter().flatten().map(|v| v.abs()).fold(0.0f64, f64::max);
        assert!((xp.jac[0][1] - xp.jac[1][0]).abs() <= 1e-10 * scale);
        // eigenvectors orthogonal
        let dot = xp.eigvec_plus[0] * xp.eigvec_minus[0] + xp.eigvec_plus[1] * xp.eigvec_minus[1];
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn xpoint_saddle_sweep() {
        let p = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut n = 0;
        while n < 100 {
            let t0 = rng.gen_range(0.5..1000.0);
            if !admissible(&p, t0) {
                continue;
            }
            let xp = xpoint_locate(&p, t0).unwrap();
            assert!(xp.residual < 1e-12, "t0={t0} residual {:e}", xp.residual);
            assert!(xp.lambda_plus * xp.lambda_minus < 0.0);
            n += 1;
        }
    }

    #[test]
    fn xpoint_collides_with_node_near_collision_times() {
        // d0 -> 0 as t0 approaches a root of sin((1+c)t); below dt ~ 0.01 the
        // X-point sinks under the G floor and is numerically indistinct from
        // the node
        let p = reference();
        let t_col = 95.0 * std::f64::consts::PI / (1.0 + p.c); // ~174.83
        let mut prev = f64::INFINITY;
        for dt in [0.5, 0.2, 0.05] {
            let xp = xpoint_locate(&p, t_col + dt).unwrap();
            assert!(xp.d0 < prev, "dt={dt}: d0 = {}", xp.d0);
            prev = xp.d0;
        }
        assert!(prev < 1e-4);
    }

    #[test]
    fn flow_chart_topology_at_t10() {
        let p = reference();
        let chart = flow_chart(&p, 10.0).unwrap();
        assert!(spiral_winding_ok(&chart));
        // exactly one branch carries spiral-level winding
        let heavy: Vec<_> = chart
            .branches
            .iter()
            .filter(|b| b.winding.abs() >= SPIRAL_WINDING_MIN)
            .collect();
        assert_eq!(heavy.len(), 1);
        // consistency: attractor <=> the spiral branch is unstable
        let kind = chart.branches[chart.spiral_branch].kind;
        match chart.node {
            NodeCharacter::Attractor => assert_eq!(kind, ManifoldKind::Unstable),
            NodeCharacter::Repellor => assert_eq!(kind, ManifoldKind::Stable),
        }
    }

    #[test]
    fn hopf_scan_collision_times_are_roots_of_sin() {
        let p = reference();
        let events = hopf_scan(&p, 174.0, 177.0);
        let collisions: Vec<f64> = events
            .iter()
            .filter(|e| e.kind == HopfEventKind::Collision)
            .map(|e| e.t)
            .collect();
        assert_eq!(collisions.len(), 2);
        for t in &collisions {
            let k = (t * (1.0 + p.c) / std::f64::consts::PI).round();
            let exact = k * std::f64::consts::PI / (1.0 + p.c);
            assert!((t - exact).abs() < 1e-8);
        }
        assert!((collisions[0] - 174.829).abs() < 1e-3);
        assert!((collisions[1] - 176.669).abs() < 1e-3);
    }

    #[test]
    fn degenerate_input_validation() {
        let p = reference();
        assert!(matches!(
            limit_cycle_find(&p, 175.76, -0.1, 0.5),
            Err(Error::InvalidArgument(_))
        ));
        // nodal divergence propagates
        let t_div = std::f64::consts::PI / (1.0 + p.c);
        assert!(matches!(
            f3_mean(&p, t_div),
            Err(Error::NodalAtInfinity { .. })
        ));
    }
}
