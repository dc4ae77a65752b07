//! Adaptive integration of the guidance equations, optionally together with
//! the variational (deviation-vector) dynamics, plus Lyapunov and pairwise
//! separation diagnostics.

use crate::error::{Error, Result};
use crate::field::{velocity, velocity_jacobian, PhaseState};
use crate::params::ModelParams;
use crate::rk::{integrate, StepAction, StepOpts};
use crate::Stats;

/// Deviation-vector norms outside [1e-100, 1e100] trigger renormalization to
/// unit length with the log absorbed into the running accumulator.
const RENORM_HI: f64 = 1e100;
const RENORM_LO: f64 = 1e-100;

/// Loosest and tightest accepted local error tolerances.
const TOL_RANGE: (f64, f64) = (1e-13, 1e-6);

/// Default output grid spacing, matching the stretching-window width.
pub const DT_OUT_DEFAULT: f64 = 0.1;

/// Deviation samples carried by a trajectory.
#[derive(Debug, Clone)]
pub struct DeviationTrack {
    /// Current (possibly renormalized) deviation components per sample.
    pub dxs: Vec<f64>,
    pub dys: Vec<f64>,
    /// ln |xi(t)/xi(0)| per sample, renormalizations folded in.
    pub log_norm: Vec<f64>,
}

/// Dense-sampled solution of the guidance equations.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dev: Option<DeviationTrack>,
    pub stats: Stats,
    pub tol: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Finite-time Lyapunov characteristic number sample.
#[derive(Debug, Clone, Copy)]
pub struct LyapunovRecord {
    pub t: f64,
    /// chi(t) = (1/t) ln |xi(t)/xi(0)|.
    pub chi: f64,
    pub log_norm_accum: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(Error::InvalidArgument("tol must lie in [1e-13, 1e-6]"));
    }
    Ok(())
}

fn output_times(t_end: f64, dt_out: f64) -> Vec<f64> {
    let n = (t_end / dt_out).round() as usize;
    let mut ts: Vec<f64> = (0..=n).map(|i| i as f64 * dt_out).collect();
    if let Some(last) = ts.last_mut() {
        // land the final sample exactly on t_end
        if (*last - t_end).abs() < dt_out * 0.5 {
            *last = t_end;
        } else if *last < t_end {
            ts.push(t_end);
        }
    }
    ts
}

/// Integrate one orbit from (x0, y0) over [0, t_end], sampled every
/// [`DT_OUT_DEFAULT`].
pub fn integrate_orbit(p: &ModelParams, x0: f64, y0: f64, t_end: f64, tol: f64) -> Result<Trajectory> {
    integrate_orbit_grid(p, x0, y0, t_end, tol, DT_OUT_DEFAULT)
}

/// Same as [`integrate_orbit`] with an explicit output grid spacing.
pub fn integrate_orbit_grid(
    p: &ModelParams,
    x0: f64,
    y0: f64,
    t_end: f64,
    tol: f64,
    dt_out: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    let s0 = PhaseState::new(x0, y0, 0.0);
    velocity(p, &s0)?; // G(x0, y0, 0) must be safe
    let ts = output_times(t_end, dt_out);
    let mut xs = Vec::with_capacity(ts.len());
    let mut ys = Vec::with_capacity(ts.len());
    xs.push(x0);
    ys.push(y0);
    let mut next = 1usize;

    let p = *p;
    let rhs = move |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let v = velocity(&p, &PhaseState::new(y[0], y[1], t))?;
        Ok([v.vx, v.vy])
    };
    let opts = StepOpts::for_tolerance(tol);
    let stats = integrate(rhs, 0.0, [x0, y0], t_end, &opts, |step, _y| {
        while next < ts.len() && ts[next] <= step.t1 + 1e-300 {
            let v = step.interp(ts[next]);
            xs.push(v[0]);
            ys.push(v[1]);
            next += 1;
        }
        Ok(StepAction::Continue)
    })?;
    let times = ts[..xs.len()].to_vec();
    Ok(Trajectory { times, xs, ys, dev: None, stats, tol })
}

/// Integrate an orbit together with its deviation vector.
///
/// The deviation obeys the variational equations with the analytic Jacobian
/// of the guidance field; renormalization events keep the stored components
/// representable while `log_norm` carries the exact growth bookkeeping.
pub fn integrate_with_deviation(
    p: &ModelParams,
    x0: f64,
    y0: f64,
    dx0: f64,
    dy0: f64,
    t_end: f64,
    tol: f64,
    dt_out: f64,
) -> Result<Trajectory> {
    check_tol(tol)?;
    if dx0 == 0.0 && dy0 == 0.0 {
        return Err(Error::InvalidArgument("deviation vector must be nonzero"));
    }
    let s0 = PhaseState::new(x0, y0, 0.0);
    velocity(p, &s0)?;

    let ts = output_times(t_end, dt_out);
    let n_out = ts.len();
    let mut xs = Vec::with_capacity(n_out);
    let mut ys = Vec::with_capacity(n_out);
    let mut dxs = Vec::with_capacity(n_out);
    let mut dys = Vec::with_capacity(n_out);
    let mut log_norm = Vec::with_capacity(n_out);
    let log_xi0 = dx0.hypot(dy0).ln();
    xs.push(x0);
    ys.push(y0);
    dxs.push(dx0);
    dys.push(dy0);
    log_norm.push(0.0);
    let mut next = 1usize;
    let mut accum = 0.0f64; // renormalization log bookkeeping

    let p = *p;
    let rhs = move |t: f64, y: &[f64; 4]| -> Result<[f64; 4]> {
        let s = PhaseState::new(y[0], y[1], t);
        let v = velocity(&p, &s)?;
        let j = velocity_jacobian(&p, &s)?;
        Ok([
            v.vx,
            v.vy,
            j[0][0] * y[2] + j[0][1] * y[3],
            j[1][0] * y[2] + j[1][1] * y[3],
        ])
    };
    let opts = StepOpts::for_tolerance(tol);
    let stats = integrate(rhs, 0.0, [x0, y0, dx0, dy0], t_end, &opts, |step, y| {
        while next < ts.len() && ts[next] <= step.t1 + 1e-300 {
            let v = step.interp(ts[next]);
            xs.push(v[0]);
            ys.push(v[1]);
            dxs.push(v[2]);
            dys.push(v[3]);
            log_norm.push(accum + v[2].hypot(v[3]).ln() - log_xi0);
            next += 1;
        }
        let norm = y[2].hypot(y[3]);
        if norm > RENORM_HI || norm < RENORM_LO {
            accum += norm.ln();
            y[2] /= norm;
            y[3] /= norm;
            return Ok(StepAction::StateModified);
        }
        Ok(StepAction::Continue)
    })?;
    let times = ts[..xs.len()].to_vec();
    Ok(Trajectory {
        times,
        xs,
        ys,
        dev: Some(DeviationTrack { dxs, dys, log_norm }),
        stats,
        tol,
    })
}

/// chi(t) over the trajectory's sample grid (t = 0 excluded).
pub fn finite_time_lcn(traj: &Trajectory) -> Vec<LyapunovRecord> {
    let dev = traj.dev.as_ref().expect("trajectory carries no deviations");
    traj.times
        .iter()
        .zip(&dev.log_norm)
        .filter(|(t, _)| **t > 0.0)
        .map(|(&t, &ln)| LyapunovRecord { t, chi: ln / t, log_norm_accum: ln })
        .collect()
}

/// Distance between two orbits integrated from nearby initial conditions,
/// on the shared output grid: (t, Delta S).
pub fn pair_separation(
    p: &ModelParams,
    init1: (f64, f64),
    init2: (f64, f64),
    t_end: f64,
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let t1 = integrate_orbit(p, init1.0, init1.1, t_end, tol)?;
    let t2 = integrate_orbit(p, init2.0, init2.1, t_end, tol)?;
    let n = t1.len().min(t2.len());
    Ok((0..n)
        .map(|i| {
            let ds = (t1.xs[i] - t2.xs[i]).hypot(t1.ys[i] - t2.ys[i]);
            (t1.times[i], ds)
        })
        .collect())
}

/// First times at which the separation "becomes of order" each level, read
/// as the first crossing of the running median over a window of the given
/// width (the raw signal fluctuates by an order of magnitude around its
/// staircase jumps).
pub fn staircase_times(sep: &[(f64, f64)], levels: &[f64], window: f64) -> Vec<Option<f64>> {
    let n = sep.len();
    let mut medians = Vec::with_capacity(n);
    let mut lo = 0usize;
    let mut hi = 0usize;
    let mut buf: Vec<f64> = Vec::new();
    for i in 0..n {
        let t = sep[i].0;
        while lo < n && sep[lo].0 < t - window / 2.0 {
            lo += 1;
        }
        while hi < n && sep[hi].0 <= t + window / 2.0 {
            hi += 1;
        }
        buf.clear();
        buf.extend(sep[lo..hi].iter().map(|s| s.1));
        buf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let m = buf.len();
        medians.push(if m % 2 == 1 { buf[m / 2] } else { 0.5 * (buf[m / 2 - 1] + buf[m / 2]) });
    }
    levels
        .iter()
        .map(|&lev| {
            medians
                .iter()
                .position(|&m| m >= lev)
                .map(|i| sep[i].0)
        })
        .collect()
}
