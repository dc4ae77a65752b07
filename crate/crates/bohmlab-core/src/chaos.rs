//! Windowed stretching-number statistics, encounter detection against the
//! nodal-point/X-point complex, distance-binned averages and power-law
//! fitting.

use crate::error::{Error, Result};
use crate::field::nodal_point;
use crate::frame::{xpoint_locate, xpoint_locate_seeded};
use crate::orbit::{LyapunovRecord, Trajectory};
use crate::params::ModelParams;

/// Stretching-window width.
pub const WINDOW_DT: f64 = 0.1;
/// Distance-bin width.
pub const BIN_DELTA: f64 = 2.5e-2;

/// classify_orbit thresholds, calibrated against the three reference orbits
/// of the model (policy, not paper content): chi above/below these marks a
/// chaotic/regular candidate, and the deviation must have grown by at least
/// `DECADE_LOG_GROWTH` e-folds over the last decade of t to count as chaotic.
const CHI_CHAOTIC: f64 = 1e-2;
const CHI_REGULAR: f64 = 2e-3;
const DECADE_LOG_GROWTH: f64 = 2.0;

/// One stretching window: local growth rate plus the minimum distances the
/// orbit reached from the nodal point (eps), the X-point (d), and the
/// node/X-point pair separation (d0) within the window.
#[derive(Debug, Clone, Copy)]
pub struct StretchWindow {
    pub t_i: f64,
    pub a_i: f64,
    pub eps_min: Option<f64>,
    pub d_min: Option<f64>,
    pub d0_min: Option<f64>,
}

/// Per-bin mean stretching number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinnedAverage {
    pub bin_center: f64,
    pub mean_a: f64,
    pub count: usize,
}

/// Which distance to bin on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    /// d: distance from the X-point.
    XPoint,
    /// eps: distance from the nodal point.
    NodalPoint,
}

/// Minimum of a sampled series with local parabolic refinement around the
/// discrete minimum.
fn refined_min(values: &[f64]) -> Option<f64> {
    let (imin, &vmin) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    if imin == 0 || imin + 1 == values.len() {
        return Some(vmin);
    }
    let (ym, y0, yp) = (values[imin - 1], vmin, values[imin + 1]);
    let denom = ym - 2.0 * y0 + yp;
    if denom <= 0.0 {
        return Some(y0);
    }
    let dx = 0.5 * (ym - yp) / denom;
    Some(y0 - 0.25 * (ym - yp) * dx)
}

/// Split a deviation-carrying trajectory into windows of width `dt_window`
/// and compute the stretching number and the three minimum distances per
/// window.
///
/// The trajectory must be sampled on a grid that subdivides the window (the
/// default pipeline uses dt_out = dt_window/10). Windows touching a nodal
/// divergence carry `None` distances; windows where the X-point cannot be
/// located carry `None` for d and d0 but keep eps.
pub fn stretching_series(
    p: &ModelParams,
    traj: &Trajectory,
    dt_window: f64,
) -> Result<Vec<StretchWindow>> {
    let dev = traj
        .dev
        .as_ref()
        .ok_or(Error::InvalidArgument("stretching numbers need deviations"))?;
    if traj.len() < 2 {
        return Err(Error::InvalidArgument("trajectory too short"));
    }
    let dt_out = traj.times[1] - traj.times[0];
    let stride = (dt_window / dt_out).round() as usize;
    if stride == 0 || (stride as f64 * dt_out - dt_window).abs() > 1e-9 {
        return Err(Error::InvalidArgument("output grid must subdivide the window width"));
    }

    let n_windows = (traj.len() - 1) / stride;
    let mut out = Vec::with_capacity(n_windows);
    let mut xpt_seed: Option<(f64, f64)> = None;
    let mut eps_buf = Vec::with_capacity(stride + 1);
    let mut d_buf = Vec::with_capacity(stride + 1);
    let mut d0_buf = Vec::with_capacity(stride + 1);

    for w in 0..n_windows {
        let i0 = w * stride;
        let i1 = i0 + stride;
        let t_i = traj.times[i0];
        let dt_actual = traj.times[i1] - t_i;
        let a_i = (dev.log_norm[i1] - dev.log_norm[i0]) / dt_actual;

        eps_buf.clear();
        d_buf.clear();
        d0_buf.clear();
        let mut node_ok = true;
        let mut xpt_ok = true;
        for i in i0..=i1 {
            let t = traj.times[i];
            match nodal_point(p, t) {
                Ok(nf) => {
                    let u = traj.xs[i] - nf.x0;
                    let v = traj.ys[i] - nf.y0;
                    eps_buf.push(u.hypot(v));
                    // collisions flip the X-point to the other side; reseed
                    let crossed = xpt_seed.is_some()
                        && i > i0
                        && (((1.0 + p.c) * traj.times[i - 1]).sin()
                            * ((1.0 + p.c) * t).sin())
                            < 0.0;
                    if crossed {
                        xpt_seed = None;
                    }
                    let located = match xpt_seed {
                        Some(seed) => xpoint_locate_seeded(p, t, seed),
                        None => xpoint_locate(p, t),
                    };
                    match located {
                        Ok(xp) => {
                            xpt_seed = Some((xp.u0, xp.v0));
                            d_buf.push((u - xp.u0).hypot(v - xp.v0));
                            d0_buf.push(xp.d0);
                        }
                        Err(_) => {
                            xpt_ok = false;
                            xpt_seed = None;
                        }
                    }
                }
                Err(_) => {
                    node_ok = false;
                    xpt_seed = None;
                }
            }
        }
        let eps_min = if node_ok { refined_min(&eps_buf) } else { None };
        let d_min = if node_ok && xpt_ok { refined_min(&d_buf) } else { None };
        let d0_min = if node_ok && xpt_ok { refined_min(&d0_buf) } else { None };
        out.push(StretchWindow { t_i, a_i, eps_min, d_min, d0_min });
    }
    Ok(out)
}

/// Group windows into distance bins of width `delta` and average the
/// stretching numbers per bin. Windows without the selected distance are
/// skipped; empty bins are omitted.
pub fn bin_by_distance(
    windows: &[StretchWindow],
    which: DistanceKind,
    delta: f64,
) -> Vec<BinnedAverage> {
    use std::collections::BTreeMap;
    let mut bins: BTreeMap<i64, (f64, usize)> = BTreeMap::new();
    for w in windows {
        let dist = match which {
            DistanceKind::XPoint => w.d_min,
            DistanceKind::NodalPoint => w.eps_min,
        };
        let Some(d) = dist else { continue };
        let idx = (d / delta).floor() as i64;
        let e = bins.entry(idx).or_insert((0.0, 0));
        e.0 += w.a_i;
        e.1 += 1;
    }
    bins.into_iter()
        .map(|(idx, (sum, count))| BinnedAverage {
            bin_center: (idx as f64 + 0.5) * delta,
            mean_a: sum / count as f64,
            count,
        })
        .collect()
}

/// Least-squares power law lambda = prefactor * (1/d0)^p.
#[derive(Debug, Clone, Copy)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
}

/// Fit ln(lambda) against ln(1/d0). Requires at least 20 samples with
/// positive coordinates spanning a factor of 2 in d0.
pub fn power_law_fit(samples: &[(f64, f64)]) -> Result<PowerLawFit> {
    if samples.len() < 20 {
        return Err(Error::InvalidArgument("power-law fit needs at least 20 samples"));
    }
    if samples.iter().any(|&(d, l)| !(d > 0.0 && l > 0.0)) {
        return Err(Error::InvalidArgument("power-law fit needs positive samples"));
    }
    let (dmin, dmax) = samples.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(d, _)| {
        (lo.min(d), hi.max(d))
    });
    let span = dmax / dmin;
    if span < 2.0 {
        return Err(Error::DegenerateFit { span });
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|&(d, _)| (1.0 / d).ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|&(_, l)| l.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for i in 0..samples.len() {
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
    }
    let p = sxy / sxx;
    Ok(PowerLawFit { exponent: p, prefactor: (ybar - p * xbar).exp() })
}

/// Verdict of the finite-time Lyapunov classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitClass {
    Regular,
    Chaotic,
    Undecided,
}

/// Classify an orbit from its chi(t) series (sampled to t >= 1000).
///
/// Policy: an orbit is chaotic when chi at the end exceeds 1e-2 and the
/// deviation grew by at least two e-folds over the last decade of t; regular
/// when chi stays below 2e-3 without that growth; otherwise undecided.
pub fn classify_orbit(records: &[LyapunovRecord]) -> OrbitClass {
    let Some(last) = records.last() else { return OrbitClass::Undecided };
    let t_end = last.t;
    let t_ref = t_end / 10.0;
    let at_ref = records
        .iter()
        .min_by(|a, b| (a.t - t_ref).abs().total_cmp(&(b.t - t_ref).abs()))
        .unwrap();
    let decade_growth = last.log_norm_accum - at_ref.log_norm_accum;
    if last.chi > CHI_CHAOTIC && decade_growth >= DECADE_LOG_GROWTH {
        OrbitClass::Chaotic
    } else if last.chi < CHI_REGULAR && decade_growth < DECADE_LOG_GROWTH {
        OrbitClass::Regular
    } else {
        OrbitClass::Undecided
    }
}
