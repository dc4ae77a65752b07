//! Embedded Dormand-Prince 5(4) stepper with PI step-size control and
//! 4th-order dense output.
//!
//! The right-hand side may refuse an evaluation (the guidance field does so
//! near nodal points); a refused stage rejects the step and halves it, so
//! step control owns the decision of how close to a singularity to tread.

use crate::error::{Error, Result};

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
/// Step growth/shrink clamps per step (Hairer's FAC1/FAC2).
const FAC_SHRINK_MAX: f64 = 5.0;
const FAC_GROW_MAX: f64 = 10.0;
const MAX_STEPS: u64 = 100_000_000;

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// 5th-order weights equal the last stage row (FSAL); 4th-order embedded:
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
// dense-output weights
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct StepOpts {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub h_init: f64,
}

impl StepOpts {
    /// Standard settings for the guidance field: tolerance `tol`, global step
    /// cap 1e-2, underflow floor 1e-14.
    pub fn for_tolerance(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, h_max: 1e-2, h_min: 1e-14, h_init: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub steps: u64,
    pub rejected: u64,
    pub rhs_evals: u64,
    pub min_h: f64,
}

/// One accepted step with its interpolation polynomial.
#[derive(Debug, Clone)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Solution at any t within [t0, t1].
    pub fn interp(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let th1 = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + th1 * (self.cont[2][i] + theta * (self.cont[3][i] + th1 * self.cont[4][i])));
        }
        out
    }
}

/// What the step observer wants next.
pub enum StepAction {
    Continue,
    /// The observer modified the state (e.g. renormalized a deviation
    /// vector); the cached FSAL derivative must be refreshed.
    StateModified,
    Stop,
}

/// Integrate y' = f(t, y) from (t0, y0) to t_end.
///
/// `on_step` sees every accepted step (with dense output) and may modify the
/// running state through its second argument. The observer is called after
/// the step state has advanced, so `y` holds the solution at `step.t1`.
pub fn integrate<const N: usize>(
    mut rhs: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &StepOpts,
    mut on_step: impl FnMut(&DenseStep<N>, &mut [f64; N]) -> Result<StepAction>,
) -> Result<Stats> {
    assert!(t_end > t0, "integration runs forward");
    let mut stats = Stats { min_h: f64::INFINITY, ..Default::default() };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(opts.h_max).min(t_end - t0);
    let mut facold = 1e-4f64;
    let mut k1 = rhs(t, &y)?;
    stats.rhs_evals += 1;
    let mut last_refusal: Option<Error> = None;

    while t < t_end {
        if stats.steps + stats.rejected > MAX_STEPS {
            return Err(Error::NoConvergence { context: "step budget exhausted" });
        }
        if h < opts.h_min {
            return Err(match last_refusal.take() {
                Some(e) => e,
                None => Error::StepUnderflow { t },
            });
        }
        let h_eff = h.min(t_end - t);
        let last = h_eff >= t_end - t - 1e-300;

        // stages; a refused evaluation rejects the step and halves it
        let stage = |rhs: &mut dyn FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
                     t: f64,
                     y: &[f64; N],
                     ks: &[&[f64; N]],
                     a: &[f64],
                     ci: f64,
                     h: f64|
         -> Result<[f64; N]> {
            let mut ys = *y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, k) in ks.iter().enumerate() {
                    acc += a[j] * k[i];
                }
                ys[i] += h * acc;
            }
            rhs(t + ci * h, &ys)
        };

        let attempt = (|| -> Result<([[f64; N]; 7], [f64; N])> {
            let k2 = stage(&mut rhs, t, &y, &[&k1], &A2, C[1], h_eff)?;
            let k3 = stage(&mut rhs, t, &y, &[&k1, &k2], &A3, C[2], h_eff)?;
            let k4 = stage(&mut rhs, t, &y, &[&k1, &k2, &k3], &A4, C[3], h_eff)?;
            let k5 = stage(&mut rhs, t, &y, &[&k1, &k2, &k3, &k4], &A5, C[4], h_eff)?;
            let k6 = stage(&mut rhs, t, &y, &[&k1, &k2, &k3, &k4, &k5], &A6, C[5], h_eff)?;
            // 5th-order solution via the FSAL row
            let mut y1 = y;
            for i in 0..N {
                y1[i] += h_eff
                    * (A7[0] * k1[i]
                        + A7[2] * k3[i]
                        + A7[3] * k4[i]
                        + A7[4] * k5[i]
                        + A7[5] * k6[i]);
            }
            let k7 = rhs(t + h_eff, &y1)?;
            Ok(([k1, k2, k3, k4, k5, k6, k7], y1))
        })();

        let (k, y1) = match attempt {
            Ok(v) => {
                stats.rhs_evals += 6;
                v
            }
            Err(e @ (Error::NearNode { .. } | Error::NodalAtInfinity { .. })) => {
                last_refusal = Some(e);
                stats.rejected += 1;
                h = h_eff / 2.0;
                continue;
            }
            Err(e) => return Err(e),
        };

        // embedded error estimate
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h_eff
                * ((A7[0] - B4[0]) * k[0][i]
                    + (A7[2] - B4[2]) * k[2][i]
                    + (A7[3] - B4[3]) * k[3][i]
                    + (A7[4] - B4[4]) * k[4][i]
                    + (A7[5] - B4[5]) * k[5][i]
                    - B4[6] * k[6][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / N as f64).sqrt();

        if !err.is_finite() {
            stats.rejected += 1;
            h = h_eff / 2.0;
            continue;
        }

        if err <= 1.0 {
            // accept
            stats.steps += 1;
            stats.min_h = stats.min_h.min(h_eff);
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h_eff * k[0][i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h_eff * k[6][i] - bspl;
                cont[4][i] = h_eff
                    * (D[0] * k[0][i]
                        + D[2] * k[2][i]
                        + D[3] * k[3][i]
                        + D[4] * k[4][i]
                        + D[5] * k[5][i]
                        + D[6] * k[6][i]);
            }
            let step = DenseStep { t0: t, t1: t + h_eff, h: h_eff, cont };
            let t_new = t + h_eff;
            let mut y_new = y1;
            let action = on_step(&step, &mut y_new)?;
            t = t_new;
            y = y_new;
            match action {
                StepAction::Continue => k1 = k[6],
                StepAction::StateModified => {
                    k1 = rhs(t, &y)?;
                    stats.rhs_evals += 1;
                }
                StepAction::Stop => return Ok(stats),
            }
            last_refusal = None;

            let fac11 = err.powf(EXPO1);
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(1.0 / FAC_GROW_MAX, FAC_SHRINK_MAX);
            facold = err.max(1e-4);
            h = (h_eff / fac).min(opts.h_max);
            if last && t >= t_end {
                break;
            }
        } else {
            stats.rejected += 1;
            let fac11 = err.powf(EXPO1);
            h = h_eff / (fac11 / SAFE).min(FAC_SHRINK_MAX);
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_is_exact_to_tolerance() {
        let opts = StepOpts { rtol: 1e-11, atol: 1e-11, h_max: 0.1, h_min: 1e-14, h_init: 1e-3 };
        let mut y_end = [0.0];
        integrate(
            |_t, y: &[f64; 1]| Ok([y[0]]),
            0.0,
            [1.0],
            2.0,
            &opts,
            |step, y| {
                if step.t1 >= 2.0 {
                    y_end = *y;
                }
                Ok(StepAction::Continue)
            },
        )
        .unwrap();
        assert!((y_end[0] - 2.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn dense_output_matches_analytic_solution() {
        // y' = cos t, y = sin t; probe interpolant inside steps
        let opts = StepOpts { rtol: 1e-10, atol: 1e-10, h_max: 0.05, h_min: 1e-14, h_init: 1e-3 };
        let mut worst = 0.0f64;
        integrate(
            |t, _y: &[f64; 1]| Ok([t.cos()]),
            0.0,
            [0.0],
            3.0,
            &opts,
            |step, _y| {
                for frac in [0.25, 0.5, 0.75] {
                    let tm = step.t0 + frac * step.h;
                    let v = step.interp(tm)[0];
                    worst = worst.max((v - tm.sin()).abs());
                }
                Ok(StepAction::Continue)
            },
        )
        .unwrap();
        assert!(worst < 1e-9, "dense output error {worst:e}");
    }

    #[test]
    fn refused_rhs_surfaces_as_near_node() {
        // RHS refuses for t beyond 1: integration cannot pass the wall
        let opts = StepOpts::for_tolerance(1e-9);
        let r = integrate(
            |t, _y: &[f64; 1]| {
                if t > 1.0 {
                    Err(Error::NearNode { t, g: 0.0 })
                } else {
                    Ok([1.0])
                }
            },
            0.0,
            [0.0],
            2.0,
            &opts,
            |_s, _y| Ok(StepAction::Continue),
        );
        assert!(matches!(r, Err(Error::NearNode { .. })));
    }

    #[test]
    fn determinism_bitwise() {
        let run = || {
            let opts = StepOpts::for_tolerance(1e-9);
            let mut samples = Vec::new();
            integrate(
                |t, y: &[f64; 2]| Ok([y[1], -y[0] * (1.0 + 0.3 * t.sin())]),
                0.0,
                [1.0, 0.0],
                50.0,
                &opts,
                |step, y| {
                    samples.push((step.t1.to_bits(), y[0].to_bits(), y[1].to_bits()));
                    Ok(StepAction::Continue)
                },
            )
            .unwrap();
            samples
        };
        assert_eq!(run(), run());
    }
}
