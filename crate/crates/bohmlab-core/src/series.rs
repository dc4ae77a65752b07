//! Order-by-order construction of the regular theoretical orbits as
//! two-frequency cosine series.
//!
//! Solutions are expanded as x(t) = x0 + x1(t) + x2(t) + ..., where x_n, y_n
//! carry total degree n in the amplitudes (a, b). Each order is built by
//! expanding 1/G as a truncated Neumann series of the denominator polynomial
//! minus one, multiplying by the velocity numerators (pure sine terms), and
//! integrating sine terms to cosine terms with the integration constant fixed
//! so x_n(0) = y_n(0) = 0. Products close on the frequency lattice
//! {m1 + m2 c}: cos w1 cos w2 and sin w1 cos w2 stay inside it, so every
//! stored term is a cosine term and no secular terms can arise.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::field::{velocity, PhaseState};
use crate::orbit::Trajectory;
use crate::params::ModelParams;

/// Frequencies with |m1 + m2 c| at or below this are resonant: their sine
/// contribution vanishes identically and the term is dropped (recorded, not
/// fatal).
pub const FREQ_FLOOR: f64 = 1e-12;

/// Relative coefficient floor per order; smaller entries are floating-point
/// dust from cancellations in the term products.
const PRUNE_REL: f64 = 1e-16;

/// One cosine term coeff * cos((m1 + m2 c) t) on the two-frequency lattice.
///
/// Canonical form: the first nonzero of (m1, m2) is positive; (0, 0) is the
/// constant term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub m1: i32,
    pub m2: i32,
    pub coeff: f64,
}

/// A perturbation series for one coordinate: the order-0 constant plus
/// cosine-term lists graded by total degree in the amplitudes.
#[derive(Debug, Clone)]
pub struct TrigSeries {
    /// orders[n] holds the degree-(n+1) terms; the degree-0 part is `base`.
    pub orders: Vec<Vec<TrigTerm>>,
    /// Initial condition (x0 or y0) = the entire order-0 solution.
    pub base: f64,
    /// Frequency ratio the lattice is built on.
    pub c: f64,
}

impl TrigSeries {
    /// Series value at time t: base + sum over orders of coeff cos(w t).
    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.base;
        for order in &self.orders {
            for term in order {
                v += term.coeff * ((term.m1 as f64 + term.m2 as f64 * self.c) * t).cos();
            }
        }
        v
    }

    /// Exact time derivative of [`eval`](Self::eval).
    pub fn eval_deriv(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for order in &self.orders {
            for term in order {
                let w = term.m1 as f64 + term.m2 as f64 * self.c;
                v -= term.coeff * w * (w * t).sin();
            }
        }
        v
    }

    /// Value of the order-n contribution alone (n >= 1).
    pub fn order_eval(&self, n: usize, t: f64) -> f64 {
        self.orders[n - 1]
            .iter()
            .map(|term| term.coeff * ((term.m1 as f64 + term.m2 as f64 * self.c) * t).cos())
            .sum()
    }

    /// Coefficient of the canonical frequency key (m1, m2) at order n.
    pub fn coeff(&self, n: usize, m1: i32, m2: i32) -> f64 {
        self.orders[n - 1]
            .iter()
            .find(|t| t.m1 == m1 && t.m2 == m2)
            .map_or(0.0, |t| t.coeff)
    }
}

/// The coupled (x, y) series for one initial condition, with the resonances
/// dropped during construction.
#[derive(Debug, Clone)]
pub struct SeriesPair {
    pub x: TrigSeries,
    pub y: TrigSeries,
    pub params: ModelParams,
    pub x0: f64,
    pub y0: f64,
    /// Frequency keys whose sine terms vanished (|m1 + m2 c| <= FREQ_FLOOR).
    pub dropped: Vec<(i32, i32)>,
}

type Key = (i32, i32);
type Poly = BTreeMap<Key, f64>;
/// Graded polynomial: grade n at index n.
type Graded = Vec<Poly>;

#[inline]
fn canon(m1: i32, m2: i32) -> (Key, f64) {
    if m1 < 0 || (m1 == 0 && m2 < 0) {
        ((-m1, -m2), -1.0)
    } else {
        ((m1, m2), 1.0)
    }
}

fn poly_mul_into(p: &Poly, q: &Poly, out: &mut Poly) {
    // cos w1 cos w2 = (cos(w1+w2) + cos(w1-w2)) / 2; cos is even so the
    // canonical sign is irrelevant here
    for (&(a1, a2), &va) in p {
        for (&(b1, b2), &vb) in q {
            let half = 0.5 * va * vb;
            for key in [(a1 + b1, a2 + b2), (a1 - b1, a2 - b2)] {
                let (k, _) = canon(key.0, key.1);
                *out.entry(k).or_insert(0.0) += half;
            }
        }
    }
}

fn graded_mul(p: &Graded, q: &Graded, nmax: usize) -> Graded {
    let mut out: Graded = vec![Poly::new(); nmax + 1];
    for (i, pi) in p.iter().enumerate().take(nmax + 1) {
        if pi.is_empty() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            if i + j > nmax {
                break;
            }
            if qj.is_empty() {
                continue;
            }
            let (lhs, rhs, slot) = (pi, qj, i + j);
            let mut tmp = Poly::new();
            poly_mul_into(lhs, rhs, &mut tmp);
            let dst = &mut out[slot];
            for (k, v) in tmp {
                *dst.entry(k).or_insert(0.0) += v;
            }
        }
    }
    out
}

/// sin(key_s) * cos-poly -> sin-poly; zero-frequency sine keys vanish.
fn sin_mul_cos(sin_poly: &Poly, cos_poly: &Poly, out: &mut Poly) {
    for (&(a1, a2), &va) in sin_poly {
        for (&(b1, b2), &vb) in cos_poly {
            let half = 0.5 * va * vb;
            for key in [(a1 + b1, a2 + b2), (a1 - b1, a2 - b2)] {
                let (k, sign) = canon(key.0, key.1);
                if k == (0, 0) {
                    continue;
                }
                *out.entry(k).or_insert(0.0) += half * sign;
            }
        }
    }
}

fn add_scaled(dst: &mut Poly, src: &Poly, scale: f64) {
    for (k, v) in src {
        *dst.entry(*k).or_insert(0.0) += scale * v;
    }
}

/// Build the x- and y-series up to total amplitude degree `order`.
pub fn series_solve(p: &ModelParams, x0: f64, y0: f64, order: usize) -> SeriesPair {
    assert!(order >= 1, "series order must be >= 1");
    let (a, bq, c) = (p.a, p.bq(), p.c);

    let cos_t: Poly = BTreeMap::from([((1, 0), 1.0)]);
    let cos_1c: Poly = BTreeMap::from([((1, 1), 1.0)]);
    let cos_ct: Poly = BTreeMap::from([((0, 1), 1.0)]);
    let one: Poly = BTreeMap::from([((0, 0), 1.0)]);

    let mut xg: Graded = vec![Poly::new(); order + 1];
    let mut yg: Graded = vec![Poly::new(); order + 1];
    xg[0].insert((0, 0), x0);
    yg[0].insert((0, 0), y0);
    let mut dropped = Vec::new();

    for n in 1..=order {
        let nm = n - 1;
        // g = G - 1 graded to degree n-1 (amplitude prefactors carry grade:
        // a, b -> +1; a^2, ab, b^2 -> +2)
        let xx = graded_mul(&xg, &xg, nm);
        let xy = graded_mul(&xg, &yg, nm);
        let xxy = graded_mul(&xx, &yg, nm);
        let xxyy = graded_mul(&xxy, &yg, nm);
        let mut g: Graded = vec![Poly::new(); nm + 1];
        let acc = |g: &mut Graded, polys: &Graded, shift: usize, scale: f64, cosf: &Poly| {
            for (i, poly) in polys.iter().enumerate() {
                let grade = i + shift;
                if grade > nm || poly.is_empty() {
                    continue;
                }
                let mut tmp = Poly::new();
                poly_mul_into(poly, cosf, &mut tmp);
                add_scaled(&mut g[grade], &tmp, scale);
            }
        };
        acc(&mut g, &xg, 1, 2.0 * a, &cos_t);
        acc(&mut g, &xy, 1, 2.0 * bq, &cos_1c);
        acc(&mut g, &xx, 2, a * a, &one);
        acc(&mut g, &xxy, 2, 2.0 * a * bq, &cos_ct);
        acc(&mut g, &xxyy, 2, bq * bq, &one);

        // 1/G = sum_k (-g)^k truncated at degree n-1
        let mut inv_g: Graded = vec![Poly::new(); nm + 1];
        inv_g[0].insert((0, 0), 1.0);
        let mut gk: Graded = vec![Poly::new(); nm + 1];
        gk[0].insert((0, 0), 1.0);
        for k in 1..=nm {
            gk = graded_mul(&gk, &g, nm);
            let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
            for i in 0..=nm {
                let terms: Vec<(Key, f64)> = gk[i].iter().map(|(k, v)| (*k, *v)).collect();
                for (key, v) in terms {
                    *inv_g[i].entry(key).or_insert(0.0) += sign * v;
                }
            }
        }

        // grade-n part of the sine-term right-hand sides
        let sin_t: Poly = BTreeMap::from([((1, 0), 1.0)]);
        let sin_1c: Poly = BTreeMap::from([((1, 1), 1.0)]);
        let sin_ct: Poly = BTreeMap::from([((0, 1), 1.0)]);
        let mut rhs_x = Poly::new();
        let mut rhs_y = Poly::new();
        // dx/dt: (-a sin t - bq y sin((1+c)t)) / G
        {
            let mut s = Poly::new();
            sin_mul_cos(&sin_t, &inv_g[nm], &mut s);
            add_scaled(&mut rhs_x, &s, -a);
        }
        for (k, yk) in yg.iter().enumerate().take(n) {
            if yk.is_empty() || nm < k {
                continue;
            }
            let mut s1 = Poly::new();
            sin_mul_cos(&sin_1c, yk, &mut s1);
            let mut s2 = Poly::new();
            sin_mul_cos(&s1, &inv_g[nm - k], &mut s2);
            add_scaled(&mut rhs_x, &s2, -bq);
        }
        // dy/dt: (-bq x sin((1+c)t) - a bq x^2 sin(ct)) / G
        for (k, xk) in xg.iter().enumerate().take(n) {
            if xk.is_empty() || nm < k {
                continue;
            }
            let mut s1 = Poly::new();
            sin_mul_cos(&sin_1c, xk, &mut s1);
            let mut s2 = Poly::new();
            sin_mul_cos(&s1, &inv_g[nm - k], &mut s2);
            add_scaled(&mut rhs_y, &s2, -bq);
        }
        if n >= 2 {
            let xx2 = graded_mul(&xg, &xg, n - 2);
            for (k, xk2) in xx2.iter().enumerate() {
                if xk2.is_empty() || n - 2 < k {
                    continue;
                }
                let mut s1 = Poly::new();
                sin_mul_cos(&sin_ct, xk2, &mut s1);
                let mut s2 = Poly::new();
                sin_mul_cos(&s1, &inv_g[n - 2 - k], &mut s2);
                add_scaled(&mut rhs_y, &s2, -a * bq);
            }
        }

        // integrate sine terms to cosine terms, constant fixes value 0 at t=0
        for (rhs, target) in [(rhs_x, &mut xg), (rhs_y, &mut yg)] {
            let mut new_poly = Poly::new();
            let mut constant = 0.0;
            for ((m1, m2), v) in rhs {
                let w = m1 as f64 + m2 as f64 * c;
                if w.abs() <= FREQ_FLOOR {
                    if v.abs() > 0.0 {
                        dropped.push((m1, m2));
                    }
                    continue;
                }
                *new_poly.entry((m1, m2)).or_insert(0.0) += -v / w;
                constant += v / w;
            }
            *new_poly.entry((0, 0)).or_insert(0.0) += constant;
            target[n] = new_poly;
        }
    }

    let to_series = |graded: &Graded, base: f64| {
        let orders = graded[1..]
            .iter()
            .map(|poly| {
                let max = poly.values().fold(0.0f64, |m, v| m.max(v.abs()));
                let mut terms: Vec<TrigTerm> = poly
                    .iter()
                    .filter(|(_, v)| **v != 0.0 && v.abs() >= PRUNE_REL * max)
                    .map(|(&(m1, m2), &coeff)| TrigTerm { m1, m2, coeff })
                    .collect();
                terms.sort_by_key(|t| (t.m1, t.m2));
                terms
            })
            .collect();
        TrigSeries { orders, base, c }
    };
    SeriesPair {
        x: to_series(&xg, x0),
        y: to_series(&yg, y0),
        params: *p,
        x0,
        y0,
        dropped,
    }
}

/// Max-norm residual |d(series)/dt - velocity(series point)| over the sample
/// times; for an order-N series it scales as amplitude^(N+1).
pub fn series_residual(p: &ModelParams, pair: &SeriesPair, t_samples: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in t_samples {
        let s = PhaseState::new(pair.x.eval(t), pair.y.eval(t), t);
        let v = velocity(p, &s)?;
        let rx = pair.x.eval_deriv(t) - v.vx;
        let ry = pair.y.eval_deriv(t) - v.vy;
        worst = worst.max(rx.hypot(ry));
    }
    Ok(worst)
}

/// Constancy defect of the inverted series (the integral-of-motion form):
/// max over trajectory samples of |x_num(t) - sum x_n(t) - x0| and the y
/// analog.
pub fn integral_of_motion_check(pair: &SeriesPair, traj: &Trajectory) -> (f64, f64) {
    let mut dx = 0.0f64;
    let mut dy = 0.0f64;
    for i in 0..traj.times.len() {
        let t = traj.times[i];
        let sx = pair.x.eval(t) - pair.x.base;
        let sy = pair.y.eval(t) - pair.y.base;
        dx = dx.max((traj.xs[i] - sx - pair.x0).abs());
        dy = dy.max((traj.ys[i] - sy - pair.y0).abs());
    }
    (dx, dy)
}
