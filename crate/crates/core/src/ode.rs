//! Runge–Kutta integrators for small fixed-size systems.

use crate::error::{Result, RswError};

pub fn rk4_step<const N: usize, F>(rhs: &mut F, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let add = |a: &[f64; N], k: &[f64; N], c: f64| -> [f64; N] {
        let mut o = *a;
        for i in 0..N {
            o[i] += c * k[i];
        }
        o
    };
    let k1 = rhs(t, y)?;
    let k2 = rhs(t + 0.5 * h, &add(y, &k1, 0.5 * h))?;
    let k3 = rhs(t + 0.5 * h, &add(y, &k2, 0.5 * h))?;
    let k4 = rhs(t + h, &add(y, &k3, h))?;
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Classical RK4 with `n` equal steps from `t0` to `t1`.
pub fn rk4_fixed<const N: usize, F>(mut rhs: F, t0: f64, y0: [f64; N], t1: f64, n: usize) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    for i in 0..n {
        y = rk4_step(&mut rhs, t0 + i as f64 * h, &y, h)?;
    }
    Ok(y)
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    /// Local error bound per step, relative to `max(1, |y|)`.
    pub tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            h_init: 1e-2,
            h_max: 0.1,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_calls: usize,
}

/// Adaptive RK4 with step doubling and local extrapolation.
///
/// Returns the solution at each of `outputs` (sorted, within `[t0, t1]`).
/// Steps land exactly on every output time and every entry of `stops`.
pub fn integrate_adaptive<const N: usize, F>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    stops: &[f64],
    opts: AdaptiveOptions,
) -> Result<(Vec<[f64; N]>, OdeStats)>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut calls = 0usize;
    let mut counted = |t: f64, y: &[f64; N]| {
        calls += 1;
        rhs(t, y)
    };
    let mut marks: Vec<f64> = outputs.iter().chain(stops.iter()).copied().filter(|&m| m > t0).collect();
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let t_end = outputs.iter().copied().fold(t0, f64::max);

    let mut stats = OdeStats::default();
    let mut out = Vec::with_capacity(outputs.len());
    let mut oi = 0;
    while oi < outputs.len() && outputs[oi] <= t0 {
        out.push(y0);
        oi += 1;
    }
    let (mut t, mut y) = (t0, y0);
    let mut h = opts.h_init.min(opts.h_max);
    let mut mi = 0;
    while t < t_end {
        while mi < marks.len() && marks[mi] <= t {
            mi += 1;
        }
        let target = marks.get(mi).copied().unwrap_or(t_end);
        let remaining = target - t;
        if remaining <= 1e-12 * t.abs().max(1.0) {
            // marks this close together are the same instant
            t = target;
            while oi < outputs.len() && outputs[oi] <= t {
                out.push(y);
                oi += 1;
            }
            continue;
        }
        // never leave a sliver in front of a mark
        let hit = remaining <= 1.01 * h;
        let step = if hit { remaining } else { h };
        if step < 1e-14 * t.abs().max(1.0) {
            return Err(RswError::BlowUp { t });
        }
        let full = rk4_step(&mut counted, t, &y, step);
        let half = rk4_step(&mut counted, t, &y, 0.5 * step)
            .and_then(|m| rk4_step(&mut counted, t + 0.5 * step, &m, 0.5 * step));
        let (full, two) = match (full, half) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e @ RswError::LeftDomain { .. }), _) | (_, Err(e @ RswError::LeftDomain { .. })) => {
                // retry with a shorter step before giving up
                if step < 1e-10 * t.abs().max(1.0) {
                    return Err(e);
                }
                stats.rejected += 1;
                h = 0.25 * step;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = (two[i] - full[i]).abs() / 15.0 / two[i].abs().max(1.0);
            err = if e.is_finite() { err.max(e) } else { f64::INFINITY };
        }
        if err <= opts.tol {
            for i in 0..N {
                y[i] = two[i] + (two[i] - full[i]) / 15.0;
            }
            t = if hit { target } else { t + step };
            stats.accepted += 1;
            if stats.accepted > opts.max_steps {
                return Err(RswError::BlowUp { t });
            }
            while oi < outputs.len() && outputs[oi] <= t {
                out.push(y);
                oi += 1;
            }
            let grow = if err == 0.0 { 4.0 } else { (0.9 * (opts.tol / err).powf(0.2)).clamp(0.2, 4.0) };
            // keep the pre-truncation step so output marks do not shrink it
            h = (h.max(step) * grow).min(opts.h_max);
        } else {
            stats.rejected += 1;
            h = step * (0.9 * (opts.tol / err).powf(0.2)).clamp(0.1, 0.5);
        }
    }
    stats.rhs_calls = calls;
    Ok((out, stats))
}
