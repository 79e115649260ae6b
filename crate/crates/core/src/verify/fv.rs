use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::{in_frame, Field, FieldExt, FlowField, FlowParameters, Frame, DEPTH_FLOOR};

/// Uniform `n × n` mesh on `[x_lo, x_hi] × [y_lo, y_hi]`, advanced from
/// `t0` to `t1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FvConfig {
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub n: usize,
    pub t0: f64,
    pub t1: f64,
    pub cfl: f64,
    /// Only cells with `r < mask · radial_limit(t1)` enter the error.
    pub mask: Option<f64>,
}

impl FvConfig {
    pub fn square(half_width: f64, n: usize, t0: f64, t1: f64) -> Self {
        Self {
            x: [-half_width, half_width],
            y: [-half_width, half_width],
            n,
            t0,
            t1,
            cfl: 0.4,
            mask: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FvResult {
    pub n: usize,
    pub steps: usize,
    /// L¹ error of the depth.
    pub l1_depth: f64,
    /// L¹ error summed over depth and both momentum components.
    pub l1_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FvConvergence {
    pub coarse: FvResult,
    pub fine: FvResult,
    /// `log₂(e_coarse / e_fine)` of the total error.
    pub rate: f64,
}

type Cons = [f64; 3];

/// Conserved variables `(h, hu, hv)` of the exact field; points where the
/// field is undefined count as dry.
fn exact(field: &dyn FlowField, t: f64, x: f64, y: f64) -> Cons {
    match field.eval([t, x, y]) {
        Ok([u, v, h]) if h > DEPTH_FLOOR => [h, h * u, h * v],
        _ => [0.0; 3],
    }
}

fn velocity(q: &Cons) -> (f64, f64) {
    if q[0] > DEPTH_FLOOR {
        (q[1] / q[0], q[2] / q[0])
    } else {
        (0.0, 0.0)
    }
}

fn flux(q: &Cons, g: f64, along_x: bool) -> Cons {
    let (u, v) = velocity(q);
    let p = 0.5 * g * q[0] * q[0];
    if along_x {
        [q[1], q[1] * u + p, q[2] * u]
    } else {
        [q[2], q[1] * v, q[2] * v + p]
    }
}

fn speed(q: &Cons, g: f64, along_x: bool) -> f64 {
    let (u, v) = velocity(q);
    let c = (g * q[0].max(0.0)).sqrt();
    if along_x {
        u.abs() + c
    } else {
        v.abs() + c
    }
}

fn rusanov(l: &Cons, r: &Cons, g: f64, along_x: bool) -> Cons {
    let a = speed(l, g, along_x).max(speed(r, g, along_x));
    let (fl, fr) = (flux(l, g, along_x), flux(r, g, along_x));
    [0, 1, 2].map(|i| 0.5 * (fl[i] + fr[i]) - 0.5 * a * (r[i] - l[i]))
}

/// First-order Rusanov finite-volume run of the rotating equations,
/// started from and compared against `field`. Ghost cells take the exact
/// solution; the Coriolis source is applied as an exact rotation of the
/// momentum after each flux update.
pub fn fv_oracle(field: &Field, params: &FlowParameters, cfg: &FvConfig) -> Result<FvResult> {
    let (f, g) = (params.f(), params.g());
    if !(cfg.cfl > 0.0 && cfg.cfl <= 1.0) {
        return Err(RswError::CflViolation(format!("CFL number {} outside (0, 1]", cfg.cfl)));
    }
    if cfg.n < 2 || !(cfg.t1 > cfg.t0) || !(cfg.x[1] > cfg.x[0] && cfg.y[1] > cfg.y[0]) {
        return Err(RswError::InvalidParams("degenerate mesh or time span".into()));
    }
    let field = in_frame(field.clone(), Frame::Cartesian);
    let n = cfg.n;
    let dx = (cfg.x[1] - cfg.x[0]) / n as f64;
    let dy = (cfg.y[1] - cfg.y[0]) / n as f64;
    let xc = |i: isize| cfg.x[0] + (i as f64 + 0.5) * dx;
    let yc = |j: isize| cfg.y[0] + (j as f64 + 0.5) * dy;
    // (n + 2)² array with one ghost layer
    let m = n + 2;
    let idx = |i: usize, j: usize| j * m + i;
    let mut q = vec![[0.0; 3]; m * m];
    for j in 0..m {
        for i in 0..m {
            q[idx(i, j)] = exact(field.as_ref(), cfg.t0, xc(i as isize - 1), yc(j as isize - 1));
        }
    }

    let mut t = cfg.t0;
    let mut steps = 0;
    let mut next = q.clone();
    while t < cfg.t1 {
        let mut rate = 0.0f64;
        for j in 1..=n {
            for i in 1..=n {
                let c = &q[idx(i, j)];
                rate = rate.max(speed(c, g, true) / dx + speed(c, g, false) / dy);
            }
        }
        if !(rate.is_finite()) {
            return Err(RswError::CflViolation(format!("non-finite wave speed at t = {t}")));
        }
        let mut dt = if rate > 0.0 { cfg.cfl / rate } else { cfg.t1 - t };
        if t + dt >= cfg.t1 {
            dt = cfg.t1 - t;
        }
        if !(dt > 0.0) {
            return Err(RswError::CflViolation(format!("time step collapsed at t = {t}")));
        }
        let (cs, sn) = ((f * dt).cos(), (f * dt).sin());
        for j in 1..=n {
            for i in 1..=n {
                let c = q[idx(i, j)];
                let fe = rusanov(&c, &q[idx(i + 1, j)], g, true);
                let fw = rusanov(&q[idx(i - 1, j)], &c, g, true);
                let fnn = rusanov(&c, &q[idx(i, j + 1)], g, false);
                let fs = rusanov(&q[idx(i, j - 1)], &c, g, false);
                let mut u = [0, 1, 2].map(|k| c[k] - dt / dx * (fe[k] - fw[k]) - dt / dy * (fnn[k] - fs[k]));
                let (hu, hv) = (u[1], u[2]);
                u[1] = hu * cs + hv * sn;
                u[2] = -hu * sn + hv * cs;
                if u[0] < -1e-12 {
                    return Err(RswError::NegativeDepth { i: i - 1, j: j - 1, h: u[0] });
                }
                if u[0] < 0.0 {
                    u = [0.0; 3];
                }
                next[idx(i, j)] = u;
            }
        }
        t += dt;
        steps += 1;
        std::mem::swap(&mut q, &mut next);
        for k in 0..m {
            for (i, j) in [(k, 0), (k, m - 1), (0, k), (m - 1, k)] {
                q[idx(i, j)] = exact(field.as_ref(), t, xc(i as isize - 1), yc(j as isize - 1));
            }
        }
    }

    let limit = cfg.mask.map(|frac| frac * field.radial_limit(cfg.t1));
    let (mut e_h, mut e_all) = (0.0, 0.0);
    for j in 1..=n {
        for i in 1..=n {
            let (x, y) = (xc(i as isize - 1), yc(j as isize - 1));
            if limit.is_some_and(|l| x.hypot(y) >= l) {
                continue;
            }
            let ex = exact(field.as_ref(), cfg.t1, x, y);
            let c = q[idx(i, j)];
            e_h += (c[0] - ex[0]).abs() * dx * dy;
            e_all += (0..3).map(|k| (c[k] - ex[k]).abs()).sum::<f64>() * dx * dy;
        }
    }
    Ok(FvResult {
        n,
        steps,
        l1_depth: e_h,
        l1_total: e_all,
    })
}

/// Runs [`fv_oracle`] on `cfg.n` and `2·cfg.n` cells per side.
pub fn fv_convergence(field: &Field, params: &FlowParameters, cfg: &FvConfig) -> Result<FvConvergence> {
    let coarse = fv_oracle(field, params, cfg)?;
    let fine = fv_oracle(field, params, &FvConfig { n: 2 * cfg.n, ..*cfg })?;
    let rate = (coarse.l1_total / fine.l1_total).log2();
    Ok(FvConvergence { coarse, fine, rate })
}
