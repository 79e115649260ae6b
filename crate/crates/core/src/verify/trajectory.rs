use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::{in_frame, potential_vorticity, DerivativeMode, Field, FieldExt, FlowParameters, Frame, System};
use crate::ode::{integrate_adaptive, AdaptiveOptions, OdeStats};

/// Paths may not come closer to the axis than this.
pub const R_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajPoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub r0: f64,
    pub theta0: f64,
    pub points: Vec<TrajPoint>,
    pub stats: OdeStats,
}

/// Integrates `dr/dt = U`, `dθ/dt = V/r` through the sorted `times`, starting
/// from `(r₀, θ₀)` at `times[0]`. Steps land exactly on the special times
/// `(2n+1)π/f` of rotating fields.
pub fn integrate_trajectory(
    field: &Field,
    params: &FlowParameters,
    r0: f64,
    theta0: f64,
    times: &[f64],
    opts: AdaptiveOptions,
) -> Result<Trajectory> {
    let Some(&t0) = times.first() else {
        return Err(RswError::InvalidParams("no output times".into()));
    };
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(RswError::InvalidParams("times must be strictly increasing".into()));
    }
    if !(r0 >= R_FLOOR) {
        return Err(RswError::LeftDomain { t: t0, r: r0 });
    }
    let polar = in_frame(field.clone(), Frame::Polar);
    polar.check([t0, r0, theta0])?;
    let t1 = *times.last().unwrap();

    let mut stops = Vec::new();
    if field.system() == System::Rotating {
        let f = params.f();
        let mut n = ((f * t0 / PI - 1.0) / 2.0).floor();
        loop {
            let ts = (2.0 * n + 1.0) * PI / f;
            if ts >= t1 {
                break;
            }
            if ts > t0 {
                stops.push(ts);
            }
            n += 1.0;
        }
    }

    let rhs = |t: f64, y: &[f64; 2]| {
        let r = y[0];
        if !(r >= R_FLOOR) {
            return Err(RswError::LeftDomain { t, r });
        }
        let [u, v, _] = polar.eval([t, r, y[1]]).map_err(|e| match e {
            RswError::WindowViolation { .. } | RswError::OriginSingular => RswError::LeftDomain { t, r },
            other => other,
        })?;
        Ok([u, v / r])
    };
    let (ys, stats) = integrate_adaptive(rhs, t0, [r0, theta0], times, &stops, opts)?;
    let points = times
        .iter()
        .zip(ys)
        .map(|(&t, [r, theta])| TrajPoint {
            t,
            r,
            theta,
            x: r * theta.cos(),
            y: r * theta.sin(),
        })
        .collect();
    Ok(Trajectory {
        r0,
        theta0,
        points,
        stats,
    })
}

/// Largest change of potential vorticity along a path, relative to
/// `max(|Ω₀|, 1)`.
pub fn pv_drift(field: &Field, params: &FlowParameters, traj: &Trajectory, mode: DerivativeMode) -> Result<f64> {
    let polar = in_frame(field.clone(), Frame::Polar);
    let mut omega0 = None;
    let mut drift = 0.0f64;
    for p in &traj.points {
        let w = potential_vorticity(polar.as_ref(), [p.t, p.r, p.theta], params, mode)?;
        let w0 = *omega0.get_or_insert(w);
        drift = drift.max((w - w0).abs() / w0.abs().max(1.0));
    }
    Ok(drift)
}

/// Marked particles on a circle, advected together.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaterialCurve {
    pub times: Vec<f64>,
    pub particles: Vec<Trajectory>,
    /// Perimeter of the closed marker polygon at each time.
    pub lengths: Vec<f64>,
    /// Largest distance of any marker from its initial position.
    pub max_displacement: Vec<f64>,
}

pub fn evolve_material_curve(
    field: &Field,
    params: &FlowParameters,
    center: [f64; 2],
    radius: f64,
    n: usize,
    times: &[f64],
    opts: AdaptiveOptions,
) -> Result<MaterialCurve> {
    if n == 0 || !(radius >= 0.0) {
        return Err(RswError::InvalidParams("need n >= 1 markers and radius >= 0".into()));
    }
    let n = if radius == 0.0 { 1 } else { n };
    let starts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            let (x, y) = (center[0] + radius * a.cos(), center[1] + radius * a.sin());
            (x.hypot(y), y.atan2(x))
        })
        .collect();
    let run = |&(r0, th0): &(f64, f64)| integrate_trajectory(field, params, r0, th0, times, opts);
    #[cfg(feature = "parallel")]
    let particles: Vec<Result<Trajectory>> = {
        use rayon::prelude::*;
        starts.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let particles: Vec<Result<Trajectory>> = starts.iter().map(run).collect();
    let particles: Vec<Trajectory> = particles.into_iter().collect::<Result<_>>()?;

    let mut lengths = Vec::with_capacity(times.len());
    let mut max_displacement = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let pos = |i: usize| {
            let p = &particles[i].points[k];
            (p.x, p.y)
        };
        let mut len = 0.0;
        if n > 1 {
            for i in 0..n {
                let (a, b) = (pos(i), pos((i + 1) % n));
                len += (a.0 - b.0).hypot(a.1 - b.1);
            }
        }
        let disp = (0..n)
            .map(|i| {
                let p = &particles[i].points;
                (p[k].x - p[0].x).hypot(p[k].y - p[0].y)
            })
            .fold(0.0, f64::max);
        lengths.push(len);
        max_displacement.push(disp);
    }
    Ok(MaterialCurve {
        times: times.to_vec(),
        particles,
        lengths,
        max_displacement,
    })
}
