use serde::Serialize;

use super::{drop_l, FamilyId, FamilyParams};
use crate::error::{Result, RswError};
use crate::flow::FlowParameters;
use crate::transforms::point_inverse;

/// `(x − a)² + (y − b)² = radius²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circle {
    pub a: f64,
    pub b: f64,
    pub radius: f64,
}

impl Circle {
    pub fn defect(&self, x: f64, y: f64) -> f64 {
        (x - self.a).powi(2) + (y - self.b).powi(2) - self.radius.powi(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
enum Kind {
    Image { u0: f64, v0: f64 },
    Transported { alpha: f64, rate: f64 },
}

/// Closed-form particle path through `(r₀, θ₀)`.
///
/// For the transported families `(r₀, θ₀)` is the position at `t = 0`; for
/// the constant-state image it is the position at `t = π/f`, where every
/// path of that family is defined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryFormula {
    pub family: FamilyId,
    pub r0: f64,
    pub theta0: f64,
    pub circle: Option<Circle>,
    /// Angular rate `C = V̄(r̄)/r̄` of the underlying stationary flow.
    pub rotation_rate: Option<f64>,
    kind: Kind,
    f: f64,
}

impl TrajectoryFormula {
    /// `(r, θ)` at time `t`. The angle accumulates for transported families
    /// and comes from `atan2` for the image family.
    pub fn position(&self, t: f64) -> Result<(f64, f64)> {
        let f = self.f;
        match self.kind {
            Kind::Image { .. } => {
                let (x, y) = self.cartesian(t)?;
                Ok((x.hypot(y), y.atan2(x)))
            }
            Kind::Transported { alpha, rate } => {
                let (s, c) = (0.5 * f * t).sin_cos();
                let den1 = c * c + alpha * s * s;
                let den2 = c * c + alpha * alpha * s * s;
                let shift = ((alpha - 1.0) * s * c / den1).atan();
                let tbar = t + 2.0 * shift / f;
                Ok((self.r0 * den2.sqrt(), self.theta0 + rate * tbar + shift))
            }
        }
    }

    pub fn cartesian(&self, t: f64) -> Result<(f64, f64)> {
        let f = self.f;
        match self.kind {
            Kind::Image { u0, v0 } => {
                let (s, c) = (0.5 * f * t).sin_cos();
                if !(t > 0.0 && t < 2.0 * std::f64::consts::PI / f) || s.abs() < 1e-15 {
                    return Err(RswError::SingularTime { t });
                }
                let tp = -c / (s * f);
                let (x0, y0) = (self.r0 * self.theta0.cos(), self.r0 * self.theta0.sin());
                let [_, x, y] = point_inverse(f, tp, 0.5 * y0 + u0 * tp, -0.5 * x0 + v0 * tp);
                Ok((x, y))
            }
            Kind::Transported { .. } => {
                let (r, th) = self.position(t)?;
                Ok((r * th.cos(), r * th.sin()))
            }
        }
    }
}

fn transported(
    family: FamilyId,
    alpha: f64,
    rate: f64,
    r0: f64,
    theta0: f64,
    params: &FlowParameters,
) -> TrajectoryFormula {
    // circles only when the source particle sits still
    let circle = (rate == 0.0).then(|| {
        let m = 0.5 * (alpha + 1.0) * r0;
        Circle {
            a: m * theta0.cos(),
            b: m * theta0.sin(),
            radius: 0.5 * (alpha - 1.0).abs() * r0,
        }
    });
    TrajectoryFormula {
        family,
        r0,
        theta0,
        circle,
        rotation_rate: Some(rate),
        kind: Kind::Transported { alpha, rate },
        f: params.f(),
    }
}

pub fn trajectory_formula(fp: &FamilyParams, params: &FlowParameters, r0: f64, theta0: f64) -> Result<TrajectoryFormula> {
    if !(r0 > 0.0 && r0.is_finite() && theta0.is_finite()) {
        return Err(RswError::InvalidParams(format!("need r0 > 0, got {r0}")));
    }
    let f = params.f();
    let id = fp.id();
    Ok(match *fp {
        FamilyParams::RestState { .. } => transported(id, 1.0, 0.0, r0, theta0, params),
        FamilyParams::PulsatingCylinder { alpha, .. } => transported(id, alpha, 0.0, r0, theta0, params),
        FamilyParams::PulsatingDrop { alpha } => {
            let rate = drop_l(alpha, params) * r0 * alpha.sqrt();
            transported(id, alpha, rate, r0, theta0, params)
        }
        FamilyParams::StationaryRotSym { ref vbar, .. } => transported(id, 1.0, vbar.value(r0) / r0, r0, theta0, params),
        FamilyParams::ConstantSwImage { u0, v0, .. } => {
            let (x0, y0) = (r0 * theta0.cos(), r0 * theta0.sin());
            let (p, q) = (u0 / f - 0.5 * x0, v0 / f - 0.5 * y0);
            TrajectoryFormula {
                family: id,
                r0,
                theta0,
                circle: Some(Circle {
                    a: 0.5 * x0 + u0 / f,
                    b: 0.5 * y0 + v0 / f,
                    radius: p.hypot(q),
                }),
                rotation_rate: None,
                kind: Kind::Image { u0, v0 },
                f,
            }
        }
        _ => return Err(RswError::UnsupportedFamily(format!("no closed-form trajectories for {id}"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Closure {
    /// The particle turns `m` times around the origin in `big_m` periods.
    Closed { m: u64, big_m: u64 },
    QuasiClosed { ratio: f64 },
}

/// Denominators allowed when recognising a rational rotation ratio.
pub const CLOSURE_MAX_DENOMINATOR: u64 = 1000;
pub const CLOSURE_TOL: f64 = 1e-9;

fn rational(x: f64) -> Option<(u64, u64)> {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let (p2, q2) = (a as u64 * p1 + p0, a as u64 * q1 + q0);
        if q2 > CLOSURE_MAX_DENOMINATOR {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= CLOSURE_TOL {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a;
        if frac <= 0.0 {
            return None;
        }
        rest = frac.recip();
    }
    None
}

/// Whether the drop particle starting at radius `r₀` returns to its start.
pub fn closure_condition(fp: &FamilyParams, params: &FlowParameters, r0: f64) -> Result<Closure> {
    let FamilyParams::PulsatingDrop { alpha } = *fp else {
        return Err(RswError::UnsupportedFamily(format!("closure is defined for the drop, not {}", fp.id())));
    };
    let l = drop_l(alpha, params);
    let r_star = -params.f() / (l * alpha.sqrt());
    if !(r0 > 0.0 && r0 <= r_star * (1.0 + 1e-12)) {
        return Err(RswError::InvalidParams(format!("need 0 < r0 <= {r_star}, got {r0}")));
    }
    let ratio = -l * r0 * alpha.sqrt() / params.f();
    Ok(match rational(ratio) {
        Some((m, big_m)) if m >= 1 => Closure::Closed { m, big_m },
        _ => Closure::QuasiClosed { ratio },
    })
}
