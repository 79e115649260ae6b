use std::sync::Arc;

use serde::Serialize;

use super::grid::GridSpec;
use crate::error::{Result, RswError};
use crate::flow::{in_frame, DerivativeMode, Field, FieldExt, FlowField, FlowParameters, Frame, Sample, System, Window};
use crate::jet::J3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Worst {
    pub point: [f64; 3],
    /// 0 and 1 are the momentum equations, 2 is mass.
    pub equation: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub frame: Frame,
    pub mode: DerivativeMode,
    pub n_points: usize,
    pub max: [f64; 3],
    pub rms: [f64; 3],
    pub worst: Option<Worst>,
}

impl ResidualReport {
    pub fn max_overall(&self) -> f64 {
        self.max.iter().copied().fold(0.0, f64::max)
    }
}

fn normalized(terms: [&[f64]; 3]) -> [f64; 3] {
    terms.map(|t| {
        let scale = t.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        t.iter().sum::<f64>() / scale
    })
}

/// Normalized residuals of the three equations at one sample. Each
/// equation is divided by `max(1, largest term)`.
fn residual_of_sample(frame: Frame, s: &Sample, f: f64, g: f64) -> Result<[f64; 3]> {
    let [a, b, h] = s.state;
    let [[a_t, a_1, a_2], [b_t, b_1, b_2], [h_t, h_1, h_2]] = s.jac;
    Ok(match frame {
        Frame::Cartesian => normalized([
            &[a_t, a * a_1, b * a_2, -f * b, g * h_1],
            &[b_t, a * b_1, b * b_2, f * a, g * h_2],
            &[h_t, a * h_1, h * a_1, b * h_2, h * b_2],
        ]),
        Frame::Polar => {
            let r = s.point[1];
            if r <= 0.0 {
                return Err(RswError::OriginSingular);
            }
            normalized([
                &[a_t, a * a_1, b * a_2 / r, -b * b / r, -f * b, g * h_1],
                &[b_t, a * b_1, b * b_2 / r, a * b / r, f * a, g * h_2 / r],
                &[h_t, a * h_1, b * h_2 / r, h * a_1, h * a / r, h * b_2 / r],
            ])
        }
    })
}

/// Residuals at one point, in the field's own frame.
pub fn residual_at(field: &dyn FlowField, p: [f64; 3], params: &FlowParameters, mode: DerivativeMode) -> Result<[f64; 3]> {
    let s = field.sample(p, mode)?;
    residual_of_sample(field.frame(), &s, field.system().coriolis(params), params.g())
}

/// Residual report over explicit points given in the field's frame.
pub fn residual_points(
    field: &dyn FlowField,
    points: &[[f64; 3]],
    params: &FlowParameters,
    mode: DerivativeMode,
) -> Result<ResidualReport> {
    let eval = |p: &[f64; 3]| residual_at(field, *p, params, mode);
    #[cfg(feature = "parallel")]
    let values: Vec<Result<[f64; 3]>> = {
        use rayon::prelude::*;
        points.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<Result<[f64; 3]>> = points.iter().map(eval).collect();

    let mut rep = ResidualReport {
        name: field.name(),
        frame: field.frame(),
        mode,
        n_points: points.len(),
        max: [0.0; 3],
        rms: [0.0; 3],
        worst: None,
    };
    for (p, v) in points.iter().zip(values) {
        let v = v?;
        for (i, e) in v.into_iter().enumerate() {
            let e = if e.is_finite() { e.abs() } else { f64::INFINITY };
            rep.rms[i] += e * e;
            if e > rep.max[i] {
                rep.max[i] = e;
            }
            if rep.worst.map_or(true, |w| e > w.value) {
                rep.worst = Some(Worst {
                    point: *p,
                    equation: i,
                    value: e,
                });
            }
        }
    }
    if !points.is_empty() {
        rep.rms = rep.rms.map(|s| (s / points.len() as f64).sqrt());
    }
    Ok(rep)
}

fn on_grid(field: Field, frame: Frame, grid: &GridSpec, params: &FlowParameters, mode: DerivativeMode) -> Result<ResidualReport> {
    let field = in_frame(field, frame);
    let points = grid.points(field.as_ref())?;
    if frame == Frame::Polar && points.iter().any(|p| p[1] <= 0.0) {
        return Err(RswError::OriginSingular);
    }
    residual_points(field.as_ref(), &points, params, mode)
}

/// Cartesian-form residuals on a `(t, x, y)` grid.
pub fn residual_cartesian(field: Field, grid: &GridSpec, params: &FlowParameters, mode: DerivativeMode) -> Result<ResidualReport> {
    on_grid(field, Frame::Cartesian, grid, params, mode)
}

/// Polar-form residuals on a `(t, r, θ)` grid.
pub fn residual_polar(field: Field, grid: &GridSpec, params: &FlowParameters, mode: DerivativeMode) -> Result<ResidualReport> {
    on_grid(field, Frame::Polar, grid, params, mode)
}

/// Residuals in the field's own frame.
pub fn residual(field: Field, grid: &GridSpec, params: &FlowParameters, mode: DerivativeMode) -> Result<ResidualReport> {
    let frame = field.frame();
    on_grid(field, frame, grid, params, mode)
}

struct Corrupted {
    inner: Field,
    factor: f64,
}

impl FlowField for Corrupted {
    fn frame(&self) -> Frame {
        self.inner.frame()
    }
    fn system(&self) -> System {
        self.inner.system()
    }
    fn window(&self) -> Window {
        self.inner.window()
    }
    fn radial_limit(&self, t: f64) -> f64 {
        self.inner.radial_limit(t)
    }
    fn name(&self) -> String {
        format!("corrupted[h*{}]({})", self.factor, self.inner.name())
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let [a, b, h] = self.inner.eval_jet_unchecked(p)?;
        Ok([a, b, h * self.factor])
    }
}

/// The same field with its depth multiplied by `factor`. A fault-injection
/// fixture for sensitivity checks.
pub fn corrupt_depth(field: Field, factor: f64) -> Field {
    Arc::new(Corrupted { inner: field, factor })
}
