//! Browser bindings. The `demo` functions are plain Rust and carry the
//! logic; the `#[wasm_bindgen]` wrappers only convert types.

use wasm_bindgen::prelude::*;

pub mod demo {
    use std::f64::consts::PI;

    use rsw_core::flow::in_frame;
    use rsw_core::ode::AdaptiveOptions;
    use rsw_core::solutions::{closure_condition, default_grid, make_family, Closure, FamilyId, FamilyParams};
    use rsw_core::verify::{integrate_trajectory, residual};
    use rsw_core::{DerivativeMode, Field, FieldExt, FlowParameters, Frame};

    pub struct Setup {
        pub id: FamilyId,
        pub fp: FamilyParams,
        pub params: FlowParameters,
        pub field: Field,
    }

    /// Builds a family from `name` and a list like `alpha=2, h0=1, f=1`.
    /// `f` and `g` set the physics; everything else is a family parameter.
    pub fn setup(name: &str, spec: &str) -> Result<Setup, String> {
        let id: FamilyId = name.parse().map_err(|e: rsw_core::RswError| e.to_string())?;
        let mut fp = FamilyParams::defaults(id);
        let d = id.default_flow_params();
        let (mut f, mut g) = (d.f(), d.g());
        for item in spec.split([',', ';', '\n']).map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| format!("expected name=value, got {item:?}"))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<f64>().map_err(|_| format!("{k}: not a number: {v:?}"));
            match k {
                "f" => f = num()?,
                "g" => g = num()?,
                _ => fp.set(k, v).map_err(|e| e.to_string())?,
            }
        }
        let params = FlowParameters::new(f, g).map_err(|e| e.to_string())?;
        let field = make_family(id, &fp, &params).map_err(|e| e.to_string())?;
        Ok(Setup { id, fp, params, field })
    }

    /// `n` samples `(r, h)` along the ray θ = 0 at time `t`.
    pub fn depth_profile(s: &Setup, t: f64, n: usize) -> Result<Vec<[f64; 2]>, String> {
        if n < 2 {
            return Err("need at least two samples".into());
        }
        let polar = in_frame(s.field.clone(), Frame::Polar);
        let w = polar.window();
        let edge = polar.radial_limit(t);
        let (lo, hi) = if edge.is_finite() {
            (0.0, edge)
        } else {
            let grid = default_grid(s.id, s.field.as_ref());
            let hi = if s.field.frame() == Frame::Polar { grid.a.hi } else { 2.0 };
            (w.r_lo.max(0.0), w.r_hi.min(hi.max(w.r_lo + 1.0)))
        };
        // the axis itself is singular for swirling flows
        let lo = if w.r_lo > 0.0 { lo.max(w.r_lo * (1.0 + 1e-9)) } else { lo.max(1e-9 * hi) };
        let hi = if w.r_hi.is_finite() && hi >= w.r_hi { w.r_hi * (1.0 - 1e-9) } else { hi };
        (0..n)
            .map(|i| {
                let r = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                polar.eval([t, r, 0.0]).map(|s| [r, s[2]]).map_err(|e| e.to_string())
            })
            .collect()
    }

    /// Particle path from `(r0, 0)` at `t = 0`, sampled `n` times over
    /// `periods` rotation periods, as `(x, y)` pairs.
    pub fn particle_path(s: &Setup, r0: f64, periods: f64, n: usize) -> Result<Vec<[f64; 2]>, String> {
        if !(periods > 0.0) || n < 2 {
            return Err("need a positive span and at least two samples".into());
        }
        let t0 = s.field.window().t_lo.max(0.0);
        let t1 = t0 + periods * s.params.period();
        let times: Vec<f64> = (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect();
        let tr = integrate_trajectory(&s.field, &s.params, r0, 0.0, &times, AdaptiveOptions::default())
            .map_err(|e| e.to_string())?;
        Ok(tr.points.iter().map(|p| [p.x, p.y]).collect())
    }

    pub fn closure_text(s: &Setup, r0: f64) -> String {
        match closure_condition(&s.fp, &s.params, r0) {
            Ok(Closure::Closed { m, big_m }) => {
                format!("closed: {m} turn(s) in {big_m} period(s) ({:.4} time units)", big_m as f64 * 2.0 * PI / s.params.f())
            }
            Ok(Closure::QuasiClosed { ratio }) => format!("quasi-closed, rotation ratio {ratio:.6}"),
            Err(e) => e.to_string(),
        }
    }

    /// Residual of the governing equations on the family's default grid.
    pub fn residual_summary(s: &Setup) -> Result<String, String> {
        let grid = default_grid(s.id, s.field.as_ref());
        let rep = residual(s.field.clone(), &grid, &s.params, DerivativeMode::Analytic).map_err(|e| e.to_string())?;
        let verdict = if rep.max_overall() < 1e-6 { "pass" } else { "FAIL" };
        Ok(format!(
            "{}: {} points, max residual [{:.2e}, {:.2e}, {:.2e}] ({verdict})",
            rep.name, rep.n_points, rep.max[0], rep.max[1], rep.max[2]
        ))
    }

    pub fn family_names() -> Vec<&'static str> {
        FamilyId::ALL.iter().map(|id| id.name()).collect()
    }

    pub fn default_spec(name: &str) -> Result<String, String> {
        let id: FamilyId = name.parse().map_err(|e: rsw_core::RswError| e.to_string())?;
        let pairs: Vec<String> = FamilyParams::defaults(id).entries().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        Ok(pairs.join(", "))
    }
}

fn flat(points: Vec<[f64; 2]>) -> Vec<f64> {
    points.into_iter().flatten().collect()
}

/// Family names, comma separated.
#[wasm_bindgen(js_name = familyNames)]
pub fn family_names() -> String {
    demo::family_names().join(",")
}

#[wasm_bindgen(js_name = defaultParams)]
pub fn default_params(family: &str) -> Result<String, JsError> {
    demo::default_spec(family).map_err(|e| JsError::new(&e))
}

/// Interleaved `r, h` samples of the depth along θ = 0.
#[wasm_bindgen(js_name = depthProfile)]
pub fn depth_profile(family: &str, params: &str, t: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let s = demo::setup(family, params).map_err(|e| JsError::new(&e))?;
    demo::depth_profile(&s, t, n).map(flat).map_err(|e| JsError::new(&e))
}

/// Interleaved `x, y` samples of a particle path.
#[wasm_bindgen(js_name = particlePath)]
pub fn particle_path(family: &str, params: &str, r0: f64, periods: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let s = demo::setup(family, params).map_err(|e| JsError::new(&e))?;
    demo::particle_path(&s, r0, periods, n).map(flat).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = closure)]
pub fn closure(family: &str, params: &str, r0: f64) -> Result<String, JsError> {
    let s = demo::setup(family, params).map_err(|e| JsError::new(&e))?;
    Ok(demo::closure_text(&s, r0))
}

#[wasm_bindgen(js_name = residualSummary)]
pub fn residual_summary(family: &str, params: &str) -> Result<String, JsError> {
    let s = demo::setup(family, params).map_err(|e| JsError::new(&e))?;
    demo::residual_summary(&s).map_err(|e| JsError::new(&e))
}
