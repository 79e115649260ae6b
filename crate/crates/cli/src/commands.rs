use std::collections::BTreeMap;

use rayon::prelude::*;
use rsw_core::liealg::{published_table, structure_constants, FitOptions, TableFamily};
use rsw_core::ode::AdaptiveOptions;
use rsw_core::solutions::{
    closure_condition, default_grid, make_family, trajectory_formula, Closure, FamilyId, FamilyParams,
};
use rsw_core::transforms::{map_field_rsw_to_sw, map_field_sw_to_rsw, transport_solution};
use rsw_core::verify::{corrupt_depth, integrate_trajectory, residual_points, Axis, ResidualReport};
use rsw_core::flow::in_frame;
use rsw_core::{DerivativeMode, Field, FieldExt, FlowParameters, Frame};
use serde_json::{json, Value};

use crate::args::*;
use crate::failure::Failure;
use crate::output::{emit, num, to_json, Table};

const SCHEMA: u32 = 1;
const PASS_ANALYTIC: f64 = 1e-6;
const PASS_FD: f64 = 1e-4;

struct Setup {
    id: FamilyId,
    fp: FamilyParams,
    params: FlowParameters,
}

fn flow_params(id: FamilyId, physics: &Physics) -> Result<FlowParameters, Failure> {
    let d = id.default_flow_params();
    Ok(FlowParameters::new(physics.f.unwrap_or(d.f()), physics.g.unwrap_or(d.g()))?)
}

fn setup(name: &str, args: &FamilyArgs, physics: &Physics, required: &[&str]) -> Result<Setup, Failure> {
    let id: FamilyId = name.parse()?;
    let pairs = args.pairs();
    let mut fp = FamilyParams::defaults(id);
    for key in required {
        let settable = fp.entries().iter().any(|(k, _)| k == key);
        if settable && !pairs.iter().any(|(k, _)| k == key) {
            return Err(Failure::usage(format!("family {id} needs --{}", key.replace('_', "-"))));
        }
    }
    for (k, v) in &pairs {
        fp.set(k, v)?;
    }
    Ok(Setup {
        id,
        fp,
        params: flow_params(id, physics)?,
    })
}

fn params_json(fp: &FamilyParams) -> Value {
    let map: BTreeMap<&str, String> = fp.entries().into_iter().collect();
    json!(map)
}

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    if s.contains(':') {
        return Ok(s.parse::<Axis>()?.values());
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::usage(format!("not a number: {v:?} in {s:?}")))
        })
        .collect()
}

fn parse_axis(s: &str, name: &str) -> Result<Vec<f64>, Failure> {
    let a: Axis = s
        .parse()
        .map_err(|_| Failure::usage(format!("--{name} expects lo:hi:count, got {s:?}")))?;
    if a.n < 2 {
        return Err(Failure::usage(format!("--{name} needs at least 2 points, got {s:?}")));
    }
    Ok(a.values())
}

/// Tensor sample set, ordered by `t`, then `a`, then `b`.
struct Sampling {
    times: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    fraction: bool,
}

impl Sampling {
    fn points(&self, field: &dyn rsw_core::FlowField) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.times.len() * self.a.len() * self.b.len());
        for &t in &self.times {
            let scale = if self.fraction { field.radial_limit(t) } else { 1.0 };
            for &a in &self.a {
                for &b in &self.b {
                    out.push([t, a * scale, b]);
                }
            }
        }
        out
    }

    /// Grid read off the field's validity window.
    fn from_window(field: &dyn rsw_core::FlowField, frame: Frame) -> Self {
        let w = field.window();
        let pad = w.guard.max(0.05);
        let (lo, hi) = match (w.t_lo.is_finite(), w.t_hi.is_finite()) {
            (true, true) => {
                let span = w.t_hi - w.t_lo;
                (w.t_lo + 0.02 * span, w.t_hi - 0.02 * span)
            }
            (true, false) => (w.t_lo + pad, w.t_lo + pad + 5.0),
            (false, true) => (w.t_hi - pad - 5.0, w.t_hi - pad),
            (false, false) => (-3.0, 3.0),
        };
        let times = Axis::new(lo, hi, 10).values();
        let mid = 0.5 * (lo + hi);
        match frame {
            Frame::Cartesian => Self {
                times,
                a: Axis::new(-2.0, 2.0, 10).values(),
                b: Axis::new(-2.0, 2.0, 10).values(),
                fraction: false,
            },
            Frame::Polar if field.radial_limit(mid).is_finite() => Self {
                times,
                a: Axis::new(0.02, 0.95, 10).values(),
                b: Axis::new(0.1, 6.0, 10).values(),
                fraction: true,
            },
            Frame::Polar => {
                let r_lo = if w.r_lo > 0.0 { 1.05 * w.r_lo } else { 0.1 };
                let r_hi = if w.r_hi.is_finite() { 0.95 * w.r_hi } else { r_lo + 2.0 };
                Self {
                    times,
                    a: Axis::new(r_lo, r_hi.min(r_lo + 20.0), 10).values(),
                    b: Axis::new(0.1, 6.0, 10).values(),
                    fraction: false,
                }
            }
        }
    }

    fn with_overrides(mut self, g: &GridArgs, frame: Frame) -> Result<Self, Failure> {
        if let Some(t) = &g.t {
            self.times = parse_list(t)?;
        }
        let (a_name, a, b) = match frame {
            Frame::Polar => {
                if g.x.is_some() || g.y.is_some() {
                    return Err(Failure::usage("--x/--y need --frame cartesian"));
                }
                ("r", &g.r, &g.theta)
            }
            Frame::Cartesian => {
                if g.r.is_some() || g.theta.is_some() || g.r_fraction.is_some() {
                    return Err(Failure::usage("--r/--theta need --frame polar"));
                }
                ("x", &g.x, &g.y)
            }
        };
        if let Some(a) = a {
            self.a = parse_axis(a, a_name)?;
            self.fraction = false;
        }
        if let Some(fr) = &g.r_fraction {
            self.a = parse_axis(fr, "r-fraction")?;
            self.fraction = true;
        }
        if let Some(b) = b {
            self.b = parse_list(b)?;
        }
        if self.times.is_empty() || self.b.is_empty() {
            return Err(Failure::usage("empty grid"));
        }
        Ok(self)
    }
}

fn catalog_sampling(id: FamilyId, field: &dyn rsw_core::FlowField) -> Sampling {
    let d = default_grid(id, field);
    Sampling {
        times: d.t.values(),
        a: d.a.values(),
        b: d.b.values(),
        fraction: d.radial_fraction,
    }
}

fn frame_of(arg: Option<FrameArg>, native: Frame) -> Frame {
    match arg {
        Some(FrameArg::Polar) => Frame::Polar,
        Some(FrameArg::Cartesian) => Frame::Cartesian,
        None => native,
    }
}

fn columns(frame: Frame) -> [&'static str; 6] {
    match frame {
        Frame::Polar => ["t", "r", "theta", "U", "V", "h"],
        Frame::Cartesian => ["t", "x", "y", "u", "v", "h"],
    }
}

fn frame_name(frame: Frame) -> &'static str {
    match frame {
        Frame::Polar => "polar",
        Frame::Cartesian => "cartesian",
    }
}

fn sample_rows(view: &Field, points: &[[f64; 3]]) -> Result<Vec<[f64; 6]>, Failure> {
    let rows: Vec<rsw_core::Result<[f64; 6]>> = points
        .par_iter()
        .map(|p| view.eval(*p).map(|s| [p[0], p[1], p[2], s[0], s[1], s[2]]))
        .collect();
    rows.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn field_output(rows: &[[f64; 6]], frame: Frame, meta: Value, format: Format) -> Result<Vec<u8>, Failure> {
    let cols = columns(frame);
    match format {
        Format::Csv => {
            let mut table = Table::new(&cols);
            for r in rows {
                table.push_nums(r);
            }
            table.to_csv()
        }
        Format::Json => {
            let mut doc = meta;
            doc["columns"] = json!(cols);
            doc["rows"] = json!(rows);
            to_json(&doc)
        }
    }
}

pub fn field(cmd: FieldCmd) -> Result<(), Failure> {
    let s = setup(&cmd.family, &cmd.params, &cmd.physics, &["alpha"])?;
    let field = make_family(s.id, &s.fp, &s.params)?;
    let frame = frame_of(cmd.frame, field.frame());
    let view = in_frame(field.clone(), frame);
    let base = if frame == field.frame() {
        catalog_sampling(s.id, field.as_ref())
    } else {
        Sampling::from_window(view.as_ref(), frame)
    };
    let sampling = base.with_overrides(&cmd.grid, frame)?;
    let rows = sample_rows(&view, &sampling.points(view.as_ref()))?;
    let meta = json!({
        "schema": SCHEMA,
        "command": "field",
        "family": s.id.name(),
        "params": params_json(&s.fp),
        "f": s.params.f(),
        "g": s.params.g(),
        "frame": frame_name(frame),
    });
    emit(&field_output(&rows, frame, meta, cmd.output.format)?, cmd.output.out.as_deref())
}

fn closure_text(c: &Closure) -> String {
    match c {
        Closure::Closed { m, big_m } => format!("closed m={m} M={big_m}"),
        Closure::QuasiClosed { ratio } => format!("quasi-closed ratio={ratio}"),
    }
}

pub fn trajectory(cmd: TrajectoryCmd) -> Result<(), Failure> {
    let s = setup(&cmd.family, &cmd.params, &cmd.physics, &["alpha"])?;
    let field = make_family(s.id, &s.fp, &s.params)?;
    let times = match &cmd.t {
        Some(t) => parse_list(t)?,
        None => Axis::new(0.0, s.params.period(), 201).values(),
    };
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Failure::usage("--t must be strictly increasing"));
    }
    if !(cmd.tol > 0.0) {
        return Err(Failure::usage(format!("--tol must be positive, got {}", cmd.tol)));
    }
    let opts = AdaptiveOptions {
        tol: cmd.tol,
        ..AdaptiveOptions::default()
    };

    let mut table = Table::new(&["particle", "t", "r", "theta", "x", "y", "circle_defect"]);
    let mut particles = Vec::new();
    for (i, &r0) in cmd.r0.iter().enumerate() {
        if !(r0 >= 0.0) {
            return Err(Failure::usage(format!("--r0 must be nonnegative, got {r0}")));
        }
        let closure = closure_condition(&s.fp, &s.params, r0).ok();
        let summary = if r0 == 0.0 {
            "fixed".to_string()
        } else {
            closure.as_ref().map_or_else(|| "open".into(), closure_text)
        };
        eprintln!("particle {i} r0={r0}: {summary}");
        let mut rows: Vec<[f64; 6]> = Vec::new();
        let mut defects: Vec<Option<f64>> = Vec::new();
        if r0 == 0.0 {
            // the axis is a fixed point of every rotationally symmetric flow
            field.check([times[0], 0.0, cmd.theta0]).or_else(|_| {
                in_frame(field.clone(), Frame::Cartesian).check([times[0], 0.0, 0.0])
            })?;
            rows.push([times[0], 0.0, cmd.theta0, 0.0, 0.0, 0.0]);
            defects.push(None);
        } else {
            let traj = integrate_trajectory(&field, &s.params, r0, cmd.theta0, &times, opts)?;
            let circle = trajectory_formula(&s.fp, &s.params, r0, cmd.theta0)
                .ok()
                .filter(|_| s.id != FamilyId::ConstantSwImage && times[0] == 0.0)
                .and_then(|tf| tf.circle);
            for p in &traj.points {
                rows.push([p.t, p.r, p.theta, p.x, p.y, 0.0]);
                defects.push(circle.map(|c| c.defect(p.x, p.y)));
            }
        }
        for (row, d) in rows.iter().zip(&defects) {
            let mut rec = vec![i.to_string()];
            rec.extend(row[..5].iter().map(|&v| num(v)));
            rec.push(d.map(num).unwrap_or_default());
            table.rows.push(rec);
        }
        particles.push(json!({
            "r0": r0,
            "theta0": cmd.theta0,
            "summary": summary,
            "closure": closure,
            "rows": rows.iter().map(|r| &r[..5]).collect::<Vec<_>>(),
            "circle_defect": defects,
        }));
    }
    let bytes = match cmd.output.format {
        Format::Csv => table.to_csv()?,
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "command": "trajectory",
            "family": s.id.name(),
            "params": params_json(&s.fp),
            "f": s.params.f(),
            "g": s.params.g(),
            "columns": ["t", "r", "theta", "x", "y"],
            "particles": particles,
        }))?,
    };
    emit(&bytes, cmd.output.out.as_deref())
}

fn report_json(id: FamilyId, fp: &FamilyParams, p: &FlowParameters, rep: &ResidualReport, threshold: f64) -> Value {
    json!({
        "family": id.name(),
        "params": params_json(fp),
        "f": p.f(),
        "g": p.g(),
        "frame": frame_name(rep.frame),
        "n_points": rep.n_points,
        "max": rep.max,
        "rms": rep.rms,
        "max_overall": rep.max_overall(),
        "worst": rep.worst,
        "pass": rep.max_overall() < threshold,
    })
}

pub fn residual(cmd: ResidualCmd) -> Result<(), Failure> {
    let (mode, threshold) = match cmd.mode {
        ModeArg::Analytic => (DerivativeMode::Analytic, cmd.threshold.unwrap_or(PASS_ANALYTIC)),
        ModeArg::Fd => {
            if !(cmd.fd_step > 0.0 && cmd.fd_step.is_finite()) {
                return Err(Failure::usage(format!("--fd-step must be positive, got {}", cmd.fd_step)));
            }
            (
                DerivativeMode::FiniteDifference { step: cmd.fd_step },
                cmd.threshold.unwrap_or(PASS_FD),
            )
        }
    };
    if !(threshold > 0.0) {
        return Err(Failure::usage(format!("--threshold must be positive, got {threshold}")));
    }
    if let Some(c) = cmd.corrupt_depth {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Failure::usage(format!("--corrupt-depth must be positive, got {c}")));
        }
    }
    let setups = if cmd.all {
        if !cmd.params.pairs().is_empty() {
            return Err(Failure::usage("family parameters need a single --family"));
        }
        FamilyId::ALL
            .into_iter()
            .map(|id| {
                Ok(Setup {
                    id,
                    fp: FamilyParams::defaults(id),
                    params: flow_params(id, &cmd.physics)?,
                })
            })
            .collect::<Result<Vec<_>, Failure>>()?
    } else {
        vec![setup(cmd.family.as_deref().unwrap_or_default(), &cmd.params, &cmd.physics, &[])?]
    };

    let mut reports = Vec::new();
    let mut pass = true;
    for s in &setups {
        let mut field = make_family(s.id, &s.fp, &s.params)?;
        let sampling = catalog_sampling(s.id, field.as_ref());
        let sampling = if cmd.all { sampling } else { sampling.with_overrides(&cmd.grid, field.frame())? };
        let points = sampling.points(field.as_ref());
        if let Some(c) = cmd.corrupt_depth {
            field = corrupt_depth(field, c);
        }
        let rep = residual_points(field.as_ref(), &points, &s.params, mode)?;
        let ok = rep.max_overall() < threshold;
        pass &= ok;
        eprintln!(
            "{:<24} max {:.3e}  {}",
            s.id.name(),
            rep.max_overall(),
            if ok { "ok" } else { "FAIL" }
        );
        reports.push(report_json(s.id, &s.fp, &s.params, &rep, threshold));
    }
    let doc = json!({
        "schema": SCHEMA,
        "command": "residual",
        "mode": match mode { DerivativeMode::Analytic => "analytic", _ => "fd" },
        "fd_step": match mode { DerivativeMode::FiniteDifference { step } => Some(step), _ => None },
        "threshold": threshold,
        "corrupt_depth": cmd.corrupt_depth,
        "reports": reports,
        "pass": pass,
    });
    emit(&to_json(&doc)?, cmd.out.as_deref())?;
    if pass {
        Ok(())
    } else {
        Err(Failure::verify(format!("residual above {threshold:e}")))
    }
}

pub fn commutators(cmd: CommutatorsCmd) -> Result<(), Failure> {
    let params = FlowParameters::new(cmd.f, 1.0)?;
    let (family, symbol) = match cmd.family {
        TableArg::Y => (TableFamily::RswY, "Y"),
        TableArg::Z => (TableFamily::SwZ, "Z"),
    };
    let opts = FitOptions {
        seed: cmd.seed,
        ..FitOptions::default()
    };
    let table = structure_constants(family, &params, opts)?;
    let reference = published_table();
    let diff = table.max_abs_diff(&reference);
    let matches = diff < 1e-9;
    let mut entries = Vec::new();
    let mut csv = Table::new(&["i", "j", "k", "coefficient"]);
    for i in 1..=9 {
        for j in 1..=9 {
            for (k, &c) in table.entry(i, j).iter().enumerate() {
                if c != 0.0 {
                    entries.push(json!({ "i": i, "j": j, "k": k + 1, "coefficient": c }));
                    csv.rows.push(vec![i.to_string(), j.to_string(), (k + 1).to_string(), num(c)]);
                }
            }
        }
    }
    eprintln!("[{symbol}] table matches the published one: {matches}");
    let bytes = match cmd.output.format {
        Format::Csv => csv.to_csv()?,
        Format::Json => to_json(&json!({
            "schema": SCHEMA,
            "command": "commutators",
            "family": symbol,
            "f": cmd.f,
            "entries": entries,
            "rendered": table.render(symbol),
            "matches_paper_table": matches,
            "max_difference": diff,
        }))?,
    };
    emit(&bytes, cmd.output.out.as_deref())?;
    if matches {
        Ok(())
    } else {
        Err(Failure::verify(format!("table differs from the published one by {diff:e}")))
    }
}

pub fn map(cmd: MapCmd) -> Result<(), Failure> {
    let mut fargs = cmd.params.clone();
    let alpha = if cmd.transport {
        let raw = fargs
            .alpha
            .take()
            .ok_or_else(|| Failure::usage("--transport needs --alpha"))?;
        let a: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("--alpha expects a number, got {raw:?}")))?;
        Some(a)
    } else {
        None
    };
    let s = setup(&cmd.family, &fargs, &cmd.physics, &[])?;
    let source = make_family(s.id, &s.fp, &s.params)?;
    let (image, label) = match (alpha, cmd.direction) {
        (Some(a), _) => (transport_solution(source, a, &s.params)?, format!("transport alpha={a}")),
        (None, Some(DirectionArg::Rsw2sw)) => (map_field_rsw_to_sw(source, &s.params)?, "rsw2sw".into()),
        (None, Some(DirectionArg::Sw2rsw)) => (map_field_sw_to_rsw(source, &s.params)?, "sw2rsw".into()),
        (None, None) => return Err(Failure::usage("give --direction or --transport")),
    };
    let frame = frame_of(cmd.frame, image.frame());
    let view = in_frame(image.clone(), frame);
    let sampling = Sampling::from_window(view.as_ref(), frame).with_overrides(&cmd.grid, frame)?;
    let points = sampling.points(view.as_ref());
    let rows = sample_rows(&view, &points)?;
    let rep = residual_points(view.as_ref(), &points, &s.params, DerivativeMode::Analytic)?;
    let threshold = cmd.threshold.unwrap_or(PASS_ANALYTIC);
    let ok = rep.max_overall() < threshold;
    eprintln!("{label} of {}: image residual {:.3e}", s.id.name(), rep.max_overall());
    let meta = json!({
        "schema": SCHEMA,
        "command": "map",
        "family": s.id.name(),
        "params": params_json(&s.fp),
        "f": s.params.f(),
        "g": s.params.g(),
        "operation": label,
        "frame": frame_name(frame),
        "residual": {
            "max": rep.max,
            "max_overall": rep.max_overall(),
            "n_points": rep.n_points,
            "threshold": threshold,
            "pass": ok,
        },
    });
    emit(&field_output(&rows, frame, meta, cmd.output.format)?, cmd.output.out.as_deref())?;
    if ok {
        Ok(())
    } else {
        Err(Failure::verify(format!("image residual {:e} above {threshold:e}", rep.max_overall())))
    }
}
