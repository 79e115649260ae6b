//! The change of variables between the rotating and classical systems, the
//! finite actions of the projective-type generators, and transport of
//! solutions along the `Y_9` action.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::{
    in_frame, CartesianPoint, CartesianState, Field, FieldExt, FlowField, FlowParameters, Frame, PolarPoint,
    PolarState, System, Window,
};
use crate::jet::{Scalar, J3};

/// `|sin(ft/2)|` (or `|cos(ft/2)|`) below this counts as a special time.
pub const SPECIAL_TIME_GUARD: f64 = 1e-9;

pub fn check_regular_time(t: f64, f: f64) -> Result<()> {
    if !t.is_finite() || (0.5 * f * t).sin().abs() < SPECIAL_TIME_GUARD {
        return Err(RswError::SingularTime { t });
    }
    Ok(())
}

/// `(t, x, y) -> (t', x', y')`.
pub fn point_forward<S: Scalar>(f: f64, t: S, x: S, y: S) -> [S; 3] {
    let half = t * (0.5 * f);
    let cot = half.cos() / half.sin();
    [-(cot / f), -((x * cot - y) * 0.5), -((x + y * cot) * 0.5)]
}

/// Inverse of [`point_forward`], with `t` on the branch `(0, 2π/f)`.
pub fn point_inverse<S: Scalar>(f: f64, tp: S, xp: S, yp: S) -> [S; 3] {
    let k = -(tp * f);
    let t = ((tp * f).atan() * 2.0 + PI) / f;
    let n = k * k + 1.0;
    [t, -((k * xp + yp) * 2.0 / n), (xp - k * yp) * 2.0 / n]
}

/// State part of the map at a given source point.
pub fn state_forward<S: Scalar>(f: f64, t: S, x: S, y: S, u: S, v: S, h: S) -> [S; 3] {
    let ft = t * f;
    let (sn, d) = (ft.sin(), -(ft.cos()) + 1.0);
    [
        -((u * sn - v * d - x * f) * 0.5),
        -((u * d + v * sn - y * f) * 0.5),
        h * d * 0.5,
    ]
}

/// Solves [`state_forward`] for `(u, v, h)` given the primed state.
pub fn state_inverse<S: Scalar>(f: f64, t: S, x: S, y: S, up: S, vp: S, hp: S) -> [S; 3] {
    let ft = t * f;
    let (sn, d) = (ft.sin(), -(ft.cos()) + 1.0);
    let a = x * f - up * 2.0;
    let b = y * f - vp * 2.0;
    let den = d * 2.0;
    [(a * sn + b * d) / den, (b * sn - a * d) / den, hp * 2.0 / d]
}

/// The full map on `(t, x, y, u, v, h)`.
pub fn rsw_to_sw_coords<S: Scalar>(f: f64, p: &[S; 6]) -> [S; 6] {
    let [t, x, y, u, v, h] = *p;
    let [tp, xp, yp] = point_forward(f, t, x, y);
    let [up, vp, hp] = state_forward(f, t, x, y, u, v, h);
    [tp, xp, yp, up, vp, hp]
}

pub fn sw_to_rsw_coords<S: Scalar>(f: f64, p: &[S; 6]) -> [S; 6] {
    let [tp, xp, yp, up, vp, hp] = *p;
    let [t, x, y] = point_inverse(f, tp, xp, yp);
    let [u, v, h] = state_inverse(f, t, x, y, up, vp, hp);
    [t, x, y, u, v, h]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    RswToSw,
    SwToRsw,
}

#[derive(Clone, Copy, Debug)]
pub struct EquivalenceMap {
    pub params: FlowParameters,
    pub direction: Direction,
}

impl EquivalenceMap {
    pub fn new(params: FlowParameters, direction: Direction) -> Self {
        Self { params, direction }
    }

    pub fn apply(&self, p: CartesianPoint, s: CartesianState) -> Result<(CartesianPoint, CartesianState)> {
        let f = self.params.f();
        let v = [p.t, p.x, p.y, s.u, s.v, s.h];
        let out = match self.direction {
            Direction::RswToSw => {
                check_regular_time(p.t, f)?;
                rsw_to_sw_coords(f, &v)
            }
            Direction::SwToRsw => {
                if !p.t.is_finite() {
                    return Err(RswError::SingularTime { t: p.t });
                }
                sw_to_rsw_coords(f, &v)
            }
        };
        Ok((
            CartesianPoint {
                t: out[0],
                x: out[1],
                y: out[2],
            },
            CartesianState {
                u: out[3],
                v: out[4],
                h: out[5],
            },
        ))
    }

    /// Image of a point of the source space (state ignored).
    pub fn map_point(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        let f = self.params.f();
        match self.direction {
            Direction::RswToSw => {
                check_regular_time(p[0], f)?;
                Ok(point_forward(f, p[0], p[1], p[2]))
            }
            Direction::SwToRsw => Ok(point_inverse(f, p[0], p[1], p[2])),
        }
    }
}

/// Applies the equivalence map to a point and its state.
pub fn equiv_point(
    m: &EquivalenceMap,
    p: CartesianPoint,
    s: CartesianState,
) -> Result<(CartesianPoint, CartesianState)> {
    m.apply(p, s)
}

/// A field pulled through the equivalence map.
struct MappedField {
    src: Field,
    f: f64,
    direction: Direction,
    window: Window,
}

impl FlowField for MappedField {
    fn frame(&self) -> Frame {
        Frame::Cartesian
    }

    fn system(&self) -> System {
        match self.direction {
            Direction::RswToSw => System::NonRotating,
            Direction::SwToRsw => System::Rotating,
        }
    }

    fn window(&self) -> Window {
        self.window
    }

    fn name(&self) -> String {
        match self.direction {
            Direction::RswToSw => format!("sw-image({})", self.src.name()),
            Direction::SwToRsw => format!("rsw-image({})", self.src.name()),
        }
    }

    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let f = self.f;
        let [t, x, y] = *p;
        match self.direction {
            Direction::RswToSw => {
                // p is an SW point; its RSW preimage carries the jets
                let [t0, x0, y0] = point_inverse(f, t, x, y);
                let q = [t0, x0, y0];
                self.src.check(q.map(|j| j.v))?;
                let [u, v, h] = self.src.eval_jet_unchecked(&q)?;
                Ok(state_forward(f, t0, x0, y0, u, v, h))
            }
            Direction::SwToRsw => {
                check_regular_time(t.v, f)?;
                let q = point_forward(f, t, x, y);
                self.src.check(q.map(|j| j.v))?;
                let [up, vp, hp] = self.src.eval_jet_unchecked(&q)?;
                Ok(state_inverse(f, t, x, y, up, vp, hp))
            }
        }
    }
}

fn t_prime(f: f64, t: f64) -> f64 {
    if t <= 0.0 {
        f64::NEG_INFINITY
    } else if t >= 2.0 * PI / f {
        f64::INFINITY
    } else {
        -1.0 / ((0.5 * f * t).tan() * f)
    }
}

fn t_from_prime(f: f64, tp: f64) -> f64 {
    (2.0 * (tp * f).atan() + PI) / f
}

/// The classical-system field obtained from a rotating-system solution.
pub fn map_field_rsw_to_sw(field: Field, params: &FlowParameters) -> Result<Field> {
    let f = params.f();
    if field.system() != System::Rotating {
        return Err(RswError::InvalidParams("source field does not solve the rotating system".into()));
    }
    let w = field.window();
    let lo = w.t_lo.max(0.0);
    let hi = w.t_hi.min(params.period());
    if lo >= hi {
        return Err(RswError::InvalidParams("source window does not meet (0, 2π/f)".into()));
    }
    let window = Window {
        t_lo: t_prime(f, lo),
        t_hi: t_prime(f, hi),
        guard: w.guard,
        ..Window::unbounded()
    };
    Ok(Arc::new(MappedField {
        src: in_frame(field, Frame::Cartesian),
        f,
        direction: Direction::RswToSw,
        window,
    }))
}

/// The rotating-system field on `(0, 2π/f)` obtained from a classical one.
pub fn map_field_sw_to_rsw(field: Field, params: &FlowParameters) -> Result<Field> {
    let f = params.f();
    if field.system() != System::NonRotating {
        return Err(RswError::InvalidParams("source field does not solve the classical system".into()));
    }
    let w = field.window();
    let window = Window {
        t_lo: t_from_prime(f, w.t_lo).max(0.0),
        t_hi: t_from_prime(f, w.t_hi).min(params.period()),
        guard: SPECIAL_TIME_GUARD * params.period(),
        ..Window::unbounded()
    };
    Ok(Arc::new(MappedField {
        src: in_frame(field, Frame::Cartesian),
        f,
        direction: Direction::SwToRsw,
        window,
    }))
}

/// `χ(t) = 2πk/f` with `t ∈ ((2k−1)π/f, (2k+1)π/f)`.
pub fn chi(t: f64, f: f64) -> f64 {
    let k = (f * t / (2.0 * PI) + 0.5).floor();
    2.0 * PI * k / f
}

/// `χ₁(t) = (2k+1)π/f` with `t ∈ (2kπ/f, 2(k+1)π/f)`.
pub fn chi1(t: f64, f: f64) -> f64 {
    let k = (f * t / (2.0 * PI)).floor();
    (2.0 * k + 1.0) * PI / f
}

/// Branch bookkeeping for the angle-valued time maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchTracker {
    /// Offset [`chi`], used with `τ = tan(ft/2)`.
    Chi,
    /// Offset [`chi1`], used with `σ = −cot(ft/2)`.
    Chi1,
}

impl BranchTracker {
    pub fn offset(&self, t: f64, f: f64) -> f64 {
        match self {
            BranchTracker::Chi => chi(t, f),
            BranchTracker::Chi1 => chi1(t, f),
        }
    }
}

/// One-parameter action of a projective-type generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GroupAction {
    /// `Y_9` with `α = exp(−2a)`.
    Y9 { alpha: f64 },
    Y8 { a: f64 },
    Y7 { a: f64 },
}

impl GroupAction {
    pub fn y9(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(RswError::InvalidParams(format!("alpha must be positive, got {alpha}")));
        }
        Ok(GroupAction::Y9 { alpha })
    }

    pub fn y9_from_a(a: f64) -> Result<Self> {
        Self::y9((-2.0 * a).exp())
    }

    pub fn y8(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(RswError::InvalidParams("group parameter must be finite".into()));
        }
        Ok(GroupAction::Y8 { a })
    }

    pub fn y7(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(RswError::InvalidParams("group parameter must be finite".into()));
        }
        Ok(GroupAction::Y7 { a })
    }
}

fn y9_action(alpha: f64, p: PolarPoint, s: PolarState, f: f64) -> (PolarPoint, PolarState) {
    let PolarPoint { t, r, theta } = p;
    let (half_s, half_c) = (0.5 * f * t).sin_cos();
    if half_c.abs() < SPECIAL_TIME_GUARD {
        let sa = alpha.sqrt();
        return (
            PolarPoint { t, r: r / sa, theta },
            PolarState {
                radial: s.radial * sa,
                azimuthal: (s.azimuthal + (alpha - 1.0) / (2.0 * alpha) * f * r) * sa,
                h: alpha * s.h,
            },
        );
    }
    let tau = half_s / half_c;
    let (t2, at2) = (tau * tau, alpha * alpha * tau * tau);
    let ratio = (1.0 + at2) / (alpha * (1.0 + t2));
    let k = ratio.sqrt();
    let tb = 2.0 / f * (alpha * tau).atan() + chi(t, f);
    (
        PolarPoint {
            t: tb,
            r: r / k,
            theta: theta + tau.atan() - (alpha * tau).atan(),
        },
        PolarState {
            radial: (s.radial - 0.5 * f * r * (alpha * alpha - 1.0) * tau / (1.0 + at2)) * k,
            azimuthal: (s.azimuthal + 0.5 * f * r * (alpha - 1.0) * (alpha * t2 - 1.0) / (1.0 + at2)) * k,
            h: s.h * ratio,
        },
    )
}

/// Shared form of the `Y_8`/`Y_7` actions in terms of `w` (`τ` or `σ`).
fn shift_action(a: f64, w: Option<f64>, offset: f64, p: PolarPoint, s: PolarState, f: f64) -> (PolarPoint, PolarState) {
    let PolarPoint { r, theta, .. } = p;
    let Some(w) = w else {
        return (
            p,
            PolarState {
                radial: s.radial + 0.5 * f * r * a,
                ..s
            },
        );
    };
    let wa = w + a;
    let (n0, n1) = (w * w + 1.0, wa * wa + 1.0);
    let k = (n1 / n0).sqrt();
    (
        PolarPoint {
            t: 2.0 / f * wa.atan() + offset,
            r: r / k,
            theta: theta + w.atan() - wa.atan(),
        },
        PolarState {
            radial: (s.radial + 0.5 * f * r * (w * w + a * w - 1.0) * a / n1) * k,
            azimuthal: (s.azimuthal + 0.5 * f * r * (2.0 * w + a) * a / n1) * k,
            h: s.h * n1 / n0,
        },
    )
}

/// Finite action of `Y_7`, `Y_8` or `Y_9` on a point of the polar jet space.
pub fn finite_transform(action: GroupAction, p: PolarPoint, s: PolarState, params: &FlowParameters) -> (PolarPoint, PolarState) {
    let f = params.f();
    let (hs, hc) = (0.5 * f * p.t).sin_cos();
    match action {
        GroupAction::Y9 { alpha } => y9_action(alpha, p, s, f),
        GroupAction::Y8 { a } => {
            let w = (hc.abs() >= SPECIAL_TIME_GUARD).then(|| hs / hc);
            shift_action(a, w, chi(p.t, f), p, s, f)
        }
        GroupAction::Y7 { a } => {
            let w = (hs.abs() >= SPECIAL_TIME_GUARD).then(|| -hc / hs);
            shift_action(a, w, chi1(p.t, f), p, s, f)
        }
    }
}

/// Coordinates of the source point in [`transport_solution`], written with
/// half angles so that no branch offset is needed.
fn transported_point<S: Scalar>(alpha: f64, f: f64, t: S, r: S, theta: S) -> ([S; 3], S, S, S) {
    let half = t * (0.5 * f);
    let (s, c) = (half.sin(), half.cos());
    let sc = s * c;
    let (c2, s2) = (c * c, s * s);
    let den1 = c2 + s2 * alpha;
    let den2 = c2 + s2 * (alpha * alpha);
    let k = (den2.recip() * alpha).sqrt();
    let tb = t + (sc * (alpha - 1.0) / den1).atan() * (2.0 / f);
    let thb = theta + (sc * (1.0 - alpha) / den1).atan();
    ([tb, r * k, thb], k, sc / den2, (s2 * alpha - c2) / den2)
}

struct Transported {
    src: Field,
    alpha: f64,
    f: f64,
    window: Window,
}

impl FlowField for Transported {
    fn frame(&self) -> Frame {
        Frame::Polar
    }

    fn window(&self) -> Window {
        self.window
    }

    fn radial_limit(&self, t: f64) -> f64 {
        let ([tb, _, _], k, _, _) = transported_point(self.alpha, self.f, t, 1.0, 0.0);
        self.src.radial_limit(tb) / k
    }

    fn name(&self) -> String {
        format!("transport[alpha={}]({})", self.alpha, self.src.name())
    }

    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let (alpha, f) = (self.alpha, self.f);
        let [t, r, theta] = *p;
        let (q, k, a, b) = transported_point(alpha, f, t, r, theta);
        self.src.check(q.map(|j| j.v))?;
        let [ub, vb, hb] = self.src.eval_jet_unchecked(&q)?;
        let fr2 = r * (0.5 * f);
        Ok([
            k * ub + fr2 * a * (alpha * alpha - 1.0),
            k * vb - fr2 * b * (alpha - 1.0),
            k * k * hb,
        ])
    }
}

/// New rotating-system solution obtained by transporting `field` along the
/// `Y_9` action with parameter `α`.
pub fn transport_solution(field: Field, alpha: f64, params: &FlowParameters) -> Result<Field> {
    GroupAction::y9(alpha)?;
    if field.system() != System::Rotating {
        return Err(RswError::InvalidParams("transport needs a rotating-system field".into()));
    }
    let src = in_frame(field, Frame::Polar);
    let w = src.window();
    let (lo, hi) = (alpha.sqrt().min(alpha.sqrt().recip()), alpha.sqrt().max(alpha.sqrt().recip()));
    let window = Window {
        t_lo: if w.t_lo.is_finite() { w.t_lo - params.period() } else { w.t_lo },
        t_hi: if w.t_hi.is_finite() { w.t_hi + params.period() } else { w.t_hi },
        r_lo: w.r_lo * lo,
        r_hi: w.r_hi * hi,
        guard: w.guard,
    };
    Ok(Arc::new(Transported {
        src,
        alpha,
        f: params.f(),
        window,
    }))
}
