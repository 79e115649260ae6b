//! Parameters, points, states and the evaluable [`FlowField`] abstraction.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Result, RswError};
use crate::jet::{Scalar, J3};

/// Depths below this are treated as dry.
pub const DEPTH_FLOOR: f64 = 1e-12;

/// Default relative step for finite-difference derivatives.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Coriolis parameter `f` and gravity `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowParameters {
    f: f64,
    g: f64,
}

impl FlowParameters {
    pub fn new(f: f64, g: f64) -> Result<Self> {
        if !(f.is_finite() && f > 0.0) {
            return Err(RswError::InvalidParams(format!("f must be positive, got {f}")));
        }
        if !(g.is_finite() && g > 0.0) {
            return Err(RswError::InvalidParams(format!("g must be positive, got {g}")));
        }
        Ok(Self { f, g })
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Inertial period `2π/f`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.f
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartesianPoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarPoint {
    pub t: f64,
    pub r: f64,
    /// Not reduced modulo 2π.
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartesianState {
    pub u: f64,
    pub v: f64,
    pub h: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarState {
    /// Radial velocity `U`.
    pub radial: f64,
    /// Circular velocity `V`.
    pub azimuthal: f64,
    pub h: f64,
}

pub fn polar_to_cartesian(p: PolarPoint, s: PolarState) -> (CartesianPoint, CartesianState) {
    let (sn, cs) = p.theta.sin_cos();
    (
        CartesianPoint {
            t: p.t,
            x: p.r * cs,
            y: p.r * sn,
        },
        CartesianState {
            u: s.radial * cs - s.azimuthal * sn,
            v: s.radial * sn + s.azimuthal * cs,
            h: s.h,
        },
    )
}

pub fn cartesian_to_polar(p: CartesianPoint, s: CartesianState) -> Result<(PolarPoint, PolarState)> {
    if p.x == 0.0 && p.y == 0.0 {
        return Err(RswError::OriginSingular);
    }
    let r = p.x.hypot(p.y);
    let theta = p.y.atan2(p.x);
    let (sn, cs) = (p.y / r, p.x / r);
    Ok((
        PolarPoint { t: p.t, r, theta },
        PolarState {
            radial: s.u * cs + s.v * sn,
            azimuthal: -s.u * sn + s.v * cs,
            h: s.h,
        },
    ))
}

/// Rotates polar velocity components into Cartesian ones.
pub(crate) fn rotate_to_cartesian<S: Scalar>(theta: S, radial: S, azimuthal: S) -> (S, S) {
    let (sn, cs) = (theta.sin(), theta.cos());
    (radial * cs - azimuthal * sn, radial * sn + azimuthal * cs)
}

pub(crate) fn rotate_to_polar<S: Scalar>(theta: S, u: S, v: S) -> (S, S) {
    let (sn, cs) = (theta.sin(), theta.cos());
    (u * cs + v * sn, -u * sn + v * cs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Coordinates `(t, x, y)`, state `(u, v, h)`.
    Cartesian,
    /// Coordinates `(t, r, theta)`, state `(U, V, h)`.
    Polar,
}

/// Which system a field solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// The rotating equations with the configured `f`.
    Rotating,
    /// The classical shallow water equations (`f = 0`).
    NonRotating,
}

impl System {
    pub fn coriolis(&self, params: &FlowParameters) -> f64 {
        match self {
            System::Rotating => params.f(),
            System::NonRotating => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference { step: f64 },
}

impl Default for DerivativeMode {
    fn default() -> Self {
        DerivativeMode::Analytic
    }
}

/// Where a field may be evaluated.
///
/// Times are open at both ends and shrunk by `guard`; radii are closed.
/// The radial bound may move in time, see [`FlowField::radial_limit`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub t_lo: f64,
    pub t_hi: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub guard: f64,
}

impl Window {
    pub fn unbounded() -> Self {
        Self {
            t_lo: f64::NEG_INFINITY,
            t_hi: f64::INFINITY,
            r_lo: 0.0,
            r_hi: f64::INFINITY,
            guard: 0.0,
        }
    }

    /// Time interval `(lo, hi)` with the standard guard band `1e-9 · 2π/f`.
    pub fn time(lo: f64, hi: f64, params: &FlowParameters) -> Self {
        Self {
            t_lo: lo,
            t_hi: hi,
            guard: 1e-9 * params.period(),
            ..Self::unbounded()
        }
    }

    pub fn with_radius(mut self, lo: f64, hi: f64) -> Self {
        self.r_lo = lo;
        self.r_hi = hi;
        self
    }

    pub fn contains_time(&self, t: f64) -> bool {
        t.is_finite() && t > self.t_lo + self.guard && t < self.t_hi - self.guard
    }
}

/// A solution given as an evaluable map `(t, a, b) -> state`.
///
/// Implementors only supply [`FlowField::eval_jet_unchecked`]; checked
/// evaluation and derivative sampling come from [`FieldExt`].
pub trait FlowField: Send + Sync {
    fn frame(&self) -> Frame;

    fn system(&self) -> System {
        System::Rotating
    }

    fn window(&self) -> Window;

    /// Outer radius of the domain at time `t`.
    fn radial_limit(&self, _t: f64) -> f64 {
        self.window().r_hi
    }

    fn name(&self) -> String;

    /// Evaluates the state at a point whose coordinates carry arbitrary
    /// tangents. Does not check the window.
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]>;
}

pub type Field = Arc<dyn FlowField>;

/// One evaluation with derivatives: `jac[i][j] = ∂state_i / ∂coord_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub point: [f64; 3],
    pub state: [f64; 3],
    pub jac: [[f64; 3]; 3],
}

pub trait FieldExt: FlowField {
    fn check(&self, p: [f64; 3]) -> Result<()> {
        let w = self.window();
        if p.iter().any(|c| !c.is_finite()) {
            return Err(RswError::WindowViolation {
                point: p,
                reason: "non-finite coordinate".into(),
            });
        }
        if !w.contains_time(p[0]) {
            return Err(RswError::WindowViolation {
                point: p,
                reason: format!("t outside ({}, {})", w.t_lo, w.t_hi),
            });
        }
        let r = match self.frame() {
            Frame::Polar => p[1],
            Frame::Cartesian => p[1].hypot(p[2]),
        };
        let hi = self.radial_limit(p[0]);
        if r < w.r_lo * (1.0 - 1e-12) || r > hi * (1.0 + 1e-12) + 1e-15 {
            return Err(RswError::WindowViolation {
                point: p,
                reason: format!("r = {r} outside [{}, {hi}]", w.r_lo),
            });
        }
        Ok(())
    }

    fn eval_jet(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        self.check([p[0].v, p[1].v, p[2].v])?;
        self.eval_jet_unchecked(p)
    }

    fn eval(&self, p: [f64; 3]) -> Result<[f64; 3]> {
        let s = self.eval_jet(&p.map(J3::constant))?;
        Ok(s.map(|j| j.v))
    }

    fn sample(&self, p: [f64; 3], mode: DerivativeMode) -> Result<Sample> {
        match mode {
            DerivativeMode::Analytic => {
                let s = self.eval_jet(&J3::seed(p))?;
                Ok(Sample {
                    point: p,
                    state: s.map(|j| j.v),
                    jac: s.map(|j| j.d),
                })
            }
            DerivativeMode::FiniteDifference { step } => {
                let state = self.eval(p)?;
                let mut jac = [[0.0; 3]; 3];
                for j in 0..3 {
                    let hstep = step * p[j].abs().max(1.0);
                    let mut lo = p;
                    let mut hi = p;
                    lo[j] -= hstep;
                    hi[j] += hstep;
                    let (a, b) = (self.eval(lo)?, self.eval(hi)?);
                    for i in 0..3 {
                        jac[i][j] = (b[i] - a[i]) / (hi[j] - lo[j]);
                    }
                }
                Ok(Sample { point: p, state, jac })
            }
        }
    }
}

impl<T: FlowField + ?Sized> FieldExt for T {}

/// Presents a Cartesian field in polar coordinates.
pub struct AsPolar(pub Field);

impl FlowField for AsPolar {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn system(&self) -> System {
        self.0.system()
    }
    fn window(&self) -> Window {
        self.0.window()
    }
    fn radial_limit(&self, t: f64) -> f64 {
        self.0.radial_limit(t)
    }
    fn name(&self) -> String {
        self.0.name()
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let [t, r, th] = *p;
        let (x, y) = (r * th.cos(), r * th.sin());
        let [u, v, h] = self.0.eval_jet_unchecked(&[t, x, y])?;
        let (ur, vt) = rotate_to_polar(th, u, v);
        Ok([ur, vt, h])
    }
}

/// Presents a polar field in Cartesian coordinates.
pub struct AsCartesian(pub Field);

impl FlowField for AsCartesian {
    fn frame(&self) -> Frame {
        Frame::Cartesian
    }
    fn system(&self) -> System {
        self.0.system()
    }
    fn window(&self) -> Window {
        self.0.window()
    }
    fn radial_limit(&self, t: f64) -> f64 {
        self.0.radial_limit(t)
    }
    fn name(&self) -> String {
        self.0.name()
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let [t, x, y] = *p;
        if x.v == 0.0 && y.v == 0.0 {
            return Err(RswError::OriginSingular);
        }
        let r = (x * x + y * y).sqrt();
        let th = y.atan2(x);
        let [ur, vt, h] = self.0.eval_jet_unchecked(&[t, r, th])?;
        let (u, v) = rotate_to_cartesian(th, ur, vt);
        Ok([u, v, h])
    }
}

/// Wraps a field in the frame requested, converting when needed.
pub fn in_frame(field: Field, frame: Frame) -> Field {
    match (field.frame(), frame) {
        (Frame::Polar, Frame::Cartesian) => Arc::new(AsCartesian(field)),
        (Frame::Cartesian, Frame::Polar) => Arc::new(AsPolar(field)),
        _ => field,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Potential vorticity `(ζ + f)/h`.
    pub omega: f64,
    pub froude: f64,
    /// Speed `q`.
    pub speed: f64,
}

/// Relative vorticity `ζ` from a sample, in the sample's frame.
pub(crate) fn relative_vorticity(frame: Frame, s: &Sample) -> f64 {
    match frame {
        Frame::Cartesian => s.jac[1][1] - s.jac[0][2],
        Frame::Polar => {
            let r = s.point[1];
            s.jac[1][1] + s.state[1] / r - s.jac[0][2] / r
        }
    }
}

fn pv_from_sample(frame: Frame, s: &Sample, coriolis: f64) -> Result<f64> {
    let h = s.state[2];
    if h < DEPTH_FLOOR {
        return Err(RswError::ZeroDepth { h });
    }
    if frame == Frame::Polar && s.point[1] <= 0.0 {
        return Err(RswError::OriginSingular);
    }
    Ok((relative_vorticity(frame, s) + coriolis) / h)
}

pub fn potential_vorticity(
    field: &dyn FlowField,
    p: [f64; 3],
    params: &FlowParameters,
    mode: DerivativeMode,
) -> Result<f64> {
    let s = field.sample(p, mode)?;
    pv_from_sample(field.frame(), &s, field.system().coriolis(params))
}

pub fn diagnostics(
    field: &dyn FlowField,
    p: [f64; 3],
    params: &FlowParameters,
    mode: DerivativeMode,
) -> Result<Diagnostics> {
    let s = field.sample(p, mode)?;
    let omega = pv_from_sample(field.frame(), &s, field.system().coriolis(params))?;
    let [a, b, h] = s.state;
    let speed = (a * a + b * b).sqrt();
    Ok(Diagnostics {
        omega,
        froude: speed / (params.g() * h).sqrt(),
        speed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Solid-body rotation `u = -ωy, v = ωx` at constant depth.
    struct SolidBody {
        omega: f64,
        h0: f64,
    }

    impl FlowField for SolidBody {
        fn frame(&self) -> Frame {
            Frame::Cartesian
        }
        fn window(&self) -> Window {
            Window::unbounded()
        }
        fn name(&self) -> String {
            "solid-body".into()
        }
        fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
            let [_, x, y] = *p;
            Ok([-y * self.omega, x * self.omega, J3::cst(self.h0)])
        }
    }

    #[test]
    fn polar_examples() {
        let (p, s) = polar_to_cartesian(
            PolarPoint { t: 0.0, r: 1.0, theta: 0.0 },
            PolarState { radial: 1.0, azimuthal: 0.0, h: 2.0 },
        );
        assert_eq!((p.x, p.y, s.u, s.v, s.h), (1.0, 0.0, 1.0, 0.0, 2.0));

        let (p, s) = polar_to_cartesian(
            PolarPoint { t: 0.0, r: 1.0, theta: PI / 2.0 },
            PolarState { radial: 0.0, azimuthal: 1.0, h: 1.0 },
        );
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.u, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cartesian_examples() {
        let (p, s) = cartesian_to_polar(
            CartesianPoint { t: 0.0, x: 1.0, y: 0.0 },
            CartesianState { u: 1.0, v: 0.0, h: 1.0 },
        )
        .unwrap();
        assert_eq!((p.r, p.theta, s.radial, s.azimuthal), (1.0, 0.0, 1.0, 0.0));

        let (p, s) = cartesian_to_polar(
            CartesianPoint { t: 0.0, x: 0.0, y: 2.0 },
            CartesianState { u: 0.0, v: 1.0, h: 1.0 },
        )
        .unwrap();
        assert_abs_diff_eq!(p.r, 2.0);
        assert_abs_diff_eq!(p.theta, PI / 2.0);
        assert_abs_diff_eq!(s.radial, 1.0);
        assert_abs_diff_eq!(s.azimuthal, 0.0);

        let err = cartesian_to_polar(
            CartesianPoint { t: 0.0, x: 0.0, y: 0.0 },
            CartesianState { u: 1.0, v: 1.0, h: 1.0 },
        );
        assert_eq!(err, Err(RswError::OriginSingular));
    }

    #[test]
    fn round_trip_example() {
        let p = PolarPoint { t: 0.0, r: 0.7, theta: 2.3 };
        let s = PolarState { radial: -0.4, azimuthal: 1.1, h: 1.0 };
        let (cp, cs) = polar_to_cartesian(p, s);
        let (p2, s2) = cartesian_to_polar(cp, cs).unwrap();
        assert_abs_diff_eq!(p2.r, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(p2.theta, 2.3, epsilon = 1e-12);
        assert_abs_diff_eq!(s2.radial, -0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(s2.azimuthal, 1.1, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn polar_round_trip(r in 1e-3f64..10.0, th in -3.1f64..3.1,
                            ur in -5.0f64..5.0, vt in -5.0f64..5.0) {
            let p = PolarPoint { t: 0.0, r, theta: th };
            let s = PolarState { radial: ur, azimuthal: vt, h: 1.0 };
            let (cp, cs) = polar_to_cartesian(p, s);
            let (p2, s2) = cartesian_to_polar(cp, cs).unwrap();
            prop_assert!((p2.r - r).abs() < 1e-12 * r.max(1.0));
            prop_assert!((p2.theta - th).abs() < 1e-12);
            prop_assert!((s2.radial - ur).abs() < 1e-12);
            prop_assert!((s2.azimuthal - vt).abs() < 1e-12);
        }
    }

    #[test]
    fn parameters_must_be_positive() {
        assert!(FlowParameters::new(0.0, 1.0).is_err());
        assert!(FlowParameters::new(1.0, -1.0).is_err());
        assert!(FlowParameters::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn potential_vorticity_examples() {
        let params = FlowParameters::new(1.0, 1.0).unwrap();
        let rest = SolidBody { omega: 0.0, h0: 1.0 };
        let pv = potential_vorticity(&rest, [0.0, 0.3, 0.1], &params, DerivativeMode::Analytic);
        assert_abs_diff_eq!(pv.unwrap(), 1.0, epsilon = 1e-15);

        let spin = SolidBody { omega: 0.5, h0: 2.0 };
        for mode in [DerivativeMode::Analytic, DerivativeMode::FiniteDifference { step: DEFAULT_FD_STEP }] {
            let pv = potential_vorticity(&spin, [1.0, 0.4, -0.2], &params, mode).unwrap();
            assert_abs_diff_eq!(pv, 1.0, epsilon = 1e-9);
        }

        let d = diagnostics(&rest, [0.0, 1.0, 1.0], &params, DerivativeMode::Analytic).unwrap();
        assert_eq!(d.froude, 0.0);
        assert_eq!(d.speed, 0.0);
    }

    #[test]
    fn dry_point_is_reported() {
        let params = FlowParameters::new(1.0, 1.0).unwrap();
        let dry = SolidBody { omega: 0.1, h0: 1e-13 };
        let err = diagnostics(&dry, [0.0, 1.0, 0.0], &params, DerivativeMode::Analytic);
        assert!(matches!(err, Err(RswError::ZeroDepth { .. })));
    }

    #[test]
    fn polar_view_preserves_vorticity() {
        let params = FlowParameters::new(1.0, 1.0).unwrap();
        let spin: Field = Arc::new(SolidBody { omega: 0.5, h0: 2.0 });
        let polar = AsPolar(spin.clone());
        let pv = potential_vorticity(&polar, [0.0, 0.8, 1.9], &params, DerivativeMode::Analytic).unwrap();
        assert_abs_diff_eq!(pv, 1.0, epsilon = 1e-14);
        let back = AsCartesian(Arc::new(polar));
        let s = back.eval([0.0, 0.3, -0.4]).unwrap();
        assert_abs_diff_eq!(s[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.15, epsilon = 1e-15);
    }

    #[test]
    fn window_is_enforced() {
        let params = FlowParameters::new(1.0, 1.0).unwrap();
        struct Windowed(Window);
        impl FlowField for Windowed {
            fn frame(&self) -> Frame {
                Frame::Polar
            }
            fn window(&self) -> Window {
                self.0
            }
            fn name(&self) -> String {
                "w".into()
            }
            fn eval_jet_unchecked(&self, _p: &[J3; 3]) -> Result<[J3; 3]> {
                Ok([J3::cst(0.0), J3::cst(0.0), J3::cst(1.0)])
            }
        }
        let f = Windowed(Window::time(0.0, params.period(), &params).with_radius(0.0, 2.0));
        assert!(f.eval([1.0, 1.0, 0.0]).is_ok());
        assert!(f.eval([0.0, 1.0, 0.0]).is_err());
        assert!(f.eval([params.period(), 1.0, 0.0]).is_err());
        assert!(f.eval([1.0, 2.5, 0.0]).is_err());
    }
}
