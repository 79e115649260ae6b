//! Field implementations behind [`super::make_family`].

use super::profile::Profile;
use crate::error::{Result, RswError};
use crate::flow::{FlowField, FlowParameters, Frame, System, Window};
use crate::jet::{Scalar, J3};
use crate::quad::{integrate, QuadOptions};
use crate::reduction::{monic_cubic_roots, ring_depth, ImplicitCollapse, RingBounds, RingBranch, RingConstants};

fn c(v: f64) -> J3 {
    J3::constant(v)
}

pub(crate) struct Rest {
    pub h0: f64,
}

impl FlowField for Rest {
    fn frame(&self) -> Frame {
        Frame::Cartesian
    }
    fn window(&self) -> Window {
        Window::unbounded()
    }
    fn name(&self) -> String {
        "rest".into()
    }
    fn eval_jet_unchecked(&self, _p: &[J3; 3]) -> Result<[J3; 3]> {
        Ok([c(0.0), c(0.0), c(self.h0)])
    }
}

/// Image of the classical constant state `(u₀, v₀, h₀)`.
pub(crate) struct ConstantSwImage {
    pub u0: f64,
    pub v0: f64,
    pub h0: f64,
    pub params: FlowParameters,
}

impl FlowField for ConstantSwImage {
    fn frame(&self) -> Frame {
        Frame::Cartesian
    }
    fn window(&self) -> Window {
        Window::time(0.0, self.params.period(), &self.params)
    }
    fn name(&self) -> String {
        "constant-sw-image".into()
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let f = self.params.f();
        let [t, x, y] = *p;
        let half = t * (0.5 * f);
        let (s, co) = (half.sin(), half.cos());
        let cot = co / s;
        let u = -cot * self.u0 - self.v0 + (x * cot + y) * (0.5 * f);
        let v = -cot * self.v0 + self.u0 - (x - y * cot) * (0.5 * f);
        let h = (s * s).recip() * self.h0;
        Ok([u, v, h])
    }
}

/// Classical-system image of the rest state; depth depends on time only.
pub(crate) struct Barochronous {
    pub h0: f64,
    pub f: f64,
}

impl FlowField for Barochronous {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn system(&self) -> System {
        System::NonRotating
    }
    fn window(&self) -> Window {
        Window::unbounded()
    }
    fn name(&self) -> String {
        "barochronous-sw".into()
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let f = self.f;
        let [t, r, _] = *p;
        let den = (t * t * (f * f) + 1.0).recip();
        Ok([t * r * den * (f * f), r * den * f, den * self.h0])
    }
}

/// `h̄(r) = h₀ + (1/g)∫₀ʳ (V̄²/s + fV̄) ds`.
pub fn stationary_depth(profile: &Profile, h0: f64, r: f64, params: &FlowParameters) -> Result<f64> {
    let (f, g) = (params.f(), params.g());
    let (i, _) = integrate(
        |s| {
            let v = profile.value(s);
            v * v / s + f * v
        },
        0.0,
        r,
        QuadOptions::rel(1e-10),
    )?;
    Ok(h0 + i / g)
}

pub(crate) struct StationaryRotSym {
    pub profile: Profile,
    pub h0: f64,
    pub r_max: f64,
    pub params: FlowParameters,
}

impl FlowField for StationaryRotSym {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        Window::unbounded().with_radius(0.0, self.r_max)
    }
    fn name(&self) -> String {
        format!("stationary-rot-sym[V={}]", self.profile.label())
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let r = p[1];
        if r.v <= 0.0 {
            return Err(RswError::OriginSingular);
        }
        let v = self.profile.jet(r);
        let h = stationary_depth(&self.profile, self.h0, r.v, &self.params)?;
        let dh = (v.v * v.v / r.v + self.params.f() * v.v) / self.params.g();
        Ok([c(0.0), v, J3::chain(h, [dh], &[r])])
    }
}

/// Radial data of a stationary solution in closed form.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Radial {
    Rest { h0: f64 },
    /// `V̄ = l r²` with the depth that vanishes at `r = −f/l`.
    Drop { l: f64 },
}

/// Closed-form members of the time-periodic class: a stationary
/// rotationally symmetric state carried by the `Y₉` action.
pub(crate) struct Periodic {
    pub alpha: f64,
    pub radial: Radial,
    pub params: FlowParameters,
}

impl Periodic {
    fn k(&self, t: f64) -> f64 {
        let (s, co) = (0.5 * self.params.f() * t).sin_cos();
        (self.alpha / (co * co + self.alpha * self.alpha * s * s)).sqrt()
    }

    fn radial_state(&self, rho: J3) -> (J3, J3) {
        let (f, g) = (self.params.f(), self.params.g());
        match self.radial {
            Radial::Rest { h0 } => (c(0.0), c(h0)),
            Radial::Drop { l } => {
                let r2 = rho * rho;
                let h = (r2 * r2 + r2 * rho * (4.0 * f / (3.0 * l)) + f.powi(4) / (3.0 * l.powi(4))) * (l * l / (4.0 * g));
                (r2 * l, h)
            }
        }
    }
}

impl FlowField for Periodic {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        match self.radial {
            Radial::Rest { .. } => Window::unbounded(),
            Radial::Drop { l } => {
                let a = self.alpha;
                Window::unbounded().with_radius(0.0, -self.params.f() / l * a.max(1.0) / a.sqrt())
            }
        }
    }
    fn radial_limit(&self, t: f64) -> f64 {
        match self.radial {
            Radial::Rest { .. } => f64::INFINITY,
            Radial::Drop { l } => -self.params.f() / l / self.k(t),
        }
    }
    fn name(&self) -> String {
        match self.radial {
            Radial::Rest { .. } => format!("pulsating-cylinder[alpha={}]", self.alpha),
            Radial::Drop { .. } => format!("drop[alpha={}]", self.alpha),
        }
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let (a, f) = (self.alpha, self.params.f());
        let [t, r, _] = *p;
        let half = t * (0.5 * f);
        let (s, co) = (half.sin(), half.cos());
        let den2 = co * co + s * s * (a * a);
        let k = (den2.recip() * a).sqrt();
        let (vb, hb) = self.radial_state(r * k);
        let fr2 = r * (0.5 * f);
        Ok([
            fr2 * s * co * (a * a - 1.0) / den2,
            k * vb - fr2 * (s * s * a - co * co) * (a - 1.0) / den2,
            k * k * hb,
        ])
    }
}

pub(crate) struct Ring {
    pub constants: RingConstants,
    pub branch: RingBranch,
    pub bounds: RingBounds,
    pub params: FlowParameters,
}

impl FlowField for Ring {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        Window::unbounded().with_radius(self.bounds.r_inner, self.bounds.r_outer)
    }
    fn name(&self) -> String {
        let b = match self.branch {
            RingBranch::Lower => "lower",
            RingBranch::Upper => "upper",
        };
        format!("stationary-ring[{b}]")
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let r = p[1];
        let (h, dh) = ring_depth(&self.constants, r.v, self.branch, &self.params)?;
        let h = J3::chain(h, [dh], &[r]);
        let rc = self.constants;
        Ok([(r * h).recip() * rc.c3, r.recip() * rc.c2 - r * (0.5 * self.params.f()), h])
    }
}

/// `λ = (1 − cos ft)/r²`, written with the half angle.
fn lambda(t: J3, r: J3, f: f64) -> J3 {
    let s = (t * (0.5 * f)).sin();
    s * s * 2.0 / (r * r)
}

fn radial_drift(t: J3, r: J3, f: f64) -> J3 {
    let half = t * (0.5 * f);
    r * (0.5 * f) * half.cos() / half.sin()
}

/// Contact class with `φ = 0` and arbitrary `ψ(λ)`.
pub(crate) struct Contact {
    pub psi: Profile,
    pub lambda0: f64,
    pub eta0: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub params: FlowParameters,
}

impl Contact {
    /// `η(λ)` and `η'(λ)`.
    pub fn eta(&self, l: f64) -> Result<(f64, f64)> {
        let g = self.params.g();
        let (i, _) = integrate(|x| self.psi.value(x).powi(2), self.lambda0, l, QuadOptions::rel(1e-12))?;
        let eta = (self.lambda0 * self.eta0 - i / (2.0 * g)) / l;
        let d = (-self.psi.value(l).powi(2) / (2.0 * g) - eta) / l;
        Ok((eta, d))
    }
}

impl FlowField for Contact {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        Window::time(0.0, self.params.period(), &self.params).with_radius(self.r_lo, self.r_hi)
    }
    fn name(&self) -> String {
        format!("collapse-contact[psi={}]", self.psi.label())
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let f = self.params.f();
        let [t, r, _] = *p;
        let l = lambda(t, r, f);
        let (eta, deta) = self.eta(l.v)?;
        let eta = J3::chain(eta, [deta], &[l]);
        Ok([radial_drift(t, r, f), self.psi.jet(l) / r - r * (0.5 * f), eta / (r * r)])
    }
}

/// Contact class with `ψ = C₂` and `φ` from a cubic in each `λ`.
pub(crate) struct ContactCubic {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub r_lo: f64,
    pub r_hi: f64,
    pub params: FlowParameters,
}

impl ContactCubic {
    /// Smallest positive root `φ(λ)` of `φ³ + (C₂² − C₁/λ)φ + 2gC₃/λ` and `φ'(λ)`.
    pub fn phi(&self, l: f64) -> Option<(f64, f64)> {
        let g = self.params.g();
        let b = self.c2 * self.c2 - self.c1 / l;
        let phi = monic_cubic_roots(0.0, b, 2.0 * g * self.c3 / l).into_iter().find(|&x| x > 0.0)?;
        let p_l = (self.c1 * phi - 2.0 * g * self.c3) / (l * l);
        let p_phi = 3.0 * phi * phi + b;
        Some((phi, -p_l / p_phi))
    }
}

impl FlowField for ContactCubic {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        Window::time(0.0, self.params.period(), &self.params).with_radius(self.r_lo, self.r_hi)
    }
    fn name(&self) -> String {
        "collapse-contact-cubic".into()
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let f = self.params.f();
        let [t, r, _] = *p;
        let l = lambda(t, r, f);
        let (phi, dphi) = self.phi(l.v).ok_or_else(|| RswError::WindowViolation {
            point: [t.v, r.v, p[2].v],
            reason: format!("no positive root of the cubic at lambda = {}", l.v),
        })?;
        let phi = J3::chain(phi, [dphi], &[l]);
        let eta = (l * phi).recip() * self.c3;
        Ok([phi / r + radial_drift(t, r, f), r.recip() * self.c2 - r * (0.5 * f), eta / (r * r)])
    }
}

/// `U = rφ(t)`, `V = −fr/2`, `h = r²η(t)`.
pub(crate) struct Scaling {
    pub ic: ImplicitCollapse,
    pub r_max: f64,
    pub params: FlowParameters,
}

impl FlowField for Scaling {
    fn frame(&self) -> Frame {
        Frame::Polar
    }
    fn window(&self) -> Window {
        Window::time(self.ic.t_min(), self.ic.t_star, &self.params).with_radius(0.0, self.r_max)
    }
    fn name(&self) -> String {
        format!("collapse-scaling[phi0={},eta0={}]", self.ic.phi0, self.ic.eta0)
    }
    fn eval_jet_unchecked(&self, p: &[J3; 3]) -> Result<[J3; 3]> {
        let (f, g) = (self.params.f(), self.params.g());
        let [t, r, _] = *p;
        let st = self.ic.state(t.v)?;
        let dphi = -f * f / 4.0 - st.phi * st.phi - 2.0 * g * st.eta;
        let deta = -4.0 * st.phi * st.eta;
        let phi = J3::chain(st.phi, [dphi], &[t]);
        let eta = J3::chain(st.eta, [deta], &[t]);
        Ok([r * phi, r * (-0.5 * f), r * r * eta])
    }
}

