//! The scaling submodel with `ψ ≡ −f/2`:
//! `φ' = −f²/4 − φ² − 2gη`, `η' = −4φη`, solved implicitly through
//! `φ² = R(η) = 2gη − f²/4 + K√(η/η₀)` and `t = −¼∫ dν/(ν φ(ν))`.

use serde::Serialize;

use crate::error::{Result, RswError};
use crate::flow::FlowParameters;
use crate::ode::{integrate_adaptive, AdaptiveOptions};
use crate::quad::{integrate, QuadOptions};

/// Invariant unknowns `(φ, ψ, η)` of the reduced system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SubmodelState {
    pub phi: f64,
    pub psi: f64,
    pub eta: f64,
}

const TABLE_NODES: usize = 256;

/// Tabulated implicit solution.
///
/// With `w = √ν` the radicand factors as `R = 2g(w − w₁)(w − w₂)`,
/// `w₂ < 0 < w₁`, and `η₁ = w₁²` is its only zero. Time is measured through
/// `Φ(s) = ¼∫₀^s dσ / (ν √Q)` where `ν = η₁ + σ²` and `Q = R/σ²`.
#[derive(Clone, Debug, Serialize)]
pub struct ImplicitCollapse {
    pub phi0: f64,
    pub eta0: f64,
    f: f64,
    g: f64,
    k: f64,
    w1: f64,
    w2: f64,
    pub eta1: f64,
    s0: f64,
    /// Turning time when `φ₀ > 0`.
    pub t1: Option<f64>,
    /// Blow-up time.
    pub t_star: f64,
    offset: f64,
    #[serde(skip)]
    table: Vec<(f64, f64)>,
    #[serde(skip)]
    opts: QuadOptions,
}

impl ImplicitCollapse {
    fn q(&self, s: f64) -> f64 {
        let w = (self.eta1 + s * s).sqrt();
        2.0 * self.g * (w - self.w2) / (w + self.w1)
    }

    /// `dΦ/ds`.
    fn dphi_ds(&self, s: f64) -> f64 {
        0.5 / ((self.eta1 + s * s) * self.q(s).sqrt())
    }

    fn tail(&self, u: f64) -> f64 {
        // dΦ/ds · ds/du with s = 1/u
        let s = 1.0 / u;
        0.5 / ((self.eta1 * u * u + 1.0) * self.q(s).sqrt())
    }

    fn between(&self, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let mut total = 0.0;
        if a < 1.0 {
            total += integrate(|s| self.dphi_ds(s), a, b.min(1.0), self.opts)?.0;
        }
        if b > 1.0 {
            let lo = if b.is_finite() { 1.0 / b } else { 0.0 };
            let hi = 1.0 / a.max(1.0);
            total += integrate(|u| self.tail(u), lo, hi, self.opts)?.0;
        }
        Ok(total)
    }

    fn big_phi(&self, s: f64) -> Result<f64> {
        let idx = self.table.partition_point(|&(sk, _)| sk <= s).saturating_sub(1);
        let (sk, pk) = self.table[idx];
        Ok(pk + self.between(sk, s)?)
    }

    /// Solves `Φ(s) = target` for `s`.
    fn solve_s(&self, target: f64) -> Result<f64> {
        let idx = self.table.partition_point(|&(_, p)| p <= target).saturating_sub(1);
        let mut lo = self.table[idx].0;
        let mut hi = match self.table.get(idx + 1) {
            Some(&(s, _)) => s,
            None => {
                let mut s = 2.0 * lo.max(1.0);
                while self.big_phi(s)? <= target {
                    s *= 2.0;
                    if !s.is_finite() {
                        return Err(RswError::BlowUp { t: target });
                    }
                }
                s
            }
        };
        let mut s = 0.5 * (lo + hi);
        for _ in 0..100 {
            let r = self.big_phi(s)? - target;
            if r > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let next = s - r / self.dphi_ds(s);
            let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if (next - s).abs() <= 1e-15 * s.max(1e-300) || hi - lo <= 1e-15 * hi {
                return Ok(next);
            }
            s = next;
        }
        Ok(s)
    }

    /// `(s, sign of φ)` at time `t`. The solution is symmetric about the
    /// turning time, so times before it use the plus branch.
    fn locate(&self, t: f64) -> Result<(f64, f64)> {
        if !(t.is_finite() && t < self.t_star && t > self.t_min()) {
            return Err(RswError::WindowViolation {
                point: [t, 0.0, 0.0],
                reason: format!("t must lie in ({}, {})", self.t_min(), self.t_star),
            });
        }
        if t < self.offset {
            Ok((self.solve_s(self.offset - t)?, 1.0))
        } else {
            Ok((self.solve_s(t - self.offset)?, -1.0))
        }
    }

    /// Time at which `φ` vanishes (negative when `φ₀ < 0`).
    pub fn turn_time(&self) -> f64 {
        self.offset
    }

    /// Start of the maximal interval of existence.
    pub fn t_min(&self) -> f64 {
        2.0 * self.offset - self.t_star
    }

    pub fn state(&self, t: f64) -> Result<SubmodelState> {
        let (s, sign) = self.locate(t)?;
        Ok(SubmodelState {
            phi: sign * s * self.q(s).sqrt(),
            psi: -0.5 * self.f,
            eta: self.eta1 + s * s,
        })
    }

    pub fn eta(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.eta)
    }

    /// `t(η)` on the branch where `η` grows.
    pub fn t_of_eta(&self, eta: f64) -> Result<f64> {
        if eta < self.eta1 {
            return Err(RswError::InvalidParams(format!("eta below the turning value {}", self.eta1)));
        }
        Ok(self.offset + self.big_phi((eta - self.eta1).sqrt())?)
    }

    /// `φ̂(η)²`.
    pub fn radicand(&self, eta: f64) -> f64 {
        2.0 * self.g * eta - self.f * self.f / 4.0 + self.k * (eta / self.eta0).sqrt()
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

pub fn collapse2_build(phi0: f64, eta0: f64, params: &FlowParameters) -> Result<ImplicitCollapse> {
    collapse2_build_with(phi0, eta0, params, QuadOptions::rel(1e-13))
}

pub fn collapse2_build_with(phi0: f64, eta0: f64, params: &FlowParameters, opts: QuadOptions) -> Result<ImplicitCollapse> {
    if !(eta0.is_finite() && eta0 > 0.0 && phi0.is_finite()) {
        return Err(RswError::InvalidParams(format!("need finite phi0 and eta0 > 0, got ({phi0}, {eta0})")));
    }
    let (f, g) = (params.f(), params.g());
    let k = phi0 * phi0 - 2.0 * g * eta0 + f * f / 4.0;
    let b = k / eta0.sqrt();
    let w1 = (-b + (b * b + 2.0 * g * f * f).sqrt()) / (4.0 * g);
    let w2 = -f * f / (8.0 * g * w1);
    let eta1 = w1 * w1;
    let s0 = (eta0 - eta1).max(0.0).sqrt();
    let mut ic = ImplicitCollapse {
        phi0,
        eta0,
        f,
        g,
        k,
        w1,
        w2,
        eta1,
        s0,
        t1: None,
        t_star: f64::NAN,
        offset: 0.0,
        table: Vec::new(),
        opts,
    };
    let mut table = Vec::with_capacity(TABLE_NODES);
    let mut acc = 0.0;
    let mut prev = 0.0;
    for i in 0..TABLE_NODES {
        let z = i as f64 / TABLE_NODES as f64;
        let s = z / (1.0 - z);
        acc += ic.between(prev, s)?;
        table.push((s, acc));
        prev = s;
    }
    let total = acc + ic.between(prev, f64::INFINITY)?;
    ic.table = table;
    let phi_s0 = ic.big_phi(s0)?;
    if phi0 > 0.0 {
        ic.t1 = Some(phi_s0);
        ic.offset = phi_s0;
    } else {
        ic.offset = -phi_s0;
    }
    ic.t_star = ic.offset + total;
    Ok(ic)
}

#[derive(Clone, Debug, Serialize)]
pub struct Collapse2Report {
    pub t_end: f64,
    pub max_eta_error: f64,
    pub max_phi_error: f64,
    /// `max |ψ + f/2|` along the integration.
    pub psi_drift: f64,
    /// Relative mismatch between `R_i'(t)` and `U(t, R_i)`.
    pub piston_error: f64,
    /// Time at which `φ` changes sign in the integrated solution, if any.
    pub sign_change: Option<f64>,
    pub eta_increasing_after_turn: bool,
    pub samples: usize,
}

/// Integrates the full reduced system from `(φ₀, −f/2, η₀)` and compares it
/// with the implicit tabulation up to `0.9·T*`.
pub fn collapse2_verify_ode(ic: &ImplicitCollapse, params: &FlowParameters) -> Result<Collapse2Report> {
    let (f, g) = (params.f(), params.g());
    let t_end = 0.9 * ic.t_star;
    let n = 400;
    let times: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
    let rhs = |_t: f64, y: &[f64; 3]| {
        let [phi, psi, eta] = *y;
        Ok([(psi + f) * psi - phi * phi - 2.0 * g * eta, -(2.0 * psi + f) * phi, -4.0 * phi * eta])
    };
    let opts = AdaptiveOptions {
        tol: 1e-13,
        h_init: 1e-4,
        h_max: 1e-2 * ic.t_star,
        ..AdaptiveOptions::default()
    };
    let (ys, _) = integrate_adaptive(rhs, 0.0, [ic.phi0, -0.5 * f, ic.eta0], &times, &[], opts)?;

    let mut rep = Collapse2Report {
        t_end,
        max_eta_error: 0.0,
        max_phi_error: 0.0,
        psi_drift: 0.0,
        piston_error: 0.0,
        sign_change: None,
        eta_increasing_after_turn: true,
        samples: times.len(),
    };
    let mut prev: Option<[f64; 3]> = None;
    for (&t, y) in times.iter().zip(&ys) {
        let st = ic.state(t)?;
        rep.max_eta_error = rep.max_eta_error.max((y[2] - st.eta).abs());
        rep.max_phi_error = rep.max_phi_error.max((y[0] - st.phi).abs());
        rep.psi_drift = rep.psi_drift.max((y[1] + 0.5 * f).abs());
        if let Some(p) = prev {
            if p[0] > 0.0 && y[0] <= 0.0 && rep.sign_change.is_none() {
                rep.sign_change = Some(t);
            }
            if y[0] < 0.0 && p[0] < 0.0 && y[2] <= p[2] {
                rep.eta_increasing_after_turn = false;
            }
        }
        prev = Some(*y);

        // piston R(t) = R₀ (η₀/η)^¼ must move with U = Rφ
        let d = 1e-5 * ic.t_star;
        if t > d && t + d < ic.t_star {
            let radius = |tt: f64| ic.eta(tt).map(|e| (ic.eta0 / e).powf(0.25));
            let dr = (radius(t + d)? - radius(t - d)?) / (2.0 * d);
            let r = (ic.eta0 / st.eta).powf(0.25);
            let err = (dr - r * st.phi).abs() / (r * st.phi).abs().max(1.0);
            rep.piston_error = rep.piston_error.max(err);
        }
    }
    Ok(rep)
}
