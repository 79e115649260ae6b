//! Catalog of exact solutions.
//!
//! Every family is built with [`make_family`] from a [`FamilyParams`] value
//! and returned as a [`Field`] carrying its own validity window.

mod fields;
mod profile;
mod trajectory;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

pub use fields::stationary_depth;
pub use profile::Profile;
pub use trajectory::{closure_condition, trajectory_formula, Circle, Closure, TrajectoryFormula};

use crate::error::{Result, RswError};
use crate::flow::{Field, FlowField, FlowParameters, Frame};
use crate::reduction::{collapse2_build, ring_bounds, RingBranch, RingConstants};
use crate::verify::{Axis, GridSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    RestState,
    ConstantSwImage,
    BarochronousSw,
    StationaryRotSym,
    PulsatingCylinder,
    PulsatingDrop,
    StationaryRing,
    CollapseContact,
    CollapseContactCubic,
    CollapseScaling,
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::RestState,
        FamilyId::ConstantSwImage,
        FamilyId::BarochronousSw,
        FamilyId::StationaryRotSym,
        FamilyId::PulsatingCylinder,
        FamilyId::PulsatingDrop,
        FamilyId::StationaryRing,
        FamilyId::CollapseContact,
        FamilyId::CollapseContactCubic,
        FamilyId::CollapseScaling,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::RestState => "rest",
            FamilyId::ConstantSwImage => "constant-sw-image",
            FamilyId::BarochronousSw => "barochronous-sw",
            FamilyId::StationaryRotSym => "stationary-rot-sym",
            FamilyId::PulsatingCylinder => "pulsating-cylinder",
            FamilyId::PulsatingDrop => "drop",
            FamilyId::StationaryRing => "stationary-ring",
            FamilyId::CollapseContact => "collapse-contact",
            FamilyId::CollapseContactCubic => "collapse-contact-cubic",
            FamilyId::CollapseScaling => "collapse-scaling",
        }
    }

    /// Frame the family is naturally written in.
    pub fn frame(&self) -> Frame {
        match self {
            FamilyId::RestState | FamilyId::ConstantSwImage => Frame::Cartesian,
            _ => Frame::Polar,
        }
    }

    /// `f` and `g` used when none are given.
    pub fn default_flow_params(&self) -> FlowParameters {
        let f = if *self == FamilyId::StationaryRing { 0.1 } else { 1.0 };
        FlowParameters::new(f, 1.0).expect("valid defaults")
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = RswError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| RswError::UnsupportedFamily(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub enum FamilyParams {
    RestState { h0: f64 },
    ConstantSwImage { u0: f64, v0: f64, h0: f64 },
    BarochronousSw { h0: f64 },
    StationaryRotSym { vbar: Profile, h0: f64, r_max: f64 },
    PulsatingCylinder { alpha: f64, h0: f64 },
    PulsatingDrop { alpha: f64 },
    StationaryRing { c1: f64, c2: f64, c3: f64, branch: RingBranch },
    CollapseContact { psi: Profile, lambda0: f64, eta0: f64, r_lo: f64, r_hi: f64 },
    CollapseContactCubic { c1: f64, c2: f64, c3: f64, r_lo: f64, r_hi: f64 },
    CollapseScaling { phi0: f64, eta0: f64, r_max: f64 },
}

impl FamilyParams {
    pub fn defaults(id: FamilyId) -> Self {
        match id {
            FamilyId::RestState => FamilyParams::RestState { h0: 1.0 },
            FamilyId::ConstantSwImage => FamilyParams::ConstantSwImage { u0: 1.0, v0: 0.5, h0: 1.0 },
            FamilyId::BarochronousSw => FamilyParams::BarochronousSw { h0: 1.0 },
            FamilyId::StationaryRotSym => FamilyParams::StationaryRotSym {
                vbar: Profile::power(-0.2, 2.0),
                h0: 1.0,
                r_max: 2.5,
            },
            FamilyId::PulsatingCylinder => FamilyParams::PulsatingCylinder { alpha: 2.0, h0: 1.0 },
            FamilyId::PulsatingDrop => FamilyParams::PulsatingDrop { alpha: 2.0 },
            FamilyId::StationaryRing => FamilyParams::StationaryRing {
                c1: 1.0,
                c2: 1.0,
                c3: 1.0,
                branch: RingBranch::Lower,
            },
            FamilyId::CollapseContact => FamilyParams::CollapseContact {
                psi: Profile::sine(0.5, 1.0),
                lambda0: 1.0,
                eta0: 2.0,
                r_lo: 0.4,
                r_hi: 6.0,
            },
            FamilyId::CollapseContactCubic => FamilyParams::CollapseContactCubic {
                c1: 1.0,
                c2: 0.5,
                c3: 0.1,
                r_lo: 1.4,
                r_hi: 4.5,
            },
            FamilyId::CollapseScaling => FamilyParams::CollapseScaling {
                phi0: 0.0,
                eta0: 1.0,
                r_max: 3.0,
            },
        }
    }

    pub fn id(&self) -> FamilyId {
        match self {
            FamilyParams::RestState { .. } => FamilyId::RestState,
            FamilyParams::ConstantSwImage { .. } => FamilyId::ConstantSwImage,
            FamilyParams::BarochronousSw { .. } => FamilyId::BarochronousSw,
            FamilyParams::StationaryRotSym { .. } => FamilyId::StationaryRotSym,
            FamilyParams::PulsatingCylinder { .. } => FamilyId::PulsatingCylinder,
            FamilyParams::PulsatingDrop { .. } => FamilyId::PulsatingDrop,
            FamilyParams::StationaryRing { .. } => FamilyId::StationaryRing,
            FamilyParams::CollapseContact { .. } => FamilyId::CollapseContact,
            FamilyParams::CollapseContactCubic { .. } => FamilyId::CollapseContactCubic,
            FamilyParams::CollapseScaling { .. } => FamilyId::CollapseScaling,
        }
    }

    /// Overrides one parameter by name. Profiles take `const:c`,
    /// `power:c:p` or `sine:a:k`; the ring branch takes `lower` or `upper`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let id = self.id();
        let bad = || RswError::InvalidParams(format!("cannot set {key}={value} on {id}"));
        let num = || value.trim().parse::<f64>().map_err(|_| bad());
        let slot: &mut f64 = match (&mut *self, key) {
            (FamilyParams::StationaryRotSym { vbar, .. }, "vbar") => {
                *vbar = Profile::parse(value).ok_or_else(bad)?;
                return Ok(());
            }
            (FamilyParams::CollapseContact { psi, .. }, "psi") => {
                *psi = Profile::parse(value).ok_or_else(bad)?;
                return Ok(());
            }
            (FamilyParams::StationaryRing { branch, .. }, "branch") => {
                *branch = match value {
                    "lower" => RingBranch::Lower,
                    "upper" => RingBranch::Upper,
                    _ => return Err(bad()),
                };
                return Ok(());
            }
            (
                FamilyParams::RestState { h0 }
                | FamilyParams::ConstantSwImage { h0, .. }
                | FamilyParams::BarochronousSw { h0 }
                | FamilyParams::StationaryRotSym { h0, .. }
                | FamilyParams::PulsatingCylinder { h0, .. },
                "h0",
            ) => h0,
            (FamilyParams::ConstantSwImage { u0, .. }, "u0") => u0,
            (FamilyParams::ConstantSwImage { v0, .. }, "v0") => v0,
            (FamilyParams::PulsatingCylinder { alpha, .. } | FamilyParams::PulsatingDrop { alpha }, "alpha") => alpha,
            (
                FamilyParams::StationaryRotSym { r_max, .. } | FamilyParams::CollapseScaling { r_max, .. },
                "r_max",
            ) => r_max,
            (
                FamilyParams::StationaryRing { c1, .. } | FamilyParams::CollapseContactCubic { c1, .. },
                "c1",
            ) => c1,
            (
                FamilyParams::StationaryRing { c2, .. } | FamilyParams::CollapseContactCubic { c2, .. },
                "c2",
            ) => c2,
            (
                FamilyParams::StationaryRing { c3, .. } | FamilyParams::CollapseContactCubic { c3, .. },
                "c3",
            ) => c3,
            (FamilyParams::CollapseContact { lambda0, .. }, "lambda0") => lambda0,
            (
                FamilyParams::CollapseContact { eta0, .. } | FamilyParams::CollapseScaling { eta0, .. },
                "eta0",
            ) => eta0,
            (FamilyParams::CollapseScaling { phi0, .. }, "phi0") => phi0,
            (
                FamilyParams::CollapseContact { r_lo, .. } | FamilyParams::CollapseContactCubic { r_lo, .. },
                "r_lo",
            ) => r_lo,
            (
                FamilyParams::CollapseContact { r_hi, .. } | FamilyParams::CollapseContactCubic { r_hi, .. },
                "r_hi",
            ) => r_hi,
            _ => return Err(bad()),
        };
        *slot = num()?;
        Ok(())
    }

    /// `(name, value)` pairs in the syntax accepted by [`FamilyParams::set`].
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let n = |v: f64| v.to_string();
        match self {
            FamilyParams::RestState { h0 } | FamilyParams::BarochronousSw { h0 } => vec![("h0", n(*h0))],
            FamilyParams::ConstantSwImage { u0, v0, h0 } => vec![("u0", n(*u0)), ("v0", n(*v0)), ("h0", n(*h0))],
            FamilyParams::StationaryRotSym { vbar, h0, r_max } => {
                vec![("vbar", vbar.label().into()), ("h0", n(*h0)), ("r_max", n(*r_max))]
            }
            FamilyParams::PulsatingCylinder { alpha, h0 } => vec![("alpha", n(*alpha)), ("h0", n(*h0))],
            FamilyParams::PulsatingDrop { alpha } => vec![("alpha", n(*alpha))],
            FamilyParams::StationaryRing { c1, c2, c3, branch } => vec![
                ("c1", n(*c1)),
                ("c2", n(*c2)),
                ("c3", n(*c3)),
                ("branch", if *branch == RingBranch::Lower { "lower" } else { "upper" }.into()),
            ],
            FamilyParams::CollapseContact { psi, lambda0, eta0, r_lo, r_hi } => vec![
                ("psi", psi.label().into()),
                ("lambda0", n(*lambda0)),
                ("eta0", n(*eta0)),
                ("r_lo", n(*r_lo)),
                ("r_hi", n(*r_hi)),
            ],
            FamilyParams::CollapseContactCubic { c1, c2, c3, r_lo, r_hi } => vec![
                ("c1", n(*c1)),
                ("c2", n(*c2)),
                ("c3", n(*c3)),
                ("r_lo", n(*r_lo)),
                ("r_hi", n(*r_hi)),
            ],
            FamilyParams::CollapseScaling { phi0, eta0, r_max } => {
                vec![("phi0", n(*phi0)), ("eta0", n(*eta0)), ("r_max", n(*r_max))]
            }
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(RswError::InvalidParams(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `l = −f²√(α/(12g))` of the drop.
pub fn drop_l(alpha: f64, params: &FlowParameters) -> f64 {
    -params.f().powi(2) * (alpha / (12.0 * params.g())).sqrt()
}

/// Builds the field of a family.
pub fn make_family(id: FamilyId, fp: &FamilyParams, params: &FlowParameters) -> Result<Field> {
    if fp.id() != id {
        return Err(RswError::InvalidParams(format!("parameters for {} given to {id}", fp.id())));
    }
    let params = *params;
    let field: Field = match fp.clone() {
        FamilyParams::RestState { h0 } => {
            positive("h0", h0)?;
            Arc::new(fields::Rest { h0 })
        }
        FamilyParams::ConstantSwImage { u0, v0, h0 } => {
            positive("h0", h0)?;
            if !(u0.is_finite() && v0.is_finite()) {
                return Err(RswError::InvalidParams("u0, v0 must be finite".into()));
            }
            Arc::new(fields::ConstantSwImage { u0, v0, h0, params })
        }
        FamilyParams::BarochronousSw { h0 } => {
            positive("h0", h0)?;
            Arc::new(fields::Barochronous { h0, f: params.f() })
        }
        FamilyParams::StationaryRotSym { vbar, h0, r_max } => {
            positive("h0", h0)?;
            positive("r_max", r_max)?;
            for i in 1..=64 {
                let r = r_max * i as f64 / 64.0;
                let h = stationary_depth(&vbar, h0, r, &params)?;
                if !(h > 0.0) {
                    return Err(RswError::InvalidParams(format!("depth {h} at r = {r} is not positive")));
                }
            }
            Arc::new(fields::StationaryRotSym { profile: vbar, h0, r_max, params })
        }
        FamilyParams::PulsatingCylinder { alpha, h0 } => {
            positive("alpha", alpha)?;
            positive("h0", h0)?;
            Arc::new(fields::Periodic {
                alpha,
                radial: fields::Radial::Rest { h0 },
                params,
            })
        }
        FamilyParams::PulsatingDrop { alpha } => {
            positive("alpha", alpha)?;
            Arc::new(fields::Periodic {
                alpha,
                radial: fields::Radial::Drop { l: drop_l(alpha, &params) },
                params,
            })
        }
        FamilyParams::StationaryRing { c1, c2, c3, branch } => {
            let constants = RingConstants { c1, c2, c3 };
            let bounds = ring_bounds(&constants, &params)?;
            Arc::new(fields::Ring {
                constants,
                branch,
                bounds,
                params,
            })
        }
        FamilyParams::CollapseContact {
            psi,
            lambda0,
            eta0,
            r_lo,
            r_hi,
        } => {
            positive("lambda0", lambda0)?;
            positive("eta0", eta0)?;
            positive("r_lo", r_lo)?;
            if !(r_hi > r_lo) {
                return Err(RswError::InvalidParams("need r_hi > r_lo".into()));
            }
            Arc::new(fields::Contact {
                psi,
                lambda0,
                eta0,
                r_lo,
                r_hi,
                params,
            })
        }
        FamilyParams::CollapseContactCubic { c1, c2, c3, r_lo, r_hi } => {
            positive("r_lo", r_lo)?;
            if !(r_hi > r_lo) {
                return Err(RswError::InvalidParams("need r_hi > r_lo".into()));
            }
            if c3 == 0.0 || ![c1, c2, c3].iter().all(|c| c.is_finite()) {
                return Err(RswError::InvalidParams("need finite constants with C3 != 0".into()));
            }
            Arc::new(fields::ContactCubic {
                c1,
                c2,
                c3,
                r_lo,
                r_hi,
                params,
            })
        }
        FamilyParams::CollapseScaling { phi0, eta0, r_max } => {
            positive("r_max", r_max)?;
            let ic = collapse2_build(phi0, eta0, &params)?;
            Arc::new(fields::Scaling { ic, r_max, params })
        }
    };
    Ok(field)
}

/// Default 10×10×10 verification grid of a family, inside `field`'s window.
pub fn default_grid(id: FamilyId, field: &dyn FlowField) -> GridSpec {
    let n = 10;
    let w = field.window();
    let theta = Axis::new(0.1, 6.0, n);
    let polar = |t: Axis, r: Axis| GridSpec::new(t, r, theta);
    match id {
        FamilyId::RestState => GridSpec::new(Axis::new(0.0, 5.0, n), Axis::new(-2.0, 2.0, n), Axis::new(-2.0, 2.0, n)),
        FamilyId::ConstantSwImage => {
            GridSpec::new(Axis::new(0.5, 5.0, n), Axis::new(-2.0, 2.0, n), Axis::new(-2.0, 2.0, n))
        }
        FamilyId::BarochronousSw => polar(Axis::new(-3.0, 3.0, n), Axis::new(0.1, 2.0, n)),
        FamilyId::StationaryRotSym => polar(Axis::new(0.0, 5.0, n), Axis::new(0.1, 0.96 * w.r_hi, n)),
        FamilyId::PulsatingCylinder => polar(Axis::new(0.0, 6.0, n), Axis::new(0.1, 2.0, n)),
        FamilyId::PulsatingDrop => polar(Axis::new(0.0, 6.0, n), Axis::new(0.02, 0.95, n)).radial_fraction(),
        FamilyId::StationaryRing => polar(Axis::new(0.0, 5.0, n), Axis::new(1.05 * w.r_lo, 0.95 * w.r_hi, n)),
        FamilyId::CollapseContact | FamilyId::CollapseContactCubic => {
            // (0.3, 5.5) in units of 1/f
            let unit = (w.t_hi - w.t_lo) / (2.0 * std::f64::consts::PI);
            let t = Axis::new(0.3 * unit, 5.5 * unit, n);
            let r: (f64, f64) = if id == FamilyId::CollapseContact { (0.5, 5.0) } else { (1.5, 4.0) };
            polar(t, Axis::new(r.0.max(w.r_lo), r.1.min(w.r_hi), n))
        }
        FamilyId::CollapseScaling => polar(Axis::new(0.0, 0.9 * w.t_hi, n), Axis::new(0.1, w.r_hi.min(2.0), n)),
    }
}
