//! Exact solutions, symmetries and verification tools for the rotating
//! shallow water equations
//!
//! ```text
//! u_t + u u_x + v u_y − f v + g h_x = 0
//! v_t + u v_x + v v_y + f u + g h_y = 0
//! h_t + (u h)_x + (v h)_y = 0
//! ```
//!
//! The crate is organised bottom-up: [`flow`] holds the shared types and the
//! [`flow::FlowField`] abstraction, [`liealg`] and [`transforms`] deal with
//! the symmetry group, [`solutions`] is the catalog of exact solutions built
//! on [`reduction`], and [`verify`] checks all of them independently.

pub mod error;
pub mod flow;
pub mod jet;
pub mod liealg;
pub mod ode;
pub mod quad;
pub mod reduction;
pub mod solutions;
pub mod transforms;
pub mod verify;

pub use error::{Result, RswError};
pub use flow::{
    cartesian_to_polar, diagnostics, polar_to_cartesian, potential_vorticity, CartesianPoint, CartesianState,
    DerivativeMode, Diagnostics, Field, FieldExt, FlowField, FlowParameters, Frame, PolarPoint, PolarState, System,
    Window,
};
