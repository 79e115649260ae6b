//! Independent checks of catalog and transported fields: PDE residuals,
//! particle paths, material curves and a finite-volume oracle.

mod fv;
mod grid;
mod residual;
mod trajectory;

pub use fv::{fv_convergence, fv_oracle, FvConfig, FvConvergence, FvResult};
pub use grid::{Axis, GridSpec};
pub use residual::{
    corrupt_depth, residual, residual_at, residual_cartesian, residual_points, residual_polar, ResidualReport, Worst,
};
pub use trajectory::{
    evolve_material_curve, integrate_trajectory, pv_drift, MaterialCurve, TrajPoint, Trajectory, R_FLOOR,
};
