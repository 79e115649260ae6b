//! Numerical machinery behind the reduced (ODE and algebraic) submodels:
//! cubic roots, ring bounds, the contact-characteristic submodel and the
//! implicit scaling collapse.

mod collapse;
mod cubic;
mod ring;
mod submodel;

pub use collapse::{collapse2_build, collapse2_build_with, collapse2_verify_ode, Collapse2Report, ImplicitCollapse, SubmodelState};
pub use cubic::{cubic_discriminant_sign, cubic_roots, monic_cubic_roots};
pub use ring::{ring_bounds, ring_depth, CubicCoeffs, RingBounds, RingBranch, RingConstants};
pub use submodel::{submodel_residual_contact, ContactResidual};
