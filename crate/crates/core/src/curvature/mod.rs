//! Scalar curvature of metrics in the class: the warped-product formula,
//! a generic finite-difference oracle, torus curvature and the leading
//! coefficient of the curvature deficit.

pub mod leading;
pub mod oracle;
pub mod torus;
pub mod warped;

pub use leading::{predicted_trace_theta, scalar_deficit_leading, LeadingCoefficient};
pub use oracle::{
    default_step, fd_jets, ricci_from_jets, scalar_curvature_fd, scalar_curvature_oracle,
    scalar_curvature_oracle_order, scalar_from_jets, MetricJets,
};
pub use torus::{gauss_bonnet_integral, torus_scalar, torus_scalar_fd, torus_scalar_integral};
pub use warped::{scalar_curvature_warped, scalar_deficit, w_quantities, warped_terms, WQuantities, WarpedTerms};
