//! Conformal boundary data: the special defining function, the boundary
//! tensors `θ` and `κ`, total energy, the integrability condition and the
//! Poincaré–Einstein decay test.

pub mod ape;
pub mod boundary;
pub mod defining;
pub mod energy;
pub mod integral;
pub mod l1;

pub use ape::{ape_deficit, default_x_samples, omega_norm, ApeReport};
pub use boundary::{boundary_tensors, kappa_series, theta_series, BoundaryData};
pub use defining::{defining_function, DefiningFunction, RExpansion};
pub use energy::{energy_difference, energy_summary, hm_energy, total_energy, EnergySummary};
pub use integral::RadialIntegral;
pub use l1::{deficit_decay_order, l1_condition, l1_field, L1Report, L1_TOL};
