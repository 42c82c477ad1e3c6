//! Numerical verification of the positive-energy inequality: the
//! integrated identity, the nonnegative bulk term, the boundary flux, the
//! elementary inequality, the theorem pipeline and rigidity.

pub mod identity;
pub mod integrand;

pub use identity::{
    flux_limit, horizon_term, integrated_identity, radial_nodes, FluxLimit, IdentityPoint, IdentityReport, RadialRule,
};
pub use integrand::{nonneg_integrand_a, tilde_terms, AIntegrand, TildeTerms};
pub mod inequality;

pub use inequality::{elementary_inequality, elementary_sweep, elementary_sweep_range, ElementaryValue, SweepRow};
pub mod theorem;

pub use theorem::{
    rigidity_residual, verify_theorem, EnergyReport, HypothesisFlags, RigidityReport, Tolerances, Verdict,
    VerifyOptions,
};
