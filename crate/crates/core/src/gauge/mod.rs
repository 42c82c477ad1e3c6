//! Radial gauge change `r ↦ r̃` putting `g_rr` into exact HM form, the
//! induced transformation of the expansion coefficients, and the horizon
//! value of `e^{v̂̃}`.

pub mod coeffs;
pub mod horizon;
pub mod map;

pub use coeffs::{
    closed_form_coeffs, exp_v_tilde_minus_one, l1_condition_tilde, transformed_coeffs, CoeffReport, TildeL1Report,
    TransformedCoeffs,
};
pub use horizon::{horizon_value_check, HorizonCheck};
pub use map::{
    f0, f_profile, radial_gauge, radial_gauge_with, FProfile, GaugeExpansion, GaugeMap, GaugeNode, GaugePoint,
    TABLE_NODES,
};
