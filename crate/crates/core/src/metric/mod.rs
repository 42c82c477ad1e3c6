//! Metric families: background parameters, expansion profiles and their
//! evaluation, document format, validation and test fixtures.

pub mod background;
pub mod decay;
pub mod document;
pub mod fixtures;
pub mod fourier;
pub mod radial;
pub mod spec;
pub mod validate;

pub use background::{find_r_plus, hm_reference, period_beta, r_breve_for_period, BackgroundParams};
pub use decay::{corrected_order, decay_order, DecayFit, DecayOptions};
pub use document::{load_spec, MetricDocument};
pub use fourier::{AngularSeries, FourierSeries, Jet, Mode, TensorJet, TorusTensorSeries};
pub use radial::{ProfileJet, RadialSeries, ScalarJet, TensorProfileJet};
pub use spec::{LocalData, MetricSpec, Point};
pub use validate::{cartesian, regularity_residual, validate_spec, GridSpec, ValidationReport, REGULARITY_TOL};
