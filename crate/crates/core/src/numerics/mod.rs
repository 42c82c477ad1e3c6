//! Numerical building blocks shared by the geometry modules.

pub mod fit;
pub mod quadrature;
pub mod roots;
pub mod stencil;

pub use fit::{geometric, least_squares, poly_fit, power_law_order, LsqFit};
pub use quadrature::{composite_nodes, integrate, QuadOptions};
pub use roots::{bisect, newton_increasing};
