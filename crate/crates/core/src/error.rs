use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid background: {0}")]
    InvalidBackground(String),

    #[error("1 + a r^(1-n) - r0^n r^(-n) has no positive root (n = {n}, a = {a}, r0 = {r0})")]
    NoRoot { n: usize, a: f64, r0: f64 },

    #[error("invalid metric specification: {0}")]
    InvalidSpec(String),

    #[error("metric is singular at r = {r} (horizon r+ = {r_plus})")]
    SingularAtHorizon { r: f64, r_plus: f64 },

    #[error("|f| fell below the sample floor {floor:e} (order >= cutoff)")]
    BelowFloor { floor: f64 },

    #[error("torus block is numerically singular (condition number {condition:e})")]
    DegenerateGamma { condition: f64 },

    #[error("finite-difference stencil at r = {r} with radius {radius} crosses the horizon r+ = {r_plus}")]
    StencilOutOfDomain { r: f64, radius: f64, r_plus: f64 },

    #[error("adaptive quadrature on [{a}, {b}] stalled at error estimate {error:e}")]
    QuadratureFail { a: f64, b: f64, error: f64 },

    #[error("least-squares fit unstable: {0}")]
    FitUnstable(String),

    #[error("flux sequence diverges (growth coefficient {growth:e}); the integrability condition fails")]
    Divergent { growth: f64 },

    #[error("regularity at the horizon fails (residual {residual:e})")]
    RegularityFail { residual: f64 },

    #[error("could not parse metric document: {0}")]
    Parse(String),
}
