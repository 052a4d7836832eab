use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("flux denominator vanishes at u = {u}")]
    Domain { u: f64 },
    #[error("derivative order {0} is not supported (expected 0, 1 or 2)")]
    InvalidOrder(u8),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown named flux `{0}`")]
    UnknownNamedFlux(String),
    #[error("root bracketing failed: {0}")]
    BracketingFailure(String),
    #[error("envelope construction failed: {0}")]
    EnvelopeFailure(String),
    #[error("left and right states coincide (u = {0})")]
    DegenerateStates(f64),
    #[error("adaptive quadrature exceeded depth {0}")]
    QuadratureFailure(usize),
    #[error("segment has zero extent")]
    DegenerateSegment,
    #[error("curve parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("span endpoint does not lie on x = {x_s} (off by {offset:e})")]
    NoIntersection { x_s: f64, offset: f64 },
    #[error("projection failed: {0}")]
    ProjectionFailure(String),
    #[error("wave fans overlap: {0}")]
    FanOverlap(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
