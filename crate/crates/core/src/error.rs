use alloc::string::String;

use crate::exact::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zeta index {0} is outside 1..=7")]
    ZetaIndex(usize),
    #[error("row polynomial {row} has no unique root in (0, 1/2)")]
    NoRootInRange { row: usize },
    #[error("polynomial vanishes at bracket endpoint {0}")]
    RootAtEndpoint(Rational),
    #[error("delta = {0} must lie strictly between 0 and 1/2")]
    DeltaOutOfRange(Rational),
    #[error("{what} must be positive, got {value}")]
    NotPositive { what: &'static str, value: Rational },
    #[error("interval ({left}, {right}) has left > right")]
    InvalidInterval { left: Rational, right: Rational },
    #[error("relative measure over an empty interval")]
    EmptyInterval,
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("{0} is not an endpoint of the set")]
    NotAnEndpoint(Rational),
    #[error("endpoint {0} has no radius with density outside (delta, 1 - delta)")]
    NoBadRadius(Rational),
    #[error("bad radii are unbounded, no greatest radius exists")]
    UnboundedBadRadii,
    #[error("configuration must end at 1, last endpoint is {0}")]
    NotNormalized(Rational),
    #[error("the range defining {0} is empty")]
    EmptyRange(&'static str),
    #[error("bundle object `{0}` is missing or has the wrong kind")]
    MissingSymbol(String),
    #[error("unknown property bundle `{0}`")]
    UnknownBundle(String),
    #[error("density limit {0} equals a threshold; the tail cannot be certified")]
    UndecidableTail(Rational),
    #[error("{0} lies in the interior of the set")]
    InteriorPoint(Rational),
    #[error("search failed: {0}")]
    NotFound(String),
    #[error("geometrically infeasible: {0}")]
    Infeasible(String),
    #[error("malformed rational `{0}`")]
    Parse(String),
    #[error("profile horizon {0} is too short to certify the tail")]
    ShortHorizon(Rational),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}
