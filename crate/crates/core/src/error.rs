use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arrows are not composable: {0}")]
    NonComposable(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("malformed groupoid: {0}")]
    MalformedGroupoid(String),
    #[error("path endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("reparametrization is not monotone: {0}")]
    NonMonotone(String),
    #[error("operation not available for this path kind: {0}")]
    KindMismatch(String),
    #[error("nerve is not downward closed: {0}")]
    BadNerve(String),
    #[error("cover is not good: {0}")]
    NotGood(String),
    #[error("cannot take the coboundary of a {0}-form")]
    DegreeOverflow(u8),
    #[error("region does not lie in chart: {0}")]
    ChartMismatch(String),
    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),
    #[error("path is not closed: {0}")]
    NotClosed(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid surface assignment: {0}")]
    InvalidAssignment(String),
    #[error("invalid gerbe data: {0}")]
    InvalidGerbe(String),
    #[error("invalid 2-loop or homotopy: {0}")]
    InvalidSurface(String),
    #[error("family is not closed: {0}")]
    FamilyNotClosed(String),
    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),
    #[error("double groupoid is not edge symmetric: {0}")]
    NotEdgeSymmetric(String),
    #[error("subgroupoid is not wide: {0}")]
    NotWide(String),
    #[error("point lies outside the open set: {0}")]
    PointOutside(String),
    #[error("transport data is inconsistent: {0}")]
    InconsistentTransport(String),
    #[error("path connection is not flat: {0}")]
    FlatnessViolation(String),
    #[error("geodesics disagree on an overlap: {0}")]
    OverlapIncoherence(String),
    #[error("rewriting rules are not confluent: {0}")]
    NonConfluentRules(String),
    #[error("topology too large: {0}")]
    TopologyTooLarge(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
