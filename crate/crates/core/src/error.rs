use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("leading x-coefficient {0} of the divisor is not a unit of Z[v, v^-1]")]
    NonUnitLeadingCoefficient(String),

    #[error("unsupported Cartan type: {0}")]
    UnsupportedType(String),

    #[error("elements belong to different ambient groups")]
    MixedAmbient,

    #[error("operands use different Hecke conventions")]
    ConventionMismatch,

    #[error("element is not central: fails to commute with generator {0}")]
    NotCentral(usize),

    #[error("operands belong to different orbits")]
    OrbitMismatch,

    #[error("tuple violates the gluing condition at s = {s}, w = {w}")]
    GluingViolation { s: usize, w: String },

    #[error("identity check failed: {check}: {witness}")]
    IdentityFailure { check: String, witness: String },

    #[error("precondition failed: nonzero residual {0}")]
    PreconditionFailure(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),
}
