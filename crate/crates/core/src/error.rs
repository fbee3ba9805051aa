use thiserror::Error;

/// Failure modes of the library operations.
///
/// Most variants are precondition failures: an input that is outside the
/// domain of the construction, or a hypothesis of the interpolation lemma
/// that does not hold for the given data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not a strict contraction (operator norm {norm})")]
    NotContraction { norm: f64 },

    #[error("1 - Z*X is numerically singular (condition number {condition:e})")]
    SingularResolvent { condition: f64 },

    #[error("alpha must be a nonzero vector")]
    ZeroAlpha,

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("evaluation point hits the pole of Phi_{j}")]
    PoleHit { j: usize },

    #[error("Phi_{j} has a pole on the closed disc (|y_(n-j)| = {modulus} >= C(n,j))")]
    PoleOnDisc { j: usize, modulus: f64 },

    #[error("|q| = {modulus} is not below 1")]
    QOnBoundary { modulus: f64 },

    #[error("dimension n = {n} is too small for this operation")]
    DimensionTooSmall { n: usize },

    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected {expected} matrices, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("matrix determinants differ by {spread:e}")]
    DeterminantMismatch { spread: f64 },

    #[error("hypothesis `{hypothesis}` violated (slack {slack:e})")]
    HypothesisViolated { hypothesis: String, slack: f64 },

    #[error("nu = {nu} outside the admissible window: nu^2 must lie in ({theta}, {vartheta})")]
    NuOutOfRange { nu: f64, theta: f64, vartheta: f64 },

    #[error("u_Z(alpha) vanishes; the Q(0) constraint cannot be solved")]
    ZeroU,

    #[error("constructed Q(0) has norm {norm} > 1")]
    QNotContractive { norm: f64 },

    #[error("Q(0) constraint residual {residual:e} exceeds tolerance")]
    QConstraintViolated { residual: f64 },

    #[error("function is not Schur: sampled supremum {sup}")]
    NotSchur { sup: f64 },

    #[error("point of modulus {modulus} is outside the open unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("factor determinants disagree by {spread:e}")]
    DetInconsistent { spread: f64 },

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("h(0) = {value:e} but a root at the origin is required")]
    RootOnOriginMissing { value: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("degenerate target for pair j = {j}: y_j y_(n-j) = C(n,j)^2 q or constant map")]
    DegenerateTarget { j: usize },

    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("point is not in the open extended symmetrized polydisc")]
    NotInterior,

    #[error("node {index} is not in the unit mu-ball (mu = {mu}, |lambda| = {modulus})")]
    NodeNotInBall { index: usize, mu: f64, modulus: f64 },

    #[error("nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotContraction { .. } => "NotContraction",
            Error::SingularResolvent { .. } => "SingularResolvent",
            Error::ZeroAlpha => "ZeroAlpha",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::PoleHit { .. } => "PoleHit",
            Error::PoleOnDisc { .. } => "PoleOnDisc",
            Error::QOnBoundary { .. } => "QOnBoundary",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DeterminantMismatch { .. } => "DeterminantMismatch",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::NuOutOfRange { .. } => "NuOutOfRange",
            Error::ZeroU => "ZeroU",
            Error::QNotContractive { .. } => "QNotContractive",
            Error::QConstraintViolated { .. } => "QConstraintViolated",
            Error::NotSchur { .. } => "NotSchur",
            Error::OutsideDisc { .. } => "OutsideDisc",
            Error::DetInconsistent { .. } => "DetInconsistent",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::RootOnOriginMissing { .. } => "RootOnOriginMissing",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DegenerateTarget { .. } => "DegenerateTarget",
            Error::FactorizationFailed(_) => "FactorizationFailed",
            Error::NotInterior => "NotInterior",
            Error::NodeNotInBall { .. } => "NodeNotInBall",
            Error::DuplicateNodes { .. } => "DuplicateNodes",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }

    pub(crate) fn hypothesis(name: impl Into<String>, slack: f64) -> Self {
        Error::HypothesisViolated {
            hypothesis: name.into(),
            slack,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
