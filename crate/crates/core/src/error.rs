use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors. Variant names double as the stable error identifiers the
/// CLI reports on stderr (see [`Error::name`]).
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid link: {0}")]
    InvalidLink(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("vertex {vertex} lies {distance:.3e} rad from the projection pole (minimum {min:.3e})")]
    PoleTooClose {
        vertex: usize,
        distance: f64,
        min: f64,
    },
    #[error("no candidate pole keeps {min:.3e} rad away from every vertex")]
    NoValidPole { min: f64 },
    #[error("resampling needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("curves are {separation:.3e} apart (minimum {min:.3e})")]
    CurvesTooClose { separation: f64, min: f64 },
    #[error("Gauss sum {sum} is {residual:.3e} from the nearest integer")]
    NonIntegerResult { sum: f64, residual: f64 },
    #[error("projection direction is degenerate: {0}")]
    DegenerateProjection(String),
    #[error("push-off distance {epsilon:.3e} exceeds the admissible bound {bound:.3e}")]
    EpsilonTooLarge { epsilon: f64, bound: f64 },
    #[error("framing is degenerate at vertex {vertex}")]
    DegenerateFraming { vertex: usize },
    #[error("self-linking differs between push-off distances: {first} vs {second}")]
    UnstableSelfLinking { first: String, second: String },
    #[error("integration needs {steps} steps, cap is {cap}")]
    StepCapExceeded { steps: u64, cap: u64 },
    #[error("no return to the start point within {steps} steps")]
    NotPeriodic { steps: u64 },
    #[error("flow field `{0}` has no analytic differential")]
    MissingJacobian(String),
    #[error("flow field `{0}` has no transverse field")]
    MissingTransverseField(String),
    #[error("Euler characteristic {0} is not an integer")]
    NonIntegerChi(String),
    #[error("component {0} has zero longitudinal and meridional coordinates")]
    ZeroBoundary(usize),
    #[error("chi + boundary circle count is odd ({0}); no surface has this boundary data")]
    ParityViolation(i64),
    #[error("{rejected} of {requested} sampled pairs were rejected")]
    TooManyRejections { rejected: usize, requested: usize },
    #[error("framing equation violated: slk_zeta={slk_zeta}, slk_dx={slk_dx}, ruelle={ruelle}")]
    FramingEquationViolated {
        slk_zeta: f64,
        slk_dx: f64,
        ruelle: f64,
    },
    #[error("pair ({i}, {j}): {source}")]
    Pair {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Identifier of the underlying error, looking through pair/component
    /// attribution.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::InvalidLink(_) => "InvalidLink",
            Error::InvalidInput(_) => "InvalidInput",
            Error::PoleTooClose { .. } => "PoleTooClose",
            Error::NoValidPole { .. } => "NoValidPole",
            Error::TooFewVertices(_) => "TooFewVertices",
            Error::CurvesTooClose { .. } => "CurvesTooClose",
            Error::NonIntegerResult { .. } => "NonIntegerResult",
            Error::DegenerateProjection(_) => "DegenerateProjection",
            Error::EpsilonTooLarge { .. } => "EpsilonTooLarge",
            Error::DegenerateFraming { .. } => "DegenerateFraming",
            Error::UnstableSelfLinking { .. } => "UnstableSelfLinking",
            Error::StepCapExceeded { .. } => "StepCapExceeded",
            Error::NotPeriodic { .. } => "NotPeriodic",
            Error::MissingJacobian(_) => "MissingJacobian",
            Error::MissingTransverseField(_) => "MissingTransverseField",
            Error::NonIntegerChi(_) => "NonIntegerChi",
            Error::ZeroBoundary(_) => "ZeroBoundary",
            Error::ParityViolation(_) => "ParityViolation",
            Error::TooManyRejections { .. } => "TooManyRejections",
            Error::FramingEquationViolated { .. } => "FramingEquationViolated",
            Error::Pair { source, .. } | Error::Component { source, .. } => source.name(),
        }
    }

    /// Strips pair/component attribution.
    pub fn root(&self) -> &Error {
        match self {
            Error::Pair { source, .. } | Error::Component { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn for_pair(self, i: usize, j: usize) -> Error {
        Error::Pair {
            i,
            j,
            source: Box::new(self),
        }
    }

    pub(crate) fn for_component(self, index: usize) -> Error {
        Error::Component {
            index,
            source: Box::new(self),
        }
    }
}
