use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse failure class, used by the command line front end to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e}, tolerance {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("eigensolver did not converge within {max_iterations} sweeps")]
    NoConvergence { max_iterations: usize },

    #[error("singular matrix: pivot {pivot:e} below threshold {threshold:e}")]
    Singular { pivot: f64, threshold: f64 },

    #[error("undamped resonance: drive matrix is singular at kappa = 0")]
    UndampedResonance,

    #[error("gapless configuration (|2 delta| = Je or J = 0): topological invariant undefined")]
    Gapless,

    #[error("no in-gap state at theta = {theta}")]
    NoInGapState { theta: f64 },

    #[error("zero vector has no density profile")]
    ZeroVector,

    #[error("time step {dt} exceeds stability bound {max}")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("phase trace under-sampled: largest step {max_step} rad with {samples} samples")]
    UnderSampled { max_step: f64, samples: usize },

    #[error("reflection amplitude vanishes at theta = {theta}; phase undefined")]
    VanishingAmplitude { theta: f64 },

    #[error("evanescent lead: |E| = {energy} is not below the lead half-bandwidth {bandwidth}")]
    EvanescentLead { energy: f64, bandwidth: f64 },

    #[error("probe energy Ep = {ep} is not inside the bulk gap at theta = {theta}")]
    NotInGap { ep: f64, theta: f64 },

    #[error("gauge link vanishes at grid point ({ik}, {itheta}); refine the grid")]
    GridRefinement { ik: usize, itheta: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParams(_)
            | Error::InvalidGrid(_)
            | Error::DimensionMismatch { .. }
            | Error::NotHermitian { .. }
            | Error::StepTooLarge { .. }
            | Error::EvanescentLead { .. }
            | Error::NotInGap { .. }
            | Error::Config(_) => ErrorKind::Validation,
            Error::NoConvergence { .. }
            | Error::Singular { .. }
            | Error::UndampedResonance
            | Error::Gapless
            | Error::NoInGapState { .. }
            | Error::ZeroVector
            | Error::UnderSampled { .. }
            | Error::VanishingAmplitude { .. }
            | Error::GridRefinement { .. } => ErrorKind::Numerical,
            Error::Io(_) | Error::Json(_) => ErrorKind::Io,
        }
    }

    /// Short stable identifier for machine-readable error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidGrid(_) => "invalid_grid",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Singular { .. } => "singular",
            Error::UndampedResonance => "undamped_resonance",
            Error::Gapless => "gapless",
            Error::NoInGapState { .. } => "no_in_gap_state",
            Error::ZeroVector => "zero_vector",
            Error::StepTooLarge { .. } => "step_too_large",
            Error::UnderSampled { .. } => "under_sampled",
            Error::VanishingAmplitude { .. } => "vanishing_amplitude",
            Error::EvanescentLead { .. } => "evanescent_lead",
            Error::NotInGap { .. } => "not_in_gap",
            Error::GridRefinement { .. } => "grid_refinement",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
