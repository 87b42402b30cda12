use thiserror::Error;

/// Every failure the library can report. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImbError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("point is {distance:.3e} away from the boundary")]
    LocateFailed { distance: f64 },
    #[error("launch angle {theta} is tangential; the map is the identity there")]
    TangentialChord { theta: f64 },
    #[error("chord leaves the table immediately")]
    NoInteriorHit,
    #[error("Larmor circle never re-enters the table")]
    NoReentry,
    #[error("tangential contact at sweep {sweep}")]
    TangentialContact { sweep: f64 },
    #[error("degenerate step: {0}")]
    DegenerateStep(String),
    #[error("orbit does not close (residual {residual:.3e})")]
    NotPeriodic { residual: f64 },
    #[error("Larmor radius {mu} is not below {max}")]
    MuTooLarge { mu: f64, max: f64 },
    #[error("stadium orbit with mu = {mu} does not fit in the table")]
    InfeasibleStadium { mu: f64 },
    #[error("x0 = {x0} outside ({lo}, {hi})")]
    X0OutOfRange { x0: f64, lo: f64, hi: f64 },
    #[error("x0 = {x0} is beyond the four-intersection threshold {x_hat}")]
    BeyondXHat { x0: f64, x_hat: f64 },
    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },
    #[error("orbit is not a symmetric 4-periodic orbit")]
    NotSymmetric,
    #[error("singular Newton matrix (|det(S - I)| = {det:.3e})")]
    SingularJacobian { det: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("lambda = {lambda} is a degenerate caustic")]
    LambdaDegenerate { lambda: f64 },
    #[error("nu0 = {nu0} must exceed 1")]
    Nu0OutOfRange { nu0: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl ImbError {
    /// Short machine-readable tag, printed by the CLI on failure.
    pub fn tag(&self) -> &'static str {
        match self {
            ImbError::InvalidCurve(_) => "InvalidCurve",
            ImbError::Validation(_) => "Validation",
            ImbError::LocateFailed { .. } => "LocateFailed",
            ImbError::TangentialChord { .. } => "TangentialChord",
            ImbError::NoInteriorHit => "NoInteriorHit",
            ImbError::NoReentry => "NoReentry",
            ImbError::TangentialContact { .. } => "TangentialContact",
            ImbError::DegenerateStep(_) => "DegenerateStep",
            ImbError::NotPeriodic { .. } => "NotPeriodic",
            ImbError::MuTooLarge { .. } => "MuTooLarge",
            ImbError::InfeasibleStadium { .. } => "InfeasibleStadium",
            ImbError::X0OutOfRange { .. } => "X0OutOfRange",
            ImbError::BeyondXHat { .. } => "BeyondXHat",
            ImbError::RootNotBracketed { .. } => "RootNotBracketed",
            ImbError::NotSymmetric => "NotSymmetric",
            ImbError::SingularJacobian { .. } => "SingularJacobian",
            ImbError::NoConvergence { .. } => "NoConvergence",
            ImbError::LambdaDegenerate { .. } => "LambdaDegenerate",
            ImbError::Nu0OutOfRange { .. } => "Nu0OutOfRange",
            ImbError::Config(_) => "Config",
            ImbError::Io(_) => "Io",
        }
    }

    /// 2 validation, 3 geometric or dynamic, 4 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            ImbError::InvalidCurve(_)
            | ImbError::Validation(_)
            | ImbError::MuTooLarge { .. }
            | ImbError::X0OutOfRange { .. }
            | ImbError::LambdaDegenerate { .. }
            | ImbError::Nu0OutOfRange { .. }
            | ImbError::Config(_)
            | ImbError::Io(_) => 2,
            ImbError::LocateFailed { .. }
            | ImbError::TangentialChord { .. }
            | ImbError::NoInteriorHit
            | ImbError::NoReentry
            | ImbError::TangentialContact { .. }
            | ImbError::DegenerateStep(_)
            | ImbError::NotPeriodic { .. }
            | ImbError::InfeasibleStadium { .. }
            | ImbError::BeyondXHat { .. }
            | ImbError::NotSymmetric => 3,
            ImbError::RootNotBracketed { .. }
            | ImbError::SingularJacobian { .. }
            | ImbError::NoConvergence { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, ImbError>;
