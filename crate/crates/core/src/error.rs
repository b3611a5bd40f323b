use thiserror::Error;

/// Errors produced by the matrix logarithm toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("singular system: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularSystem { pivot: f64, threshold: f64 },
    #[error("{method} did not converge after {iterations} iterations")]
    NonConvergence { method: &'static str, iterations: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("spectrum touches the branch cut (-inf, 0]")]
    BranchCutSpectrum,
    #[error("field of values crosses the branch cut (clearance {clearance:.3e}); retry with a pseudospectral set")]
    FovCrossesBranchCut { clearance: f64 },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("invalid quadrature order {0} (expected 1..=200)")]
    InvalidOrder(usize),
    #[error("evaluation point {0} lies on the branch cut (-inf, -1]")]
    BranchCut(f64),
    #[error("rational function pole hit at z = {re}{im:+}i")]
    PoleHit { re: f64, im: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("level set is empty inside the sampled box")]
    EmptyLevel,
    #[error("no feasible (s, k) with s <= {s_max}, k <= {k_max} reaches tolerance {tol:.3e}")]
    NoFeasibleParams { tol: f64, s_max: u32, k_max: usize },
    #[error("norm {0} is not below 1")]
    NormTooLarge(f64),
    #[error("unknown gallery family '{0}'")]
    UnknownFamily(String),
    #[error("bad gallery parameters: {0}")]
    BadParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short class name used by the command line front end.
    pub fn class(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::SingularSystem { .. } => "SingularSystem",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::NotHermitian(_) => "NotHermitian",
            Error::BranchCutSpectrum => "BranchCutSpectrum",
            Error::FovCrossesBranchCut { .. } => "FovCrossesBranchCut",
            Error::Overflow(_) => "Overflow",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::BranchCut(_) => "BranchCut",
            Error::PoleHit { .. } => "PoleHit",
            Error::InvalidParams(_) => "InvalidParams",
            Error::EmptyLevel => "EmptyLevel",
            Error::NoFeasibleParams { .. } => "NoFeasibleParams",
            Error::NormTooLarge(_) => "NormTooLarge",
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::BadParams(_) => "BadParams",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
