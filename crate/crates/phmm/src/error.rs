use thiserror::Error;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:e} below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("spectra intersect: {0}")]
    SpectrumClash(String),
    #[error("eigenvalue product equals one: {0}")]
    SpectrumProductClash(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("evaluation point {0} is a pole")]
    PoleHit(String),
    #[error("parameter `{0}` must be positive")]
    NonPositiveParameter(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("gram matrix is numerically singular")]
    SingularGram,
    #[error("descriptor matrix E is singular")]
    SingularE,
    #[error("basis is rank deficient: rank {rank} < {expected}")]
    RankDeficientBasis { rank: usize, expected: usize },
    #[error("certificate kind mismatch: {0}")]
    KindMismatch(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("plant is not asymptotically stable (max real part {0:e})")]
    UnstablePlant(f64),
    #[error("generator is not marginally stable (max |real part| {0:e})")]
    UnstableGenerator(f64),
    #[error("step {dt} exceeds the stability bound {bound}")]
    DegenerateStep { dt: f64, bound: f64 },
    #[error("energy audit requires r_psd and q_pd flags")]
    FlagsMissing,
    #[error("expected a real matrix, imaginary part {0:e}")]
    NotReal(f64),
    #[error("residual {residual:e} exceeds bound {bound:e}")]
    IllConditioned { residual: f64, bound: f64 },
    #[error("matching conditions have no solution: {0}")]
    MatchingInfeasible(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "SingularMatrix",
            Error::NoConvergence => "NoConvergence",
            Error::SpectrumClash(_) => "SpectrumClash",
            Error::SpectrumProductClash(_) => "SpectrumProductClash",
            Error::DimensionMismatch(_) => "DimensionError",
            Error::PoleHit(_) => "PoleHit",
            Error::NonPositiveParameter(_) => "NonPositiveParameter",
            Error::Invariant(_) => "InvariantError",
            Error::SingularGram => "SingularGram",
            Error::SingularE => "SingularE",
            Error::RankDeficientBasis { .. } => "RankDeficientBasis",
            Error::KindMismatch(_) => "KindMismatch",
            Error::CertificateInvalid(_) => "CertificateInvalid",
            Error::UnstablePlant(_) => "UnstablePlant",
            Error::UnstableGenerator(_) => "UnstableGenerator",
            Error::DegenerateStep { .. } => "DegenerateStep",
            Error::FlagsMissing => "FlagsMissing",
            Error::NotReal(_) => "NotReal",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::MatchingInfeasible(_) => "MatchingInfeasible",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Schema(_) => "SchemaError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
