use thiserror::Error;

/// Errors shared across the exact kernel, the chart builders and the numeric
/// engine. Configuration errors map to CLI exit code 2, sampling errors to 3,
/// everything else to 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable registries do not match")]
    RegistryMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("substitution makes a denominator identically zero")]
    SubstitutionPole,
    #[error("denominator magnitude {mag:.3e} below pole guard {guard:.3e}")]
    NearPole { mag: f64, guard: f64 },
    #[error("cannot contract a 0-form")]
    ZeroFormContraction,
    #[error("d log of the zero rational function")]
    ZeroDlog,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("near-singular fiber: singular value gap ratio {gap:.3e} below threshold")]
    NearSingularFiber { gap: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code partition used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::RegistryMismatch
            | Error::UnknownVariable(_)
            | Error::Unsupported(_) => 2,
            Error::Sampling(_) => 3,
            _ => 1,
        }
    }
}
