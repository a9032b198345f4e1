//! Error taxonomy shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank chain invalid: {0}")]
    RankChainInvalid(String),

    #[error("equivariant parameters must be n distinct values (min separation {min_sep:e})")]
    EquivariantParamsDegenerate { min_sep: f64 },

    #[error("bundle degree {0} > 0 is not supported; twist down to e <= 0 first")]
    BundleDegreeUnsupported(i64),

    #[error("insertion invalid: {0}")]
    InsertionInvalid(String),

    #[error("insertion parse error: {0}")]
    InsertionParse(String),

    #[error("degree support is unbounded in coordinate {coordinate} and no cap was given")]
    UnboundedSupport { coordinate: usize },

    #[error("parameter q_{index} is zero; the solver needs all q_j nonzero")]
    ZeroParameter { index: usize },

    #[error("solution set incomplete after {retries} retries: found {found} of {expected} orbits")]
    IncompleteSolutionSet {
        found: usize,
        expected: usize,
        retries: u32,
    },

    #[error("degenerate solution: within-level separation {min_sep:e} below tolerance {tol:e}")]
    DegenerateSolution { min_sep: f64, tol: f64 },

    #[error("Jacobian factor magnitude {magnitude:e} too small for genus-0 inversion")]
    JNearZero { magnitude: f64 },

    #[error(
        "coefficient at degree {degree:?} is {distance:e} away from the nearest integer; \
         raise precision or resample"
    )]
    RoundingUnsafe { degree: Vec<i64>, distance: f64 },

    #[error(
        "held-out residual {residual:e} exceeds {tolerance:e}; raise precision or resample"
    )]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("polynomial roots are degenerate (min separation {min_sep:e})")]
    RootsDegenerate { min_sep: f64 },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: usage errors 2, numeric failures 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RankChainInvalid(_)
            | Error::EquivariantParamsDegenerate { .. }
            | Error::BundleDegreeUnsupported(_)
            | Error::InsertionInvalid(_)
            | Error::InsertionParse(_)
            | Error::Usage(_)
            | Error::HypothesisNotMet(_)
            | Error::UnboundedSupport { .. } => 2,
            Error::ZeroParameter { .. }
            | Error::IncompleteSolutionSet { .. }
            | Error::DegenerateSolution { .. }
            | Error::JNearZero { .. }
            | Error::RoundingUnsafe { .. }
            | Error::ResidualTooLarge { .. }
            | Error::RootsDegenerate { .. } => 3,
        }
    }
}
