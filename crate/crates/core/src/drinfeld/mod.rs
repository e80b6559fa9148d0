//! Drinfeld modules of rank 1 and 2 over A = F_r[T]: the skew ring F{tau},
//! reduction at primes, Frobenius characteristic data and the Dirichlet
//! coefficients of the Euler product.

mod charpoly;
mod linalg;
mod lseries;
mod module;
mod skew;

use thiserror::Error;

use crate::ffpoly::FfError;
use crate::nonarch::NonArchError;

pub use charpoly::{frobenius_charpoly, FrobCharpoly, FrobCharpolySummary};
pub use lseries::{euler_product_by_convolution, local_factors, lseries_coeffs, lseries_family, BadPrimePolicy, DirichletCoefficients, LocalFactor};
pub use module::{phi_of, reduce_mod, DrinfeldModuleSpec};
pub use skew::{skew_mul, CoeffRing, SkewPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrinfeldError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("rank {0} is not supported")]
    RankUnsupported(usize),
    #[error("{0} is not a monic prime")]
    NotIrreducible(String),
    #[error("bad reduction at {prime}")]
    BadReduction { prime: String },
    #[error("bad prime {prime} has no Euler factor")]
    BadPrimeUnhandled { prime: String },
    #[error("no Frobenius relation found at {prime}")]
    NoSolution { prime: String },
    #[error("{count} Frobenius relations found at {prime}")]
    AmbiguousSolution { prime: String, count: usize },
    #[error("exponent and place do not match")]
    PlaceMismatch,
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    NonArch(#[from] NonArchError),
}
