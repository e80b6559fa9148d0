//! Power sums over monic polynomials, special polynomials, local coefficient
//! families of the zeta function of A, and exact identity checks relating them.

mod family;
mod identities;
mod power_sum;
mod special;

use thiserror::Error;

use crate::nonarch::NonArchError;

pub use family::{zeta_family_infty, zeta_family_vadic, CoefficientFamily, FamilyExponent, LocalCoeff};
pub use identities::{euler_removed_batch, euler_removed_identity, interp_consistency, wan_deg1_twist, IdentityReport, IdentityRow};
pub use power_sum::{
    power_sum, power_sum_by_table, power_sum_cached, power_sum_enumerated, power_sum_fast, power_sum_with, PowerSumCache, PowerSumMethod,
};
pub(crate) use power_sum::sum_over_monic;
pub use special::{log_bound, special_polynomial, special_polynomial_cached, SpecialPolynomial, SpecialPolynomialSummary, STOP_WINDOW};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error(transparent)]
    NonArch(#[from] NonArchError),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
