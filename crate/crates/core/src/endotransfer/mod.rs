//! Endomorphism algebras of finite-dimensional objects and the transfer of
//! contractibility along `Hom(M, −)` and `Hom(−, M)` on complexes in `add(M)`.

mod algebra;
mod checks;
mod functor;

pub use algebra::{endomorphism_algebra, hom_space, FinAlgebraRep, Object, Subspace};
pub use checks::{
    contractibility_transfer_check, dual_numbers_example, fully_faithful_check, noncontractibility_certificate,
    random_add_m_complex, transfer_suite, truncated_example, Certificate, ComplexKind, Evidence, FullyFaithfulReport,
    PairCheck, TransferReport, TransferSuiteReport, TrialOutcome, TruncatedFamily,
};
pub use functor::{AddM, AddMComplex, ProjectiveWitness, SModuleComplex, SplitTerm, Variance};

use thiserror::Error;

use crate::exactla::LinalgError;
use crate::gradedcomplex::GradedError;
use crate::symcoalgebra::SymError;

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("not certified in add(M): {0}")]
    NotInAddM(String),
    #[error("complex does not match the functor image of its preimage")]
    ImageMismatch,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
