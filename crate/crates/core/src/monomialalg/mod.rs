//! The monomial algebra `k⟨x₀, x₁, …⟩/(x_n x_{n+1})`, truncated by word length, and the
//! one-generator free complex `S → S → S → …` with differentials `·x_n`.

mod complex;
mod words;

pub use complex::{
    augmentation_certificate, right_mult_operator, specialize, verify_exactness, AugmentationCertificate,
    ExactnessCell, ExactnessReport, Specialization,
};
pub use words::{count_basis_words, count_basis_words_brute, normal_form, TruncatedAlgebra, Word};

use thiserror::Error;

use crate::exactla::LinalgError;
use crate::gradedcomplex::GradedError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("{0}")]
    OutOfRange(String),
    #[error("z_{n} z_{} ≠ 0 in the target algebra", n + 1)]
    RelationViolated { n: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
