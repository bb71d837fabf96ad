//! Bigraded complexes of finite-dimensional spaces: validation, cohomology, tensor and Hom
//! complexes, duals, chain maps and contracting homotopies.

mod chainmap;
mod cohomology;
mod complex;
mod homotopy;
mod ops;

pub use chainmap::ChainMap;
pub use cohomology::{cohomology, CohomologyEntry, CohomologyTable};
pub use complex::{
    Bidegree, BigradedComplex, BigradedTerm, ComplexBuilder, ComplexPayload, DifferentialPayload, OpenEdges, Slice,
    SlicePayload, Window,
};
pub use homotopy::{commutant_basis, null_homotopy, null_homotopy_spanned, Equivariance, Homotopy};
pub use ops::{
    attach_unit, collapse_internal, direct_sum, dualize, equal_up_to_signs, hom_complex, reflect_internal, shift,
    tensor,
};

use thiserror::Error;

use crate::exactla::{Field, LinalgError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("d∘d is nonzero starting at position {position}, internal degree {degree}")]
    NonzeroComposition { position: i64, degree: i64 },
    #[error("differential at ({position}, {degree}) has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        position: i64,
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("bidegree ({position}, {degree}) lies outside the window")]
    OutsideWindow { position: i64, degree: i64 },
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("complex is not bounded in position within its window")]
    Unbounded,
    #[error("chain map does not commute with differentials at ({position}, {degree})")]
    NotChainMap { position: i64, degree: i64 },
    #[error("invalid complex: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
