//! Exact scalars and sparse linear algebra over Q and prime fields.

mod elim;
mod io;
mod matrix;
mod scalar;

pub use elim::{column_basis, inverse, kernel_basis, rank, solve_feasible, Rref};
pub use io::MatrixPayload;
pub use matrix::SparseMatrix;
pub use scalar::{is_prime, Field, FieldScalar, MAX_PRIME};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not an admissible prime modulus")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("entry ({row},{col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row},{col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("explicit zero stored at ({row},{col})")]
    ExplicitZero { row: usize, col: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("empty block list")]
    Empty,
}
