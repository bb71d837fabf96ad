//! Exact finite-stage verification of Koszul complexes, symmetric-coalgebra
//! (co)resolutions, endomorphism-algebra transfers and the universal monomial algebra.

pub mod exactla;

pub use exactla::{Field, FieldScalar, LinalgError, SparseMatrix};
pub mod basis;
pub mod endotransfer;
pub mod gradedcomplex;
pub mod monomialalg;
pub mod polykoszul;
pub mod stability;
pub mod symcoalgebra;
