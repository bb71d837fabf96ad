//! Graded free modules over `k[x_1..x_m]`, Koszul complexes and their duals, and
//! tensoring finitely presented modules against free complexes. Everything is realized
//! one internal degree at a time.

mod fpmodule;
mod free;
mod koszul;
mod poly;

pub use fpmodule::{
    compare_module_with_resolution, tensor_fp_module, FPGradedModule, FPModulePayload, GeneratorPayload,
    QuasiIsoReport, RelationEntry, RelationPayload,
};
pub use free::{FreeComplex, GradedFreeModule, VariableSet};
pub use koszul::{
    augmented_koszul_complex, dual_koszul_complex, graded_ext_k_r, koszul_complex, koszul_inclusion, koszul_on,
    koszul_ranks,
};
pub use poly::{MixedDegrees, Poly, PolyMatrix};

use crate::exactla::LinalgError;
use crate::gradedcomplex::GradedError;

#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error("entry ({row},{col}) of the map at position {position} is not homogeneous of the required degree")]
    Inhomogeneous { position: i64, row: usize, col: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Dimension of the degree-`t` component of `k[vars]`.
pub fn poly_component_dim(vars: &VariableSet, t: i64) -> usize {
    crate::basis::monomial_count(vars.len(), t)
}
