//! The symmetric coalgebra `C = Sym(W)`: structure maps, the (co)resolutions of the
//! trivial (co/contra)module, the complexes built from them by `Ψ`/`Φ`, and their
//! restrictions to the subcoalgebras `C_B = Sym(W_B)`.

mod components;
mod families;
mod labelled;

pub use components::{comult_component, wedge_component, Coproduct, ExtBasis, SymBasis};
pub use families::{
    acyclic_comodule_complex, acyclic_contramodule_complex, augmented_contramodule_resolution, augmented_coresolution,
    cohom_quotient, comodule_coresolution, contramodule_resolution, cotensor_subcomplex,
};
pub use labelled::{
    Carrier, Direction, GradedSpace, KernelPayload, LabelledComplex, LabelledPayload, TermPayload, TruncatedComplex,
    TruncatedTerm,
};

use crate::exactla::LinalgError;
use crate::gradedcomplex::GradedError;

#[derive(Debug, thiserror::Error)]
pub enum SymError {
    #[error("expected {expected:?} terms, found {found:?}")]
    WrongCarrier { expected: Carrier, found: Carrier },
    #[error("stage {m} exceeds dim W = {a}")]
    StageTooLarge { m: usize, a: usize },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
