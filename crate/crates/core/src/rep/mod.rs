//! Tensor products of Verma modules: PBW bases, weight spaces, Casimir and
//! Gaudin operators, and the polynomial model for sl2 and sl3.

mod pbw;
mod poly_model;
mod space;

pub use pbw::{colors_of, commutator, lowering_generators, Element, FactorAction, LinComb, Mono};
pub use poly_model::{all_elements, polynomial_model_matrices, DiffOp, PolyModel};
pub use space::{enumerate_basis, straighten, PbwIndex, TensorVector, WeightSpace};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error("operation needs a type-A Cartan matrix")]
    NotTypeA,
    #[error("vector does not lie in the expected weight space")]
    WrongSubspace,
    #[error("invalid factor pair ({0},{1})")]
    FactorIndex(usize, usize),
    #[error("Cartan matrix is singular")]
    SingularCartan,
    #[error("shape: {0}")]
    Shape(String),
    #[error("marked points z_{0} and z_{1} coincide")]
    CoincidentPoints(usize, usize),
    #[error("polynomial model exists for rank 1 and 2 only, got {0}")]
    RankTooLarge(usize),
}
