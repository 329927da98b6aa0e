//! Exact contexts of finite-dimensional algebras, their noncommutative
//! tensor products, and the homological checks around them, all in exact
//! arithmetic over ℚ or a prime field.
//!
//! Vectors are rows and maps act on the right: a map is the matrix `A` with
//! `v ↦ v·A`, and "first `f`, then `g`" is `A_f·A_g`.

pub mod algebra;
pub mod context;
pub mod corpus;
pub mod dsl;
pub mod field;
pub mod homological;
pub mod linalg;
pub mod module;
pub mod nctensor;

use thiserror::Error;

/// Any failure of the library, for callers that do not care which layer
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Dsl(#[from] dsl::DslError),
    #[error(transparent)]
    Elab(#[from] dsl::ElabError),
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Module(#[from] module::ModuleError),
    #[error(transparent)]
    Homological(#[from] homological::HomologicalError),
    #[error(transparent)]
    Context(#[from] context::ContextError),
    #[error(transparent)]
    Nc(#[from] nctensor::NcError),
}
