//! The presentation language.
//!
//! ```text
//! field Q
//! algebra A = structconst { dim 2; basis 1 x; x * x = zero; 1 * 1 = 1; 1 * x = x; x * 1 = x; unit = 1 }
//! algebra K = ground
//! morphism aug : A -> K = { 1 = 1 }
//! algebra Q = quiver { vertices 1 2; arrow a : 1 -> 2; arrow b : 2 -> 1; relation a*b }
//! ```
//!
//! Declarations are `algebra`, `morphism`, `bimodule`, `element` and
//! `context`; each name must be new and may only refer to earlier names.
//! Linear combinations are sums of `[coefficient] basis-element` with
//! integer or `p/q` coefficients, and `zero` for the empty sum. A basis
//! element is a label (an identifier or a quoted string) or, failing a label
//! match, a 0-based index. In a term a number directly followed by a basis
//! element is its coefficient, so `2 1` is twice the element `1`. In quiver
//! relations `a*b` is the path "first `a`, then `b`".
//!
//! Algebra expressions: `structconst { … }`, `quiver { … }`, `ground`,
//! `truncated(x, n)`, `matrixalg(A, n)`, `triangular(S, T, M)`,
//! `product(A, B)`, `tensor(A, B)`, `opposite(A)`, `sub(A) { v; … }`.
//! Morphisms: `{ b = image; … }`, `identity`, `inclusion` (of a `sub`) and
//! `then(f, g)`. Bimodules: `regular`, `zero`, `restrict(G, f, g)` and
//! `actions { dim n; basis …; left s * m = …; right m * t = … }`. Contexts:
//! `exact(l, m, M, e)`, `trivial(R)`, `extension(l)`, `milnor(j1, j2)`,
//! `morita(A, C, X, Y) { f x * y = …; g y * x = … }` and
//! `pure(l, m) { x …; y … }`.

pub mod ast;
pub mod elaborate;
mod lexer;
mod parser;
pub mod printer;
pub mod quiver;

use thiserror::Error;

pub use ast::PresentationFile;
pub use elaborate::{
    elaborate, ContextKind, ContextValue, ElabError, ElabErrorKind, ElabOptions, Environment, Value, DEFAULT_MAX_DIM,
};
pub use parser::parse;
pub use printer::{print, print_algebra};
pub use quiver::{elaborate_quiver, QuiverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: expected {}", expected.join(" or "))]
    Syntax { line: usize, col: usize, expected: Vec<String> },
    #[error("duplicate name `{name}` at {line}:{col}")]
    DuplicateName { name: String, line: usize, col: usize },
    #[error("unresolved reference `{name}` at {line}:{col}")]
    UnresolvedReference { name: String, line: usize, col: usize },
}

impl DslError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Syntax { line, col, .. }
            | DslError::DuplicateName { line, col, .. }
            | DslError::UnresolvedReference { line, col, .. } => (*line, *col),
        }
    }
}
