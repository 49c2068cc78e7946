//! Exact diagram calculus for the Brauer category B(δ) and its enhancement by
//! an antisymmetric `m`-valent vertex, together with the tensor functor into
//! `(Q^m)^{⊗r}` and brute-force invariant-theory oracles.

pub mod diagram;
pub mod enhanced;
pub mod error;
pub mod expr;
pub mod homspace;
pub mod io;
pub mod linalg;
mod net;
pub mod oracle;
pub mod perm;
pub mod render;
pub mod report;
pub mod scalars;
pub mod tensor;
pub mod verify;

pub use diagram::{BrauerDiagram, BrauerMorphism, Generator};
pub use enhanced::{EnhancedDiagram, EnhancedMorphism, Rewriter, Strategy};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use report::Report;
pub use scalars::{DeltaPoly, Rational};
pub use tensor::Tensor;
