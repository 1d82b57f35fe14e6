//! An applicative core language with four evaluation routes: direct
//! λ-reduction, SKI bracket abstraction, categorical combinators and
//! supercombinator λ-lifting, plus simply-typed inference.

pub mod cam;
pub mod debruijn;
pub mod driver;
pub mod eval;
pub mod outcome;
pub mod ski;
pub mod superc;
pub mod syntax;
pub mod types;

pub use outcome::{EvalError, Outcome, Status};
pub use syntax::{parse, print, Term};
