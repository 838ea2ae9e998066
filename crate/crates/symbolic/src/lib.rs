//! Exact computer-algebra kernel for small-signal circuit identities.
//!
//! Multivariate polynomials over arbitrary-precision rationals, rational
//! functions with cross-multiplication equality, simultaneous substitution,
//! limits at zero and infinity, and an exact Cramer solve for the 2x2 and
//! 3x3 nodal systems of single-transistor stages.

pub mod error;
pub mod expr;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod sym;

pub use error::SymbolicError;
pub use expr::{Expr, Node, Pole};
pub use linalg::{cramer_solve, determinant};
pub use poly::{Monomial, Poly};
pub use ratfn::{derived_rules, Limit, RatFn, Shape};
pub use sym::{Sym, NSYMS};
