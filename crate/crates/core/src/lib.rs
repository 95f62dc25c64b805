//! Exact ADE closure computations for D-algebraic functions.

pub mod diff;
pub mod error;
pub mod groebner;
pub mod method1;
pub mod method2;
pub mod oracle;
pub mod poly;
pub mod result;
pub mod syntax;

pub use error::{Error, Result};
pub use poly::{int, rat, Monomial, MonomialOrder, Poly, Rational, Var, VarKind};
pub use result::{AdeResult, Method};
