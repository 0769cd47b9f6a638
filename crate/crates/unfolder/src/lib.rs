//! Fixpoint unfolding semantics for a small first-order-with-partial-application
//! lazy functional language, with applications to declarative debugging,
//! rule coverage and abstract interpretation.

pub mod apps;
pub mod engine;
pub mod error;
pub mod exec;
pub mod fact;
pub mod json;
pub mod predef;
pub mod syntax;
pub mod trace;

pub use engine::{fixpoint, CleanMode, Config, Interpretation, Run};
pub use error::{Error, Result};
pub use fact::Fact;
pub use syntax::{parse_expr, parse_program, Expr, Program};
