pub mod expr;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod program;
pub mod unify;
pub mod validate;

pub use expr::{Expr, Prim, Subst};
pub use parser::{parse_clause, parse_expr, parse_program, Clause};
pub use pretty::{show_clause, show_guard, show_head, show_program};
pub use program::{CtorInfo, Program, Rule};
pub use validate::{validate, Violation, ViolationKind};
