//! Declarative debugging, rule coverage and abstract interpretation.

pub mod abstraction;
pub mod coverage;
pub mod debug;
pub mod edt;
pub mod goal;

pub use abstraction::{abstract_fixpoint, AbstractSpec};
pub use coverage::{coverage, CoverageReport};
pub use debug::{DebugSession, Status, Verdict};
pub use edt::{build_edt, Edt, EdtNode};
pub use goal::{run_goal, verify, GoalRun, Verification};
