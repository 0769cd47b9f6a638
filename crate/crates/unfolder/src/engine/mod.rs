pub mod analysis;
pub mod clean;
pub mod config;
pub mod cover;
pub mod fixpoint;
pub mod interp;
pub mod order;
pub mod sat;
pub mod umatch;
pub mod unfold;

pub use analysis::{effective_mode, is_complete, is_productive, productive_rules};
pub use clean::{clean, overlap, Diagnostic};
pub use config::{CleanMode, Config};
pub use cover::Signature;
pub use fixpoint::{fixpoint, run_observed, run_with_mode, u_step, Run};
pub use interp::Interpretation;
pub use order::{term_leq, term_lt};
pub use sat::{satisfiable, Sat};
pub use umatch::umatch;
pub use unfold::{unfold_expr, unfold_rule};
