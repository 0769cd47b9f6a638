use std::sync::Arc;

use serde::Serialize;

use super::cover::Signature;
use crate::predef::EvalOpts;
use crate::syntax::Program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CleanMode {
    /// Optimized when every function is complete and every rule productive.
    Auto,
    /// Drop facts overlapped by a more specific one.
    Optimized,
    /// Amend the guards of overlapped facts instead of dropping them.
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Leave comparisons symbolic while unfolding. This also restricts the
    /// guard-based specificity test to syntactically equal guards, which
    /// reproduces listings produced by a purely symbolic engine.
    pub defer_comparisons: bool,
    pub clean: CleanMode,
    pub max_depth: usize,
    pub trace_cap: usize,
    pub hnf_fuel: usize,
    /// Steps of the probe fixpoint used by the productivity analysis.
    pub probe_steps: usize,
    /// Constructors of the program, used to refute guards by exhaustiveness.
    pub signature: Option<Arc<Signature>>,
}

impl Default for Config {
    fn default() -> Self {
        Config { defer_comparisons: false, clean: CleanMode::Auto, max_depth: 64, trace_cap: 16, hnf_fuel: 1000, probe_steps: 5, signature: None }
    }
}

impl Config {
    pub fn eval_opts(&self) -> EvalOpts {
        EvalOpts { defer_comparisons: self.defer_comparisons, loose_match: false }
    }

    /// This config with the signature of `p` filled in when missing.
    pub fn for_program(&self, p: &Program) -> Config {
        match self.signature {
            Some(_) => self.clone(),
            None => Config { signature: Some(Arc::new(Signature::of(p))), ..self.clone() },
        }
    }

    pub fn deferred() -> Self {
        Config { defer_comparisons: true, ..Config::default() }
    }
}
