//! Evaluating a ground goal with the facts of the fixpoint sequence, and
//! checking the result against small-step rewriting with the program.

use serde::Serialize;

use crate::engine::{effective_mode, run_observed, Config};
use crate::exec::{normalize, ueval, RuleBase, Strategy};
use crate::syntax::{Expr, Program};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalRun {
    /// First interpretation whose facts compute a ⊥-free value, if any.
    pub step: Option<usize>,
    /// Values computed from that interpretation, or from the last one.
    pub values: Vec<Expr>,
    /// The preferred value: ⊥-free when possible.
    pub value: Option<Expr>,
    /// The fixpoint was reached before any value was found.
    pub converged: bool,
    /// Some exploration ran out of fuel.
    pub exhausted: bool,
}

/// Free of ⊥ and of calls.
pub fn is_value(e: &Expr) -> bool {
    !e.contains_bot() && !e.contains_call()
}

/// Evaluates `goal` with `I_0, I_1, ...` until some interpretation yields a
/// value; the sequence is only computed as far as needed.
pub fn run_goal(p: &Program, goal: &Expr, max_steps: usize, cfg: &Config, fuel: usize) -> GoalRun {
    let cfg = &cfg.for_program(p);
    let mut last = ueval(&[], goal, fuel);
    let mut step = last.values.iter().any(is_value).then_some(0);
    let mut converged = false;
    if step.is_none() {
        let run = run_observed(p, max_steps, cfg, effective_mode(p, cfg), |i| {
            last = ueval(&i.sources(), goal, fuel);
            if last.values.iter().any(is_value) {
                step = Some(i.step);
            }
            step.is_none()
        });
        converged = run.converged;
    }
    let value = match step {
        Some(_) => last.values.iter().find(|v| is_value(v)).cloned(),
        None => last.best().cloned(),
    };
    GoalRun { step, value, values: last.values, converged, exhausted: last.exhausted }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    /// Normal form by small-step rewriting with the program, if reached.
    pub normal_form: Option<Expr>,
    /// The normal form is one of the values computed from the facts.
    pub agrees: bool,
}

/// Rewrites `goal` with the program and compares with `run`'s values.
pub fn verify(p: &Program, goal: &Expr, run: &GoalRun, strategy: Strategy, fuel: usize) -> Verification {
    let normal_form = normalize(&RuleBase::from_program(p), goal, strategy, fuel).map(|(v, _)| v);
    let agrees = normal_form.as_ref().is_some_and(|v| run.values.contains(v));
    Verification { normal_form, agrees }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_program};

    #[test]
    fn lazy_goal_is_computed_at_the_second_step() {
        let p = parse_program("first (x:_) = x\nones = 1 : ones\nmain = first ones").unwrap();
        let goal = parse_expr(&p, "main").unwrap();
        let r = run_goal(&p, &goal, 5, &Config::default(), 1000);
        assert_eq!(r.step, Some(2));
        assert_eq!(r.value, Some(Expr::Int(1)));
        assert!(verify(&p, &goal, &r, Strategy::Outermost, 1000).agrees);
    }

    #[test]
    fn undefined_goal_has_no_step() {
        let p = parse_program("j 5 = 6").unwrap();
        let goal = parse_expr(&p, "j(4)").unwrap();
        let r = run_goal(&p, &goal, 3, &Config::default(), 1000);
        assert_eq!(r.step, None);
        assert_eq!(r.value, Some(Expr::Bot));
        let v = verify(&p, &goal, &r, Strategy::Outermost, 1000);
        assert_eq!(v.normal_form, Some(Expr::Bot));
        assert!(v.agrees);
    }
}
