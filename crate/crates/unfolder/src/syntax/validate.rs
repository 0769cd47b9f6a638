use serde::Serialize;

use super::expr::{Expr, Prim};
use super::program::{Program, Rule};
use super::unify::mgu;
use crate::engine::sat::{satisfiable, Sat};
use crate::engine::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NonLinear,
    FreeVariable,
    Overlap,
    Reserved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub rule: String,
    pub message: String,
}

fn reserved(e: &Expr) -> Option<&'static str> {
    match e {
        Expr::Bot => Some("Bot"),
        Expr::Prim(p @ (Prim::Match | Prim::Nunif | Prim::Snd | Prim::Fst), _) => Some(p.name()),
        _ => e.children().iter().find_map(reserved),
    }
}

fn check_rule(r: &Rule, out: &mut Vec<Violation>) {
    let mut seen: Vec<String> = Vec::new();
    for p in &r.params {
        let mut vs = Vec::new();
        collect_all_vars(p, &mut vs);
        for v in vs {
            if seen.contains(&v) {
                out.push(Violation { kind: ViolationKind::NonLinear, rule: r.label.clone(), message: format!("variable {v} repeated in the head of {}", r.name) });
            } else {
                seen.push(v);
            }
        }
    }
    for v in r.guard.vars().into_iter().chain(r.body.vars()) {
        if !seen.contains(&v) {
            out.push(Violation { kind: ViolationKind::FreeVariable, rule: r.label.clone(), message: format!("variable {v} is not bound by the head of {}", r.name) });
            seen.push(v);
        }
    }
    for part in [&r.guard, &r.body] {
        if let Some(what) = reserved(part) {
            out.push(Violation { kind: ViolationKind::Reserved, rule: r.label.clone(), message: format!("{what} may not appear in program rules") });
        }
    }
}

fn collect_all_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Var(v) => out.push(v.clone()),
        _ => e.children().iter().for_each(|c| collect_all_vars(c, out)),
    }
}

fn rename_apart(r: &Rule, suffix: &str) -> Rule {
    let mut vs = Vec::new();
    for p in &r.params {
        collect_all_vars(p, &mut vs);
    }
    r.guard.vars_into(&mut vs);
    r.body.vars_into(&mut vs);
    let m = vs.into_iter().map(|v| (v.clone(), format!("{v}{suffix}"))).collect();
    Rule {
        label: r.label.clone(),
        name: r.name.clone(),
        params: r.params.iter().map(|p| p.rename(&m)).collect(),
        guard: r.guard.rename(&m),
        body: r.body.rename(&m),
    }
}

/// Two rules of the same function overlap when their heads unify and the
/// combined guard is not provably unsatisfiable.
pub fn rules_overlap(a: &Rule, b: &Rule) -> bool {
    if a.name != b.name {
        return false;
    }
    let b = rename_apart(b, "'2");
    let Some(s) = mgu(&a.params, &b.params) else {
        return false;
    };
    let g = Expr::and_all(vec![a.guard.subst(&s), b.guard.subst(&s)]);
    satisfiable(&g, &Config::default()) != Sat::No
}

/// Checks linearity, closedness, reserved constructs and rule overlap.
pub fn validate(p: &Program) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in p.rules.iter().chain(&p.cata) {
        check_rule(r, &mut out);
    }
    for group in [&p.rules, &p.cata] {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                if rules_overlap(a, b) {
                    out.push(Violation {
                        kind: ViolationKind::Overlap,
                        rule: b.label.clone(),
                        message: format!("rules {} and {} of {} overlap", a.label, b.label, a.name),
                    });
                }
            }
        }
    }
    out
}
