//! Three-valued satisfiability of guards by case analysis over literals.

use std::collections::BTreeSet;

use serde::Serialize;

use super::config::Config;
use super::cover::{exhaustive, useful, Signature};
use crate::predef::{as_match, eval, nunif_symbolic};
use crate::syntax::{Expr, Prim};

/// Three-valued satisfiability of a guard. `Unknown` is treated as satisfiable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sat {
    Yes,
    No,
    Unknown,
}

/// Nodes explored by the case analysis before giving up.
const BUDGET: usize = 20_000;

/// A guard in negation normal form.
#[derive(Clone, Debug)]
enum Form {
    Lit(bool, Expr),
    All(Vec<Form>),
    Any(Vec<Form>),
}

struct Solver<'a> {
    /// Variables of the fact head; all others are local to their conjunct.
    head: Option<&'a BTreeSet<String>>,
    sig: Option<&'a Signature>,
    budget: usize,
}

fn linear(e: &Expr) -> bool {
    let mut seen = Vec::new();
    fn go(e: &Expr, seen: &mut Vec<String>) -> bool {
        match e {
            Expr::Var(v) if seen.contains(v) => false,
            Expr::Var(v) => {
                seen.push(v.clone());
                true
            }
            _ => e.children().iter().all(|c| go(c, seen)),
        }
    }
    go(e, &mut seen)
}

impl Solver<'_> {
    fn is_local(&self, v: &str) -> bool {
        self.head.is_some_and(|h| !h.contains(v))
    }

    /// Local variables renamed to a placeholder.
    fn blur(&self, e: &Expr) -> Expr {
        match self.head {
            None => e.clone(),
            Some(h) => {
                let m = e.vars().into_iter().filter(|v| !h.contains(v)).map(|v| (v, "~".to_string())).collect();
                e.rename(&m)
            }
        }
    }

    /// Splits `nunif(a, b)` into independent components. `None` means the
    /// patterns clash outright; an empty list means they certainly unify.
    fn decompose(&self, a: &Expr, b: &Expr) -> Option<Vec<(Expr, Expr)>> {
        let avars = a.var_set();
        let mut out = Vec::new();
        let split = if linear(b) { self.split(a, b, &avars, &mut out) } else { Err(()) };
        match split {
            Ok(true) => Some(out),
            Ok(false) => None,
            Err(()) => match nunif_symbolic(a, b) {
                Some(true) => None,
                Some(false) => Some(Vec::new()),
                None => Some(vec![(a.clone(), b.clone())]),
            },
        }
    }

    /// `Ok(false)` on a clash; `Err` when a pattern variable is not a
    /// wildcard, so the components are not independent.
    fn split(&self, a: &Expr, b: &Expr, avars: &BTreeSet<String>, out: &mut Vec<(Expr, Expr)>) -> Result<bool, ()> {
        match (a, b) {
            _ if a == b => Ok(true),
            (_, Expr::Var(w)) if self.is_local(w) && !avars.contains(w) => Ok(true),
            (_, Expr::Var(_)) => Err(()),
            (Expr::Bot, _) | (_, Expr::Bot) => Ok(true),
            (Expr::Con(k1, _, xs), Expr::Con(k2, _, ys)) => {
                if k1 != k2 || xs.len() != ys.len() {
                    return Ok(false);
                }
                for (x, y) in xs.iter().zip(ys) {
                    if !self.split(x, y, avars, out)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Expr::Int(x), Expr::Int(y)) => Ok(x == y),
            (Expr::Int(_), Expr::Con(..)) | (Expr::Con(..), Expr::Int(_)) => Ok(false),
            _ if b.vars().is_empty() => {
                out.push((a.clone(), b.clone()));
                Ok(true)
            }
            _ => match a {
                Expr::Var(_) => {
                    out.push((a.clone(), b.clone()));
                    Ok(true)
                }
                _ => Err(()),
            },
        }
    }

    fn nnf(&self, e: &Expr, pos: bool) -> Form {
        let constant = |v: bool| if v { Form::All(Vec::new()) } else { Form::Any(Vec::new()) };
        match e {
            _ if e.is_true() => constant(pos),
            _ if e.is_false() => constant(!pos),
            Expr::Bot => constant(false),
            Expr::Prim(Prim::And, xs) => {
                let fs = xs.iter().map(|x| self.nnf(x, pos)).collect();
                if pos {
                    Form::All(fs)
                } else {
                    Form::Any(fs)
                }
            }
            Expr::Prim(Prim::Or, xs) => {
                let fs = xs.iter().map(|x| self.nnf(x, pos)).collect();
                if pos {
                    Form::Any(fs)
                } else {
                    Form::All(fs)
                }
            }
            Expr::Prim(Prim::Not, xs) if xs.len() == 1 => self.nnf(&xs[0], !pos),
            Expr::Prim(Prim::Nunif, xs) if xs.len() == 2 => match self.decompose(&xs[0], &xs[1]) {
                None => constant(pos),
                Some(parts) => {
                    let lits = parts.into_iter().map(|(a, b)| Form::Lit(pos, Expr::prim(Prim::Nunif, vec![a, b]))).collect();
                    if pos {
                        Form::Any(lits)
                    } else {
                        Form::All(lits)
                    }
                }
            },
            _ => Form::Lit(pos, e.clone()),
        }
    }

    /// Patterns `t` of the literals `nunif(x, t)` with the given sign.
    fn patterns<'b>(&self, lits: &'b [(bool, Expr)], x: &str, sign: bool) -> impl Iterator<Item = &'b Expr> + 'b {
        let x = x.to_string();
        lits.iter().filter_map(move |(s, e)| match e {
            Expr::Prim(Prim::Nunif, a) if *s == sign && a[0] == Expr::Var(x.clone()) => Some(&a[1]),
            _ => None,
        })
    }

    /// Whether the literals cannot hold together.
    fn conflict(&self, lits: &[(bool, Expr)]) -> bool {
        let (sign, e) = lits.last().expect("called after a push");
        let be = self.blur(e);
        if lits[..lits.len() - 1].iter().any(|(s, f)| s != sign && self.blur(f) == be) {
            return true;
        }
        if *sign {
            if let Some((p1, s1)) = as_match(e) {
                let clash = lits.iter().any(|(s, f)| *s && as_match(f).is_some_and(|(p2, s2)| s1 == s2 && nunif_symbolic(p1, p2) == Some(true)));
                if clash {
                    return true;
                }
            }
        }
        let (Some(sig), Expr::Prim(Prim::Nunif, a)) = (self.sig, e) else {
            return false;
        };
        let Expr::Var(x) = &a[0] else {
            return false;
        };
        // x differs from every positive pattern; only wildcard patterns can be used as rows
        let rows: Vec<Vec<Expr>> = self.patterns(lits, x, true).filter(|t| t.vars().iter().all(|v| self.is_local(v)) && linear(t)).map(|t| vec![t.clone()]).collect();
        if rows.is_empty() {
            return false;
        }
        exhaustive(sig, &rows, 1) || self.patterns(lits, x, false).any(|n| !useful(sig, &rows, std::slice::from_ref(n)))
    }

    /// `Some(true)`: a consistent choice of literals exists; `Some(false)`: none does.
    fn search<'f>(&mut self, goals: &mut Vec<&'f Form>, lits: &mut Vec<(bool, Expr)>) -> Option<bool> {
        if self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        let Some(g) = goals.pop() else {
            return Some(true);
        };
        let r = match g {
            Form::Lit(s, e) => {
                lits.push((*s, e.clone()));
                let r = if self.conflict(lits) { Some(false) } else { self.search(goals, lits) };
                lits.pop();
                r
            }
            Form::All(fs) => {
                let n = goals.len();
                goals.extend(fs.iter().rev());
                let r = self.search(goals, lits);
                goals.truncate(n);
                r
            }
            Form::Any(fs) => {
                let mut r = Some(false);
                for f in fs {
                    goals.push(f);
                    let sub = self.search(goals, lits);
                    goals.pop();
                    match sub {
                        Some(true) => {
                            r = Some(true);
                            break;
                        }
                        None => r = None,
                        Some(false) => {}
                    }
                }
                r
            }
        };
        goals.push(g);
        r
    }
}

fn decide(g: &Expr, head: Option<&BTreeSet<String>>, cfg: &Config) -> Sat {
    let e = eval(g, cfg.eval_opts());
    if e.is_true() {
        return Sat::Yes;
    }
    if e.is_false() || e.is_bot() {
        return Sat::No;
    }
    let mut solver = Solver { head, sig: cfg.signature.as_deref(), budget: BUDGET };
    let form = solver.nnf(&e, true);
    match solver.search(&mut vec![&form], &mut Vec::new()) {
        Some(false) => Sat::No,
        _ => Sat::Unknown,
    }
}

/// Satisfiability of a guard whose variables are all universally bound.
pub fn satisfiable(g: &Expr, cfg: &Config) -> Sat {
    decide(g, None, cfg)
}

/// Satisfiability of a fact guard: variables outside `head` are local to the
/// conjunct they occur in, so inside `nunif` patterns they match anything.
pub fn satisfiable_fact(head: &BTreeSet<String>, g: &Expr, cfg: &Config) -> Sat {
    decide(g, Some(head), cfg)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::syntax::parse_program;

    fn app() -> Expr {
        Expr::prim(Prim::Apply, vec![Expr::var("b"), Expr::var("c")])
    }

    fn v(s: &str) -> Expr {
        Expr::var(s)
    }

    fn nunif(a: Expr, b: Expr) -> Expr {
        Expr::prim(Prim::Nunif, vec![a, b])
    }

    fn with_sig() -> Config {
        Config { signature: Some(Arc::new(Signature::of(&parse_program("").unwrap()))), ..Config::default() }
    }

    fn head(vs: &[&str]) -> BTreeSet<String> {
        vs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ground_guards_decide() {
        let gt = Expr::prim(Prim::Gt, vec![Expr::Int(1), Expr::Int(2)]);
        assert_eq!(satisfiable(&Expr::tt(), &Config::default()), Sat::Yes);
        assert_eq!(satisfiable(&gt, &Config::default()), Sat::No);
        assert_eq!(satisfiable(&gt, &Config::deferred()), Sat::Unknown);
    }

    #[test]
    fn complementary_matches_are_unsatisfiable() {
        let cfg = Config::default();
        let g = Expr::and_all(vec![Expr::matches(Expr::tt(), app()), Expr::matches(Expr::ff(), app())]);
        assert_eq!(satisfiable(&g, &cfg), Sat::No);
        assert_eq!(satisfiable(&Expr::matches(Expr::tt(), app()), &cfg), Sat::Unknown);
    }

    #[test]
    fn negated_conjunct_refutes() {
        let c = Expr::matches(Expr::tt(), app());
        let g = Expr::and_all(vec![c.clone(), Expr::prim(Prim::Not, vec![c])]);
        assert_eq!(satisfiable(&g, &Config::default()), Sat::No);
    }

    #[test]
    fn amended_guard_with_identical_patterns() {
        let d = Expr::or_all(vec![nunif(v("b"), v("b")), Expr::prim(Prim::Not, vec![Expr::tt()])]);
        assert_eq!(satisfiable(&d, &Config::default()), Sat::No);
    }

    #[test]
    fn exhaustive_exclusions_are_unsatisfiable() {
        let cfg = with_sig();
        let h = head(&["b", "c"]);
        let g = Expr::and_all(vec![nunif(v("c"), Expr::nil()), nunif(v("c"), Expr::cons(v("d"), v("e")))]);
        assert_eq!(satisfiable_fact(&h, &g, &cfg), Sat::No);
        // without a signature nothing is known about the constructors of lists
        assert_eq!(satisfiable_fact(&h, &g, &Config::default()), Sat::Unknown);
        // head variables inside a pattern are not wildcards
        assert_eq!(satisfiable(&g, &cfg), Sat::Unknown);
        let one = nunif(v("c"), Expr::nil());
        assert_eq!(satisfiable_fact(&h, &one, &cfg), Sat::Unknown);
    }

    #[test]
    fn a_match_inside_an_exclusion_is_unsatisfiable() {
        let cfg = with_sig();
        let h = head(&["b", "c"]);
        let within = Expr::prim(Prim::Not, vec![nunif(v("c"), Expr::cons(v("d"), Expr::nil()))]);
        let g = Expr::and_all(vec![within, nunif(v("c"), Expr::cons(v("e"), v("f")))]);
        assert_eq!(satisfiable_fact(&h, &g, &cfg), Sat::No);
    }

    #[test]
    fn tuples_split_into_components() {
        let cfg = with_sig();
        let h = head(&["b", "c", "d"]);
        let pat = |t: Expr| nunif(Expr::tuple(vec![v("b"), v("c")]), Expr::tuple(vec![v("b"), t]));
        let g = Expr::and_all(vec![pat(Expr::nil()), pat(Expr::cons(v("e"), v("f")))]);
        assert_eq!(satisfiable_fact(&h, &g, &cfg), Sat::No);
    }
}
