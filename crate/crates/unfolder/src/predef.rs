//! Predefined functions: arithmetic, Booleans, `@`, `▶`, `match` and `nunif`.

use crate::fact::Fact;
use crate::syntax::{Expr, Prim, Subst};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalOpts {
    /// Leave `> < >= <= ==` unevaluated (used while unfolding).
    pub defer_comparisons: bool,
    /// Run-time evaluation: decide `snd(match(p, e))` outside a `▶` even
    /// when it binds variables, and read variables left in a `nunif`
    /// pattern as wildcards.
    pub loose_match: bool,
}

/// Outcome of structural matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchOutcome {
    Matched(Subst, Expr),
    Clash,
    /// The scrutinee must be evaluated further before matching can decide.
    Stuck,
}

/// Matches a linear term pattern against an expression without evaluating it.
pub fn match_term(t: &Expr, e: &Expr) -> MatchOutcome {
    if let Expr::Var(x) = t {
        let mut s = Subst::new();
        s.insert(x.clone(), e.clone());
        return MatchOutcome::Matched(s, Expr::tt());
    }
    match e {
        Expr::Bot => MatchOutcome::Clash,
        Expr::Var(_) | Expr::Prim(..) => MatchOutcome::Stuck,
        Expr::Fun(..) if e.is_full_call() => MatchOutcome::Stuck,
        Expr::Fun(..) => MatchOutcome::Clash,
        Expr::Int(n) => match t {
            Expr::Int(m) if m == n => MatchOutcome::Matched(Subst::new(), Expr::tt()),
            _ => MatchOutcome::Clash,
        },
        Expr::Con(k2, n2, b) => match t {
            Expr::Con(k, n, a) if k == k2 && n == n2 && a.len() == b.len() => match_all(a, b),
            _ => MatchOutcome::Clash,
        },
    }
}

/// Componentwise matching; a clash anywhere dominates a stuck component.
pub fn match_all(ts: &[Expr], es: &[Expr]) -> MatchOutcome {
    let mut s = Subst::new();
    let mut stuck = false;
    for (t, e) in ts.iter().zip(es) {
        match match_term(t, e) {
            MatchOutcome::Clash => return MatchOutcome::Clash,
            MatchOutcome::Stuck => stuck = true,
            MatchOutcome::Matched(s2, _) => s.extend(s2),
        }
    }
    if stuck {
        MatchOutcome::Stuck
    } else {
        MatchOutcome::Matched(s, Expr::tt())
    }
}

fn is_plain_value(e: &Expr) -> bool {
    match e {
        Expr::Var(_) | Expr::Bot | Expr::Prim(..) => false,
        Expr::Fun(..) if e.is_full_call() => false,
        _ => e.children().iter().all(is_plain_value),
    }
}

/// Non-unifiability of two values. Variables (and ⊥) unify with anything.
pub fn nunif(a: &Expr, b: &Expr) -> bool {
    match (a, b) {
        (Expr::Var(_), _) | (_, Expr::Var(_)) | (Expr::Bot, _) | (_, Expr::Bot) => false,
        (Expr::Int(x), Expr::Int(y)) => x != y,
        (Expr::Con(k1, n1, xs), Expr::Con(k2, n2, ys)) | (Expr::Fun(k1, n1, xs), Expr::Fun(k2, n2, ys)) => {
            k1 != k2 || n1 != n2 || xs.len() != ys.len() || xs.iter().zip(ys).any(|(x, y)| nunif(x, y))
        }
        (Expr::Prim(..), _) | (_, Expr::Prim(..)) => false,
        _ => true,
    }
}

/// Three-valued `nunif` for symbolic arguments: `Some(true)` on a
/// constructor clash at non-variable positions, `Some(false)` when the
/// arguments are identical, `None` otherwise.
pub fn nunif_symbolic(a: &Expr, b: &Expr) -> Option<bool> {
    if a == b {
        return Some(false);
    }
    match (a, b) {
        (Expr::Int(x), Expr::Int(y)) => Some(x != y),
        (Expr::Int(_), Expr::Con(..)) | (Expr::Con(..), Expr::Int(_)) => Some(true),
        (Expr::Con(k1, n1, xs), Expr::Con(k2, n2, ys)) => {
            if k1 != k2 || n1 != n2 || xs.len() != ys.len() {
                return Some(true);
            }
            let mut all_false = true;
            for (x, y) in xs.iter().zip(ys) {
                match nunif_symbolic(x, y) {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => all_false = false,
                }
            }
            if all_false {
                Some(false)
            } else {
                None
            }
        }
        _ => None,
    }
}

fn int_op(p: Prim, x: i64, y: i64) -> Option<Expr> {
    Some(match p {
        Prim::Add => Expr::Int(x.checked_add(y)?),
        Prim::Sub => Expr::Int(x.checked_sub(y)?),
        Prim::Mul => Expr::Int(x.checked_mul(y)?),
        Prim::Gt => Expr::boolean(x > y),
        Prim::Lt => Expr::boolean(x < y),
        Prim::Ge => Expr::boolean(x >= y),
        Prim::Le => Expr::boolean(x <= y),
        Prim::Eq => Expr::boolean(x == y),
        _ => return None,
    })
}

/// Splices decided `snd(match(p, e))` conjuncts of `c ▶ body` into the body.
/// Returns `None` when nothing could be decided.
pub fn splice(c: &Expr, body: &Expr) -> Option<(Expr, Expr)> {
    let mut cs = c.conjuncts();
    let mut body = body.clone();
    let mut changed = false;
    let mut i = 0;
    while i < cs.len() {
        if let Some((p, e)) = as_match(&cs[i]) {
            match match_term(p, e) {
                MatchOutcome::Matched(s, b) => {
                    cs[i] = b;
                    for (j, other) in cs.iter_mut().enumerate() {
                        if j != i {
                            *other = other.subst(&s);
                        }
                    }
                    body = body.subst(&s);
                    changed = true;
                }
                MatchOutcome::Clash => return Some((Expr::ff(), Expr::Bot)),
                MatchOutcome::Stuck => {}
            }
        }
        i += 1;
    }
    changed.then(|| (Expr::and_all(cs), body))
}

/// Recognizes `snd(match(p, e))`.
pub fn as_match(c: &Expr) -> Option<(&Expr, &Expr)> {
    match c {
        Expr::Prim(Prim::Snd, a) if a.len() == 1 => match &a[0] {
            Expr::Prim(Prim::Match, m) if m.len() == 2 => Some((&m[0], &m[1])),
            _ => None,
        },
        _ => None,
    }
}

/// One rewrite step of a predefined function at the root, if any applies.
pub fn reduce_prim(p: Prim, args: &[Expr], opts: EvalOpts) -> Option<Expr> {
    match p {
        Prim::Apply => {
            let (h, rest) = args.split_first()?;
            match h {
                Expr::Bot => Some(Expr::Bot),
                Expr::Prim(Prim::Apply, inner) => Some(Expr::Prim(Prim::Apply, inner.iter().chain(rest).cloned().collect())),
                Expr::Fun(f, n, a) | Expr::Con(f, n, a) if a.len() < *n => {
                    let take = (*n - a.len()).min(rest.len());
                    let mut full = a.clone();
                    full.extend(rest[..take].iter().cloned());
                    let head = if matches!(h, Expr::Fun(..)) { Expr::Fun(f.clone(), *n, full) } else { Expr::Con(f.clone(), *n, full) };
                    if take == rest.len() {
                        Some(head)
                    } else {
                        Some(Expr::Prim(Prim::Apply, std::iter::once(head).chain(rest[take..].iter().cloned()).collect()))
                    }
                }
                Expr::Con(..) | Expr::Int(_) => Some(Expr::Bot),
                _ => None,
            }
        }
        Prim::Snd => {
            let (t, e) = as_match(&Expr::Prim(p, args.to_vec()))
                .map(|(t, e)| (t.clone(), e.clone()))?;
            match match_term(&t, &e) {
                MatchOutcome::Clash => Some(Expr::ff()),
                MatchOutcome::Matched(s, b) if s.is_empty() || opts.loose_match => Some(b),
                _ => None,
            }
        }
        Prim::Match | Prim::Fst => None,
        Prim::Nunif => {
            let (a, b) = (args.first()?, args.get(1)?);
            // at run time the remaining pattern variables are wildcards
            if is_plain_value(a) && (is_plain_value(b) || opts.loose_match && b.is_term()) {
                Some(Expr::boolean(nunif(a, b)))
            } else {
                nunif_symbolic(a, b).map(Expr::boolean)
            }
        }
        Prim::And => {
            if args.iter().any(Expr::is_false) {
                return Some(Expr::ff());
            }
            let rest: Vec<Expr> = args.iter().filter(|x| !x.is_true()).cloned().collect();
            if rest.is_empty() {
                return Some(Expr::tt());
            }
            if rest.iter().all(Expr::is_bot) {
                return Some(Expr::Bot);
            }
            let flat = Expr::and_all(rest);
            (flat != Expr::Prim(Prim::And, args.to_vec())).then_some(flat)
        }
        Prim::Or => {
            if args.iter().any(Expr::is_true) {
                return Some(Expr::tt());
            }
            let rest: Vec<Expr> = args.iter().filter(|x| !x.is_false()).cloned().collect();
            if rest.is_empty() {
                return Some(Expr::ff());
            }
            if rest.iter().all(Expr::is_bot) {
                return Some(Expr::Bot);
            }
            let flat = Expr::or_all(rest);
            (flat != Expr::Prim(Prim::Or, args.to_vec())).then_some(flat)
        }
        Prim::Not => match args.first()? {
            x if x.is_true() => Some(Expr::ff()),
            x if x.is_false() => Some(Expr::tt()),
            Expr::Bot => Some(Expr::Bot),
            _ => None,
        },
        Prim::Then => {
            let (c, e) = (args.first()?, args.get(1)?);
            if c.is_true() {
                Some(e.clone())
            } else if c.is_false() || c.is_bot() {
                Some(Expr::Bot)
            } else {
                let (c2, e2) = splice(c, e)?;
                Some(Expr::Prim(Prim::Then, vec![c2, e2]))
            }
        }
        _ => {
            let (a, b) = (args.first()?, args.get(1)?);
            if p.is_comparison() && opts.defer_comparisons {
                return None;
            }
            if a.is_bot() || b.is_bot() {
                return Some(Expr::Bot);
            }
            match (a, b) {
                (Expr::Int(x), Expr::Int(y)) => int_op(p, *x, *y),
                _ if p == Prim::Eq && is_plain_value(a) && is_plain_value(b) && a.is_ground() && b.is_ground() => Some(Expr::boolean(a == b)),
                _ => None,
            }
        }
    }
}

/// Bottom-up evaluation of predefined functions. Calls of user functions are
/// left untouched, including their arguments.
pub fn eval(e: &Expr, opts: EvalOpts) -> Expr {
    match e {
        Expr::Var(_) | Expr::Int(_) | Expr::Bot | Expr::Con(_, _, _) if e.children().is_empty() => e.clone(),
        Expr::Con(k, n, a) => Expr::Con(k.clone(), *n, a.iter().map(|x| eval(x, opts)).collect()),
        Expr::Fun(..) => e.clone(),
        Expr::Prim(Prim::Snd, _) if as_match(e).is_some() => {
            let (t, s) = as_match(e).unwrap();
            let node = Expr::matches(t.clone(), eval(s, opts));
            match reduce_prim(Prim::Snd, node.children(), opts) {
                Some(r) => eval(&r, opts),
                None => node,
            }
        }
        Expr::Prim(Prim::Match, a) => Expr::Prim(Prim::Match, vec![a[0].clone(), eval(&a[1], opts)]),
        Expr::Prim(p, a) => {
            let args: Vec<Expr> = a.iter().map(|x| eval(x, opts)).collect();
            let args = if *p == Prim::And || *p == Prim::Or {
                args.into_iter()
                    .flat_map(|x| match x {
                        Expr::Prim(q, xs) if q == *p => xs,
                        x => vec![x],
                    })
                    .collect()
            } else {
                args
            };
            match reduce_prim(*p, &args, opts) {
                Some(r) => eval(&r, opts),
                None => Expr::Prim(*p, args),
            }
        }
        _ => e.clone(),
    }
}

/// Evaluates a guard/body pair, splicing decided `snd(match(p, e))`
/// conjuncts of the guard into the other conjuncts and the body.
pub fn eval_guarded(g: &Expr, r: &Expr, opts: EvalOpts) -> (Expr, Expr) {
    let mut g = eval(g, opts);
    let mut r = eval(r, opts);
    loop {
        if g.is_false() || g.is_bot() {
            return (g, r);
        }
        match splice(&g, &r) {
            Some((g2, r2)) => {
                g = eval(&g2, opts);
                r = eval(&r2, opts);
            }
            None => return (g, r),
        }
    }
}

/// Head normal form over an interpretation. `None` when evaluation is stuck
/// on a variable; an exhausted budget yields ⊥.
pub fn hnf(facts: &[Fact], e: &Expr, fuel: &mut usize) -> Option<Expr> {
    let opts = EvalOpts { defer_comparisons: false, loose_match: true };
    let mut cur = e.clone();
    loop {
        if *fuel == 0 {
            return Some(Expr::Bot);
        }
        *fuel -= 1;
        match &cur {
            Expr::Fun(f, _, args) if cur.is_full_call() => {
                let mut unknown = false;
                let mut next = None;
                let mut counter = 0usize;
                for fact in facts.iter().filter(|x| &x.name == f) {
                    let fact = fact.rename_apart(&mut counter);
                    match match_lazy_all(facts, &fact.params, args, fuel) {
                        MatchOutcome::Matched(s, _) => {
                            let (g, b) = eval_guarded(&fact.guard.subst(&s), &fact.body.subst(&s), opts);
                            if g.is_true() {
                                next = Some(b);
                                break;
                            } else if !(g.is_false() || g.is_bot()) {
                                unknown = true;
                            }
                        }
                        MatchOutcome::Clash => {}
                        MatchOutcome::Stuck => unknown = true,
                    }
                }
                match next {
                    Some(b) => cur = b,
                    None if unknown => return None,
                    None => return Some(Expr::Bot),
                }
            }
            Expr::Prim(..) => {
                let next = eval(&cur, opts);
                if next == cur {
                    return None;
                }
                cur = next;
            }
            _ => return Some(cur),
        }
    }
}

/// Matching that evaluates demanded subterms to head normal form.
pub fn match_lazy(facts: &[Fact], t: &Expr, e: &Expr, fuel: &mut usize) -> MatchOutcome {
    if let Expr::Var(_) = t {
        return match_term(t, e);
    }
    let e = if matches!(e, Expr::Prim(..)) || e.is_full_call() {
        match hnf(facts, e, fuel) {
            Some(v) => v,
            None => return MatchOutcome::Stuck,
        }
    } else {
        e.clone()
    };
    match (t, &e) {
        (Expr::Con(k, n, a), Expr::Con(k2, n2, b)) if k == k2 && n == n2 && a.len() == b.len() => match_lazy_all(facts, a, b, fuel),
        _ => match_term(t, &e),
    }
}

pub fn match_lazy_all(facts: &[Fact], ts: &[Expr], es: &[Expr], fuel: &mut usize) -> MatchOutcome {
    let mut s = Subst::new();
    let mut stuck = false;
    for (t, e) in ts.iter().zip(es) {
        match match_lazy(facts, t, e, fuel) {
            MatchOutcome::Clash => return MatchOutcome::Clash,
            MatchOutcome::Stuck => stuck = true,
            MatchOutcome::Matched(s2, _) => s.extend(s2),
        }
    }
    if stuck {
        MatchOutcome::Stuck
    } else {
        MatchOutcome::Matched(s, Expr::tt())
    }
}
