use crate::syntax::unify::resolve;
use crate::syntax::{Expr, Subst};

/// Variables introduced by renaming facts apart start with `%`.
pub fn is_fact_var(v: &str) -> bool {
    v.starts_with('%')
}

fn occurs(v: &str, e: &Expr) -> bool {
    match e {
        Expr::Var(w) => w == v,
        _ => e.children().iter().any(|c| occurs(v, c)),
    }
}

fn bind(s: &mut Subst, v: &str, e: Expr) -> bool {
    if occurs(v, &e) {
        return false;
    }
    s.insert(v.to_string(), e);
    true
}

fn go(t: &Expr, e: &Expr, s: &mut Subst, conds: &mut Vec<Expr>) -> bool {
    let t = resolve(t, s);
    let e = resolve(e, s);
    if t == e {
        return true;
    }
    match (&t, &e) {
        (Expr::Var(x), _) if is_fact_var(x) => bind(s, x, e.clone()),
        (_, Expr::Var(y)) if !is_fact_var(y) => bind(s, y, t.clone()),
        (Expr::Var(x), _) => bind(s, x, e.clone()),
        (_, Expr::Var(y)) => bind(s, y, t.clone()),
        (_, Expr::Prim(..)) => {
            conds.push(Expr::matches(t.clone(), e.clone()));
            true
        }
        (_, Expr::Bot) => false,
        (_, Expr::Fun(..)) if e.is_full_call() => false,
        (Expr::Con(k, n, a), Expr::Con(k2, n2, b)) => k == k2 && n == n2 && a.len() == b.len() && a.iter().zip(b).all(|(x, y)| go(x, y, s, conds)),
        (Expr::Int(x), Expr::Int(y)) => x == y,
        _ => false,
    }
}

/// Matches the (renamed-apart) head patterns of a fact against the
/// evaluated arguments of a call in a pseudofact. Variables on both sides
/// may be bound; arguments rooted at a predefined function produce a
/// `snd(match(t, e))` condition instead of failing.
pub fn umatch(ts: &[Expr], es: &[Expr]) -> Option<(Subst, Expr)> {
    if ts.len() != es.len() {
        return None;
    }
    let mut s = Subst::new();
    let mut conds = Vec::new();
    for (t, e) in ts.iter().zip(es) {
        if !go(t, e, &mut s, &mut conds) {
            return None;
        }
    }
    let keys: Vec<String> = s.keys().cloned().collect();
    let full: Subst = keys.into_iter().map(|k| (k.clone(), resolve(&Expr::Var(k), &s))).collect();
    let cond = Expr::and_all(conds.iter().map(|c| c.subst(&full)));
    Some((full, cond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Prim;

    fn v(s: &str) -> Expr {
        Expr::var(s)
    }

    #[test]
    fn binds_both_sides() {
        let ts = [Expr::con("Zero", vec![]), v("%1")];
        let es = [v("x"), v("y")];
        let (s, c) = umatch(&ts, &es).unwrap();
        assert_eq!(s["x"], Expr::con("Zero", vec![]));
        assert_eq!(s["%1"], v("y"));
        assert!(c.is_true());
    }

    #[test]
    fn predefined_scrutinee_becomes_condition() {
        let app = Expr::prim(Prim::Apply, vec![v("p"), v("x")]);
        let (_, c) = umatch(&[Expr::tt(), v("%1")], &[app.clone(), v("y")]).unwrap();
        assert_eq!(c, Expr::matches(Expr::tt(), app));
    }

    #[test]
    fn clash_and_bottom_fail() {
        assert!(umatch(&[Expr::nil()], &[Expr::cons(v("x"), v("y"))]).is_none());
        assert!(umatch(&[Expr::nil()], &[Expr::Bot]).is_none());
        assert!(umatch(&[Expr::nil()], &[Expr::fun("f", vec![])]).is_none());
        assert!(umatch(&[v("%1")], &[Expr::Bot]).is_some());
    }
}
