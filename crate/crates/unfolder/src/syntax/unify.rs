use std::collections::BTreeMap;

use super::expr::{Expr, Subst};

fn walk<'a>(e: &'a Expr, s: &'a Subst) -> &'a Expr {
    let mut cur = e;
    while let Expr::Var(v) = cur {
        match s.get(v) {
            Some(t) => cur = t,
            None => break,
        }
    }
    cur
}

fn occurs(v: &str, e: &Expr, s: &Subst) -> bool {
    match walk(e, s) {
        Expr::Var(w) => w == v,
        t => t.children().iter().any(|c| occurs(v, c, s)),
    }
}

/// Syntactic unification. Non-constructor nodes only unify with equal nodes
/// (after substitution), so the result is sound for terms and conservative
/// elsewhere.
pub fn unify(a: &Expr, b: &Expr, s: &mut Subst) -> bool {
    let a = walk(a, s).clone();
    let b = walk(b, s).clone();
    match (&a, &b) {
        (Expr::Var(x), Expr::Var(y)) if x == y => true,
        (Expr::Var(x), t) | (t, Expr::Var(x)) => {
            if occurs(x, t, s) {
                return false;
            }
            s.insert(x.clone(), t.clone());
            true
        }
        (Expr::Con(k1, n1, a1), Expr::Con(k2, n2, a2)) => {
            k1 == k2 && n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| unify(x, y, s))
        }
        _ => resolve(&a, s) == resolve(&b, s),
    }
}

pub fn unify_all(xs: &[Expr], ys: &[Expr], s: &mut Subst) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, s))
}

/// Applies a triangular substitution until no bound variable remains.
pub fn resolve(e: &Expr, s: &Subst) -> Expr {
    match e {
        Expr::Var(v) => match s.get(v) {
            Some(t) => resolve(t, s),
            None => e.clone(),
        },
        Expr::Int(_) | Expr::Bot => e.clone(),
        Expr::Con(k, n, a) => Expr::Con(k.clone(), *n, a.iter().map(|x| resolve(x, s)).collect()),
        Expr::Fun(k, n, a) => Expr::Fun(k.clone(), *n, a.iter().map(|x| resolve(x, s)).collect()),
        Expr::Prim(p, a) => Expr::Prim(*p, a.iter().map(|x| resolve(x, s)).collect()),
    }
}

/// Most general unifier of two tuples, fully resolved.
pub fn mgu(xs: &[Expr], ys: &[Expr]) -> Option<Subst> {
    let mut s = Subst::new();
    if !unify_all(xs, ys, &mut s) {
        return None;
    }
    let keys: Vec<String> = s.keys().cloned().collect();
    Some(keys.into_iter().map(|k| (k.clone(), resolve(&Expr::Var(k), &s))).collect())
}

/// One-way matching: finds `m` with `m(pattern) == target`, treating
/// variables of `target` as constants.
pub fn instance_of(pattern: &Expr, target: &Expr, m: &mut Subst) -> bool {
    match pattern {
        Expr::Var(v) => match m.get(v) {
            Some(t) => t == target,
            None => {
                m.insert(v.clone(), target.clone());
                true
            }
        },
        Expr::Int(_) | Expr::Bot => pattern == target,
        Expr::Con(k, n, a) => match target {
            Expr::Con(k2, n2, b) => k == k2 && n == n2 && instance_all(a, b, m),
            _ => false,
        },
        Expr::Fun(k, n, a) => match target {
            Expr::Fun(k2, n2, b) => k == k2 && n == n2 && instance_all(a, b, m),
            _ => false,
        },
        Expr::Prim(p, a) => match target {
            Expr::Prim(q, b) => p == q && instance_all(a, b, m),
            _ => false,
        },
    }
}

pub fn instance_all(ps: &[Expr], ts: &[Expr], m: &mut Subst) -> bool {
    ps.len() == ts.len() && ps.iter().zip(ts).all(|(p, t)| instance_of(p, t, m))
}

/// True when the substitution maps variables injectively to variables.
pub fn is_renaming(m: &Subst) -> bool {
    let mut seen = BTreeMap::new();
    m.iter().all(|(k, v)| match v {
        Expr::Var(w) => seen.insert(w.clone(), k.clone()).is_none(),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Expr {
        Expr::var(s)
    }

    #[test]
    fn unifies_and_detects_clash() {
        let a = Expr::cons(v("x"), Expr::nil());
        let b = Expr::cons(Expr::Int(1), v("y"));
        let s = mgu(&[a.clone()], &[b.clone()]).unwrap();
        assert_eq!(a.subst(&s), b.subst(&s));
        assert!(mgu(&[Expr::nil()], &[Expr::cons(v("x"), v("y"))]).is_none());
        assert!(mgu(&[v("x")], &[Expr::cons(v("x"), Expr::nil())]).is_none());
    }

    #[test]
    fn instance_is_one_way() {
        let general = Expr::cons(v("x"), v("y"));
        let special = Expr::cons(v("a"), Expr::nil());
        let mut m = Subst::new();
        assert!(instance_of(&general, &special, &mut m));
        assert!(!is_renaming(&m));
        assert!(!instance_of(&special, &general, &mut Subst::new()));
    }
}
