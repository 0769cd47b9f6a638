//! Constructor signatures and pattern-matrix usefulness.

use std::collections::BTreeMap;

use crate::syntax::{Expr, Program};

/// For each constructor, every constructor of its type with its arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    siblings: BTreeMap<String, Vec<(String, usize)>>,
}

impl Signature {
    pub fn of(p: &Program) -> Self {
        let mut siblings = BTreeMap::new();
        for (k, info) in &p.ctors {
            if let Some(ks) = p.types.get(&info.type_name) {
                let sig = ks.iter().filter_map(|s| p.ctors.get(s).map(|i| (s.clone(), i.arity))).collect();
                siblings.insert(k.clone(), sig);
            }
        }
        Signature { siblings }
    }

    /// Constructors of `k`'s type; tuples form a type of their own.
    pub fn siblings(&self, k: &str, arity: usize) -> Option<Vec<(String, usize)>> {
        if k.is_empty() {
            return Some(vec![(String::new(), arity)]);
        }
        self.siblings.get(k).cloned()
    }
}

fn wild() -> Expr {
    Expr::var("_")
}

/// Rows of `rows` whose first column admits constructor `k`, specialized.
fn specialize(rows: &[Vec<Expr>], k: &str, n: usize) -> Vec<Vec<Expr>> {
    rows.iter()
        .filter_map(|r| match &r[0] {
            Expr::Con(h, _, args) if h == k => Some(args.iter().chain(&r[1..]).cloned().collect()),
            Expr::Var(_) => Some(std::iter::repeat_n(wild(), n).chain(r[1..].iter().cloned()).collect()),
            _ => None,
        })
        .collect()
}

/// Whether some value matching the pattern vector `q` matches no row of
/// `rows`. Variables are wildcards; integers form an infinite type.
pub fn useful(sig: &Signature, rows: &[Vec<Expr>], q: &[Expr]) -> bool {
    let Some((first, rest)) = q.split_first() else {
        return rows.is_empty();
    };
    match first {
        Expr::Con(k, _, args) => {
            let mut spec_q = args.clone();
            spec_q.extend(rest.iter().cloned());
            useful(sig, &specialize(rows, k, args.len()), &spec_q)
        }
        Expr::Int(n) => {
            let spec: Vec<Vec<Expr>> = rows
                .iter()
                .filter(|r| matches!(&r[0], Expr::Var(_)) || r[0] == Expr::Int(*n))
                .map(|r| r[1..].to_vec())
                .collect();
            useful(sig, &spec, rest)
        }
        _ => {
            let mut heads: Vec<(String, usize)> = Vec::new();
            let mut has_int = false;
            for r in rows {
                match &r[0] {
                    Expr::Con(k, _, a) if !heads.iter().any(|(h, _)| h == k) => heads.push((k.clone(), a.len())),
                    Expr::Int(_) => has_int = true,
                    _ => {}
                }
            }
            let complete = match heads.first() {
                Some((k, n)) if !has_int => sig.siblings(k, *n).filter(|s| s.iter().all(|(c, _)| heads.iter().any(|(h, _)| h == c))),
                _ => None,
            };
            match complete {
                Some(ks) => ks.iter().any(|(k, n)| {
                    let mut spec_q: Vec<Expr> = std::iter::repeat_n(wild(), *n).collect();
                    spec_q.extend(rest.iter().cloned());
                    useful(sig, &specialize(rows, k, *n), &spec_q)
                }),
                None => {
                    let default: Vec<Vec<Expr>> = rows.iter().filter(|r| matches!(r[0], Expr::Var(_))).map(|r| r[1..].to_vec()).collect();
                    useful(sig, &default, rest)
                }
            }
        }
    }
}

/// The rows match every tuple of values of the given width.
pub fn exhaustive(sig: &Signature, rows: &[Vec<Expr>], width: usize) -> bool {
    !useful(sig, rows, &vec![wild(); width])
}
