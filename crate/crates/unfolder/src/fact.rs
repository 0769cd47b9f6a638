use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{show_clause, Expr};
use crate::trace::{show_trace, Trace, TraceStyle};

/// A (possibly partial) fact `name(params) | guard = body` with the traces
/// of the rule applications that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fact {
    pub name: String,
    pub params: Vec<Expr>,
    pub guard: Expr,
    pub body: Expr,
    /// Label of the rule this fact was unfolded from.
    pub origin: String,
    pub traces: Vec<Trace>,
}

/// Identity of a fact ignoring traces; compared after canonical renaming.
pub type FactKey = (String, Vec<Expr>, Expr, Expr);

const LETTERS: &[u8] = b"bcdefghijklmnopqrstuvwxyz";

/// The i-th canonical variable name: b, c, ..., z, b1, c1, ...
pub fn canonical_name(i: usize) -> String {
    let c = LETTERS[i % LETTERS.len()] as char;
    match i / LETTERS.len() {
        0 => c.to_string(),
        k => format!("{c}{k}"),
    }
}

impl Fact {
    pub fn head(&self) -> Expr {
        Expr::Fun(self.name.clone(), self.params.len(), self.params.clone())
    }

    /// Unguarded fact whose body is ⊥.
    pub fn is_bottom(&self) -> bool {
        self.guard.is_true() && self.body.is_bot()
    }

    pub fn is_bot_free(&self) -> bool {
        !self.body.contains_bot() && !self.guard.contains_bot()
    }

    pub fn key(&self) -> FactKey {
        (self.name.clone(), self.params.clone(), self.guard.clone(), self.body.clone())
    }

    pub fn vars(&self) -> Vec<String> {
        let mut vs = Vec::new();
        for p in &self.params {
            p.vars_into(&mut vs);
        }
        self.guard.vars_into(&mut vs);
        self.body.vars_into(&mut vs);
        vs
    }

    pub fn rename(&self, m: &BTreeMap<String, String>) -> Fact {
        Fact {
            name: self.name.clone(),
            params: self.params.iter().map(|p| p.rename(m)).collect(),
            guard: self.guard.rename(m),
            body: self.body.rename(m),
            origin: self.origin.clone(),
            traces: self.traces.clone(),
        }
    }

    /// Renames every variable to `%n` using a shared counter.
    pub fn rename_apart(&self, counter: &mut usize) -> Fact {
        let m = self
            .vars()
            .into_iter()
            .map(|v| {
                *counter += 1;
                (v, format!("%{counter}"))
            })
            .collect();
        self.rename(&m)
    }

    /// Canonical variant: head variables named left to right, guard
    /// conjuncts sorted, remaining variables named by first appearance.
    pub fn canonical(&self) -> Fact {
        let (params, guard, body) = canonicalize(&self.params, &self.guard, &self.body);
        Fact { name: self.name.clone(), params, guard, body, origin: self.origin.clone(), traces: self.traces.clone() }
    }

    pub fn display(&self, style: TraceStyle) -> String {
        let mut s = show_clause(&self.name, &self.params, &self.guard, &self.body);
        if let Some(t) = self.traces.first() {
            s.push(' ');
            s.push_str(&show_trace(t, style));
        }
        s
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_clause(&self.name, &self.params, &self.guard, &self.body))
    }
}

/// Canonical renaming of a clause; also used for pseudofacts during unfolding.
pub fn canonicalize(params: &[Expr], guard: &Expr, body: &Expr) -> (Vec<Expr>, Expr, Expr) {
    let mut order: Vec<String> = Vec::new();
    for p in params {
        p.vars_into(&mut order);
    }
    let head_map: BTreeMap<String, String> = order.iter().enumerate().map(|(i, v)| (v.clone(), canonical_name(i))).collect();
    let mut conjuncts = guard.conjuncts();
    let sort_key = |c: &Expr| {
        let mut m = head_map.clone();
        for v in c.vars() {
            m.entry(v).or_insert_with(|| "~".to_string());
        }
        c.rename(&m)
    };
    conjuncts.sort_by_cached_key(sort_key);
    for c in &conjuncts {
        c.vars_into(&mut order);
    }
    body.vars_into(&mut order);
    let m: BTreeMap<String, String> = order.iter().enumerate().map(|(i, v)| (v.clone(), canonical_name(i))).collect();
    let mut renamed: Vec<Expr> = Vec::new();
    for c in conjuncts {
        let c = c.rename(&m);
        if !renamed.contains(&c) {
            renamed.push(c);
        }
    }
    (params.iter().map(|p| p.rename(&m)).collect(), Expr::and_all(renamed), body.rename(&m))
}
