use std::collections::BTreeMap;

use serde::Serialize;

use super::expr::Expr;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CtorInfo {
    pub arity: usize,
    pub type_name: String,
}

/// One program rule `label: name(params) | guard = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub name: String,
    pub params: Vec<Expr>,
    pub guard: Expr,
    pub body: Expr,
}

impl Rule {
    pub fn head(&self) -> Expr {
        Expr::Fun(self.name.clone(), self.params.len(), self.params.clone())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    /// Catamorphism rules used by abstract fixpoints; never unfolded.
    pub cata: Vec<Rule>,
    pub ctors: BTreeMap<String, CtorInfo>,
    /// Constructors of each type in declaration order.
    pub types: BTreeMap<String, Vec<String>>,
    pub funs: BTreeMap<String, usize>,
    /// Types introduced by `data` lines (printed back by the pretty printer).
    pub declared: Vec<String>,
}

impl Program {
    pub fn arity(&self, f: &str) -> Option<usize> {
        self.funs.get(f).copied()
    }

    /// Function names in order of first definition.
    pub fn function_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rules {
            if !out.contains(&r.name) {
                out.push(r.name.clone());
            }
        }
        out
    }

    pub fn rules_of<'a>(&'a self, f: &'a str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.rules.iter().filter(move |r| r.name == f)
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().chain(self.cata.iter()).find(|r| r.label == label)
    }

    pub fn labels(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.label.clone()).collect()
    }

    pub fn siblings(&self, ctor: &str) -> Option<&[String]> {
        let info = self.ctors.get(ctor)?;
        self.types.get(&info.type_name).map(Vec::as_slice)
    }
}
