use std::fmt;

use super::expr::{Expr, Prim};
use super::program::{Program, Rule};

const ATOM: u8 = 10;

fn prec(p: Prim) -> u8 {
    match p {
        Prim::Then => 1,
        Prim::Or => 2,
        Prim::And => 3,
        Prim::Gt | Prim::Lt | Prim::Ge | Prim::Le | Prim::Eq => 4,
        Prim::Add | Prim::Sub => 6,
        Prim::Mul => 7,
        _ => ATOM,
    }
}

fn join(items: &[Expr], sep: &str, ctx: u8) -> String {
    items.iter().map(|x| show(x, ctx)).collect::<Vec<_>>().join(sep)
}

fn show(e: &Expr, ctx: u8) -> String {
    match e {
        Expr::Var(v) => v.clone(),
        Expr::Int(n) if *n < 0 && ctx > 0 => format!("({n})"),
        Expr::Int(n) => n.to_string(),
        Expr::Bot => "Bot".into(),
        Expr::Con(k, _, a) if k.is_empty() => format!("({})", join(a, ",", 0)),
        Expr::Con(k, _, a) | Expr::Fun(k, _, a) => {
            if a.is_empty() {
                k.clone()
            } else {
                format!("{k}({})", join(a, ",", 0))
            }
        }
        Expr::Prim(p, a) => {
            let own = prec(*p);
            let text = match p {
                Prim::Apply => {
                    let (h, rest) = a.split_first().expect("apply has a head");
                    format!("{}@[{}]", show(h, ATOM), join(rest, ",", 0))
                }
                Prim::And | Prim::Or => join(a, &format!(" {} ", p.name()), own + 1),
                Prim::Then => format!("{} |> {}", show(&a[0], own + 1), show(&a[1], own)),
                _ if p.is_comparison() => format!("{}{}{}", show(&a[0], own + 1), p.name(), show(&a[1], own + 1)),
                _ if p.is_arith() => format!("{}{}{}", show(&a[0], own), p.name(), show(&a[1], own + 1)),
                _ => format!("{}({})", p.name(), join(a, ",", 0)),
            };
            if own < ctx {
                format!("({text})")
            } else {
                text
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show(self, 0))
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Guard in listing style: conjuncts separated by commas.
pub fn show_guard(g: &Expr) -> String {
    let cs = g.conjuncts();
    if cs.is_empty() {
        return "True".into();
    }
    cs.iter().map(|c| show(c, prec(Prim::And) + 1)).collect::<Vec<_>>().join(", ")
}

pub fn show_head(name: &str, params: &[Expr]) -> String {
    if params.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", join(params, ",", 0))
    }
}

/// `head | guard = body`, omitting a `True` guard.
pub fn show_clause(name: &str, params: &[Expr], guard: &Expr, body: &Expr) -> String {
    let head = show_head(name, params);
    if guard.is_true() {
        format!("{head} = {body}")
    } else {
        format!("{head} | {} = {body}", show_guard(guard))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, show_clause(&self.name, &self.params, &self.guard, &self.body))
    }
}

/// Source text that parses back to the same program.
pub fn show_program(p: &Program) -> String {
    let mut out = String::new();
    for t in &p.declared {
        let alts: Vec<String> = p.types[t]
            .iter()
            .map(|k| {
                let n = p.ctors[k].arity;
                let mut s = k.clone();
                for i in 0..n {
                    s.push_str(&format!(" a{i}"));
                }
                s
            })
            .collect();
        out.push_str(&format!("data {t} = {}\n", alts.join(" | ")));
    }
    for r in &p.rules {
        out.push_str(&format!("{r}\n"));
    }
    if !p.cata.is_empty() {
        out.push_str("cata\n");
        for r in &p.cata {
            out.push_str(&format!("{r}\n"));
        }
    }
    out
}
