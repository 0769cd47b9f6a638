use std::collections::{BTreeMap, BTreeSet};

/// Built-in operators. `Apply` is explicit higher-order application `h@[args]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    Apply,
    Match,
    Snd,
    Fst,
    Nunif,
    And,
    Or,
    Not,
    Then,
    Add,
    Sub,
    Mul,
    Gt,
    Lt,
    Ge,
    Le,
    Eq,
}

impl Prim {
    pub fn is_arith(self) -> bool {
        matches!(self, Prim::Add | Prim::Sub | Prim::Mul)
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, Prim::Gt | Prim::Lt | Prim::Ge | Prim::Le | Prim::Eq)
    }

    pub fn infix_symbol(self) -> Option<&'static str> {
        Some(match self {
            Prim::Add => "+",
            Prim::Sub => "-",
            Prim::Mul => "*",
            Prim::Gt => ">",
            Prim::Lt => "<",
            Prim::Ge => ">=",
            Prim::Le => "<=",
            Prim::Eq => "==",
            Prim::And => "&&",
            Prim::Or => "||",
            Prim::Then => "|>",
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Prim::Apply => "@",
            Prim::Match => "match",
            Prim::Snd => "snd",
            Prim::Fst => "fst",
            Prim::Nunif => "nunif",
            Prim::Not => "not",
            other => other.infix_symbol().unwrap_or("?"),
        }
    }

    pub fn from_name(s: &str) -> Option<Prim> {
        Some(match s {
            "match" => Prim::Match,
            "snd" => Prim::Snd,
            "fst" => Prim::Fst,
            "nunif" => Prim::Nunif,
            "not" => Prim::Not,
            _ => return None,
        })
    }
}

/// Expressions of the kernel language.
///
/// `Con` and `Fun` carry the declared arity of their symbol next to the
/// arguments actually supplied, so partial applications are self-describing.
/// Tuples are constructors with the empty name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(String),
    Int(i64),
    Con(String, usize, Vec<Expr>),
    Fun(String, usize, Vec<Expr>),
    Prim(Prim, Vec<Expr>),
    Bot,
}

pub type Subst = BTreeMap<String, Expr>;

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn con(name: impl Into<String>, args: Vec<Expr>) -> Expr {
        let n = args.len();
        Expr::Con(name.into(), n, args)
    }

    pub fn fun(name: impl Into<String>, args: Vec<Expr>) -> Expr {
        let n = args.len();
        Expr::Fun(name.into(), n, args)
    }

    pub fn prim(p: Prim, args: Vec<Expr>) -> Expr {
        Expr::Prim(p, args)
    }

    pub fn tt() -> Expr {
        Expr::Con("True".into(), 0, vec![])
    }

    pub fn ff() -> Expr {
        Expr::Con("False".into(), 0, vec![])
    }

    pub fn boolean(b: bool) -> Expr {
        if b {
            Expr::tt()
        } else {
            Expr::ff()
        }
    }

    pub fn tuple(items: Vec<Expr>) -> Expr {
        Expr::con("", items)
    }

    pub fn nil() -> Expr {
        Expr::Con("Nil".into(), 0, vec![])
    }

    pub fn cons(h: Expr, t: Expr) -> Expr {
        Expr::Con("Cons".into(), 2, vec![h, t])
    }

    pub fn list(items: Vec<Expr>) -> Expr {
        items.into_iter().rev().fold(Expr::nil(), |acc, x| Expr::cons(x, acc))
    }

    /// `snd(match(p, e))`
    pub fn matches(p: Expr, e: Expr) -> Expr {
        Expr::Prim(Prim::Snd, vec![Expr::Prim(Prim::Match, vec![p, e])])
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Expr::Con(k, 0, a) if k == "True" && a.is_empty())
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Expr::Con(k, 0, a) if k == "False" && a.is_empty())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Expr::Bot)
    }

    /// Full application of a user function.
    pub fn is_full_call(&self) -> bool {
        matches!(self, Expr::Fun(_, n, a) if a.len() == *n)
    }

    /// Constructor or function applied to fewer arguments than its arity.
    pub fn is_partial(&self) -> bool {
        match self {
            Expr::Con(_, n, a) | Expr::Fun(_, n, a) => a.len() < *n,
            _ => false,
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::Con(_, _, a) | Expr::Fun(_, _, a) | Expr::Prim(_, a) => a,
            _ => &[],
        }
    }

    pub fn children_mut(&mut self) -> &mut [Expr] {
        match self {
            Expr::Con(_, _, a) | Expr::Fun(_, _, a) | Expr::Prim(_, a) => a,
            _ => &mut [],
        }
    }

    /// Built only from variables, integers and full constructor applications.
    pub fn is_term(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Int(_) => true,
            Expr::Con(_, n, a) => a.len() == *n && a.iter().all(Expr::is_term),
            _ => false,
        }
    }

    /// A term that also admits ⊥ and partial applications (listing bodies).
    pub fn is_value(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Int(_) | Expr::Bot => true,
            Expr::Con(_, _, a) => a.iter().all(Expr::is_value),
            Expr::Fun(_, n, a) => a.len() < *n && a.iter().all(Expr::is_value),
            Expr::Prim(..) => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Expr::Var(_) => false,
            _ => self.children().iter().all(Expr::is_ground),
        }
    }

    pub fn contains_bot(&self) -> bool {
        match self {
            Expr::Bot => true,
            _ => self.children().iter().any(Expr::contains_bot),
        }
    }

    pub fn contains_call(&self) -> bool {
        if self.is_full_call() {
            return true;
        }
        self.children().iter().any(Expr::contains_call)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Expr::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(Expr::depth).max().unwrap_or(0)
    }

    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            _ => self.children().iter().for_each(|c| c.vars_into(out)),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.vars_into(&mut out);
        out
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.vars().into_iter().collect()
    }

    pub fn subst(&self, s: &Subst) -> Expr {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Expr::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Expr::Int(_) | Expr::Bot => self.clone(),
            Expr::Con(k, n, a) => Expr::Con(k.clone(), *n, a.iter().map(|x| x.subst(s)).collect()),
            Expr::Fun(k, n, a) => Expr::Fun(k.clone(), *n, a.iter().map(|x| x.subst(s)).collect()),
            Expr::Prim(p, a) => Expr::Prim(*p, a.iter().map(|x| x.subst(s)).collect()),
        }
    }

    pub fn rename(&self, m: &BTreeMap<String, String>) -> Expr {
        match self {
            Expr::Var(v) => Expr::Var(m.get(v).cloned().unwrap_or_else(|| v.clone())),
            Expr::Int(_) | Expr::Bot => self.clone(),
            Expr::Con(k, n, a) => Expr::Con(k.clone(), *n, a.iter().map(|x| x.rename(m)).collect()),
            Expr::Fun(k, n, a) => Expr::Fun(k.clone(), *n, a.iter().map(|x| x.rename(m)).collect()),
            Expr::Prim(p, a) => Expr::Prim(*p, a.iter().map(|x| x.rename(m)).collect()),
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Expr> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children().get(i.checked_sub(1)?)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Expr> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children_mut().get_mut(i.checked_sub(1)?)?.at_mut(rest),
        }
    }

    pub fn replace_at(&self, path: &[usize], new: Expr) -> Expr {
        let mut out = self.clone();
        if let Some(slot) = out.at_mut(path) {
            *slot = new;
        }
        out
    }

    /// Pre-order (leftmost-outermost) positions of full function calls.
    pub fn call_positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_calls(self, &mut path, &mut out);
        out
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_all(self, &mut path, &mut out);
        out
    }

    /// Flattened list of conjuncts; `True` yields the empty list.
    pub fn conjuncts(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        push_conjuncts(self, &mut out);
        out
    }

    /// n-ary conjunction, flattening nested ones and dropping `True`.
    pub fn and_all(items: impl IntoIterator<Item = Expr>) -> Expr {
        let mut flat = Vec::new();
        for it in items {
            push_conjuncts(&it, &mut flat);
        }
        match flat.len() {
            0 => Expr::tt(),
            1 => flat.pop().unwrap(),
            _ => Expr::Prim(Prim::And, flat),
        }
    }

    pub fn or_all(items: Vec<Expr>) -> Expr {
        let mut flat = Vec::new();
        for it in items {
            match it {
                Expr::Prim(Prim::Or, xs) => flat.extend(xs),
                x if x.is_false() => {}
                x => flat.push(x),
            }
        }
        match flat.len() {
            0 => Expr::ff(),
            1 => flat.pop().unwrap(),
            _ => Expr::Prim(Prim::Or, flat),
        }
    }
}

fn push_conjuncts(e: &Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Prim(Prim::And, xs) => xs.iter().for_each(|x| push_conjuncts(x, out)),
        x if x.is_true() => {}
        x => out.push(x.clone()),
    }
}

fn collect_calls(e: &Expr, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if e.is_full_call() {
        out.push(path.clone());
    }
    // patterns inside match(p, _) and nunif are never reduced
    let skip_first = matches!(e, Expr::Prim(Prim::Match, _));
    for (i, c) in e.children().iter().enumerate() {
        if skip_first && i == 0 {
            continue;
        }
        path.push(i + 1);
        collect_calls(c, path, out);
        path.pop();
    }
}

fn collect_all(e: &Expr, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    let skip_first = matches!(e, Expr::Prim(Prim::Match, _));
    for (i, c) in e.children().iter().enumerate() {
        if skip_first && i == 0 {
            continue;
        }
        path.push(i + 1);
        collect_all(c, path, out);
        path.pop();
    }
}
