//! Parser for program sources, goals and listing lines.
//!
//! Both Haskell-style juxtaposition (`add (Suc x) y`) and tuple-style calls
//! (`add(Suc(x),y)`) are accepted. An identifier immediately followed by `(`
//! is a call; with whitespace in between the parenthesised group is an
//! ordinary argument.

use std::collections::BTreeSet;

use super::expr::{Expr, Prim};
use super::lexer::{lex_line, strip_comment, Tok, Token};
use super::program::{CtorInfo, Program, Rule};
use crate::error::{Error, Result};

const UNKNOWN_ARITY: usize = usize::MAX;

struct Line {
    toks: Vec<Token>,
    line: usize,
}

fn logical_lines(src: &str) -> Result<Vec<Line>> {
    let mut out: Vec<Line> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = strip_comment(raw);
        if text.trim().is_empty() {
            continue;
        }
        let continues = text.starts_with(char::is_whitespace) && !out.is_empty();
        let mut toks = Vec::new();
        lex_line(text, i + 1, &mut toks)?;
        if continues {
            if let Some(first) = toks.first_mut() {
                first.tight = false;
            }
            out.last_mut().unwrap().toks.extend(toks);
        } else {
            out.push(Line { toks, line: i + 1 });
        }
    }
    Ok(out)
}

fn builtin_program() -> Program {
    let mut p = Program::default();
    for (ty, ks) in [("Bool", vec![("True", 0), ("False", 0)]), ("List", vec![("Nil", 0), ("Cons", 2)]), ("Nat", vec![("Zero", 0), ("Suc", 1)])] {
        for (k, n) in &ks {
            p.ctors.insert(k.to_string(), CtorInfo { arity: *n, type_name: ty.to_string() });
        }
        p.types.insert(ty.to_string(), ks.iter().map(|(k, _)| k.to_string()).collect());
    }
    p
}

fn err_at(t: Option<&Token>, line: usize, msg: impl Into<String>) -> Error {
    match t {
        Some(t) => Error::Parse { line: t.line, col: t.col, msg: msg.into() },
        None => Error::Parse { line, col: 0, msg: msg.into() },
    }
}

fn is_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// Index of the first top-level token satisfying `pred`.
fn find_top(toks: &[Token], pred: impl Fn(&Token) -> bool) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        if t.is_sym("(") || t.is_sym("[") {
            depth += 1;
        } else if t.is_sym(")") || t.is_sym("]") {
            depth -= 1;
        } else if depth == 0 && pred(t) {
            return Some(i);
        }
    }
    None
}

/// Skips a bracketed group starting at `i`, returning the index after it.
fn skip_group(toks: &[Token], i: usize) -> usize {
    let mut depth = 0i32;
    let mut j = i;
    while j < toks.len() {
        if toks[j].is_sym("(") || toks[j].is_sym("[") {
            depth += 1;
        } else if toks[j].is_sym(")") || toks[j].is_sym("]") {
            depth -= 1;
            if depth == 0 {
                return j + 1;
            }
        }
        j += 1;
    }
    j
}

fn split_label(toks: &[Token]) -> (Option<String>, &[Token]) {
    if toks.len() > 2 && toks[1].is_sym(":") {
        if let Some(l) = toks[0].ident() {
            return (Some(l.to_string()), &toks[2..]);
        }
    }
    (None, toks)
}

/// Counts head parameters without resolving any names.
fn count_params(toks: &[Token]) -> usize {
    let mut i = 0;
    let mut n = 0;
    if toks.first().is_some_and(|t| t.tight && t.is_sym("(")) {
        let end = skip_group(toks, 0);
        let inner = &toks[1..end.saturating_sub(1)];
        if !inner.is_empty() {
            let mut depth = 0;
            n = 1;
            for t in inner {
                if t.is_sym("(") || t.is_sym("[") {
                    depth += 1;
                } else if t.is_sym(")") || t.is_sym("]") {
                    depth -= 1;
                } else if depth == 0 && t.is_sym(",") {
                    n += 1;
                }
            }
        }
        i = end;
    }
    while i < toks.len() {
        let t = &toks[i];
        if t.is_sym("(") || t.is_sym("[") {
            i = skip_group(toks, i);
        } else if t.is_sym("-") {
            i += 2;
        } else if t.is_sym("@") {
            i = skip_group(toks, i + 1);
            continue;
        } else {
            i += 1;
            if toks.get(i).is_some_and(|x| x.tight && x.is_sym("(")) {
                i = skip_group(toks, i);
            }
        }
        n += 1;
    }
    n
}

fn parse_data(p: &mut Program, toks: &[Token], line: usize) -> Result<()> {
    let ty = toks.get(1).and_then(Token::ident).ok_or_else(|| err_at(toks.get(1), line, "expected a type name"))?;
    let eq = find_top(toks, |t| t.is_sym("=")).ok_or_else(|| err_at(toks.first(), line, "expected '=' in data declaration"))?;
    if let Some(old) = p.types.remove(ty) {
        for k in old {
            p.ctors.remove(&k);
        }
    }
    let mut names = Vec::new();
    let mut rest = &toks[eq + 1..];
    loop {
        let end = find_top(rest, |t| t.is_sym("|")).unwrap_or(rest.len());
        let alt = &rest[..end];
        let k = alt.first().and_then(Token::ident).ok_or_else(|| err_at(alt.first(), line, "expected a constructor"))?;
        let mut arity = 0;
        let mut i = 1;
        while i < alt.len() {
            i = if alt[i].is_sym("(") || alt[i].is_sym("[") { skip_group(alt, i) } else { i + 1 };
            arity += 1;
        }
        p.ctors.insert(k.to_string(), CtorInfo { arity, type_name: ty.to_string() });
        names.push(k.to_string());
        if end == rest.len() {
            break;
        }
        rest = &rest[end + 1..];
    }
    p.types.insert(ty.to_string(), names);
    p.declared.retain(|t| t != ty);
    p.declared.push(ty.to_string());
    Ok(())
}

/// Parses a whole program.
pub fn parse_program(src: &str) -> Result<Program> {
    let mut prog = builtin_program();
    let mut pending: Vec<(Line, bool)> = Vec::new();
    let mut in_cata = false;
    for ll in logical_lines(src)? {
        let toks = &ll.toks;
        if toks.len() == 1 && toks[0].ident() == Some("cata") {
            in_cata = true;
            continue;
        }
        if toks[0].ident() == Some("data") {
            parse_data(&mut prog, toks, ll.line)?;
            continue;
        }
        if toks.iter().any(|t| t.is_sym("::")) {
            continue;
        }
        let Some(eq) = find_top(toks, |t| t.is_sym("=")) else {
            // type signatures: `f :: T`, `f : T` or anything with an arrow
            if toks.iter().any(|t| t.is_sym("->")) || toks.get(1).is_some_and(|t| t.is_sym(":")) {
                continue;
            }
            return Err(err_at(toks.first(), ll.line, "expected '=' in rule"));
        };
        let (_, rest) = split_label(&toks[..eq]);
        let name = rest.first().and_then(Token::ident).ok_or_else(|| err_at(rest.first(), ll.line, "expected a function name"))?;
        let head_end = find_top(rest, |t| t.is_sym("|")).unwrap_or(rest.len());
        let n = count_params(&rest[1..head_end]);
        match prog.funs.get(name) {
            Some(m) if *m != n => {
                return Err(err_at(rest.first(), ll.line, format!("{name} is defined with {m} and {n} parameters")));
            }
            _ => {
                prog.funs.insert(name.to_string(), n);
            }
        }
        pending.push((ll, in_cata));
    }
    let mut labels = BTreeSet::new();
    let mut fresh = 0usize;
    for (k, (ll, cata)) in pending.into_iter().enumerate() {
        let (label, toks) = split_label(&ll.toks);
        let label = label.unwrap_or_else(|| format!("R{}", k + 1));
        if !labels.insert(label.clone()) {
            return Err(err_at(ll.toks.first(), ll.line, format!("duplicate rule label {label}")));
        }
        let mut ps = Parser { toks, pos: 0, line: ll.line, prog: &mut prog, bound: BTreeSet::new(), pattern: true, fresh: &mut fresh };
        let name = ps.next_ident()?;
        let params = ps.head_params()?;
        for q in &params {
            if !q.is_term() {
                return Err(err_at(ll.toks.first(), ll.line, format!("invalid pattern {q}")));
            }
        }
        ps.pattern = false;
        ps.bound = params.iter().flat_map(Expr::vars).collect();
        let guard = if ps.eat("|") { ps.guard()? } else { Expr::tt() };
        ps.expect("=")?;
        let body = ps.expr()?;
        ps.end()?;
        let rule = Rule { label, name, params, guard, body };
        if cata {
            prog.cata.push(rule);
        } else {
            prog.rules.push(rule);
        }
    }
    Ok(prog)
}

/// Parses a goal or any standalone expression against a program's symbols.
/// Unknown lowercase names become variables.
pub fn parse_expr(prog: &Program, src: &str) -> Result<Expr> {
    let mut toks = Vec::new();
    lex_line(src, 1, &mut toks)?;
    let mut p = prog.clone();
    let mut fresh = 0;
    let mut ps = Parser { toks: &toks, pos: 0, line: 1, prog: &mut p, bound: BTreeSet::new(), pattern: false, fresh: &mut fresh };
    let e = ps.expr()?;
    ps.end()?;
    Ok(e)
}

/// A parsed listing line `name(params) | guard = body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub params: Vec<Expr>,
    pub guard: Expr,
    pub body: Expr,
}

/// Parses one line of an interpretation listing. A trailing trace
/// annotation `<A,B>` is ignored.
pub fn parse_clause(prog: &Program, src: &str) -> Result<Clause> {
    let text = match src.rfind('<') {
        Some(i) if src.trim_end().ends_with('>') && !src[i..].contains('=') => &src[..i],
        _ => src,
    };
    let text = text.trim().trim_start_matches('*').trim();
    let mut toks = Vec::new();
    lex_line(text, 1, &mut toks)?;
    let mut p = prog.clone();
    let mut fresh = 0;
    let mut ps = Parser { toks: &toks, pos: 0, line: 1, prog: &mut p, bound: BTreeSet::new(), pattern: true, fresh: &mut fresh };
    let name = ps.next_ident()?;
    let params = ps.head_params()?;
    ps.pattern = false;
    let guard = if ps.eat("|") { ps.guard()? } else { Expr::tt() };
    ps.expect("=")?;
    let body = ps.expr()?;
    ps.end()?;
    Ok(Clause { name, params, guard, body })
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    prog: &'a mut Program,
    bound: BTreeSet<String>,
    pattern: bool,
    fresh: &'a mut usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn at(&self, s: &str) -> bool {
        self.peek().is_some_and(|t| t.is_sym(s))
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        err_at(self.peek(), self.line, msg)
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = match self.peek().map(|t| &t.tok) {
                Some(Tok::Ident(x)) => x.clone(),
                Some(Tok::Int(n)) => n.to_string(),
                Some(Tok::Sym(x)) => x.to_string(),
                None => "end of line".into(),
            };
            Err(self.error(format!("expected '{s}', found '{found}'")))
        }
    }

    fn end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("unexpected trailing input")),
        }
    }

    fn next_ident(&mut self) -> Result<String> {
        match self.peek().and_then(Token::ident) {
            Some(s) => {
                let s = s.to_string();
                self.pos += 1;
                Ok(s)
            }
            None => Err(self.error("expected an identifier")),
        }
    }

    fn tight_paren(&self) -> bool {
        self.peek().is_some_and(|t| t.tight && t.is_sym("("))
    }

    fn starts_atom(&self) -> bool {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) => true,
            Some(Tok::Sym(s)) => *s == "(" || *s == "[",
            None => false,
        }
    }

    fn head_params(&mut self) -> Result<Vec<Expr>> {
        let mut params = Vec::new();
        if self.tight_paren() {
            params = self.paren_list()?;
        }
        while !self.at("|") && !self.at("=") && self.peek().is_some() {
            params.push(self.postfix()?);
        }
        Ok(params)
    }

    /// `( e1, ..., en )` with the opening parenthesis next.
    fn paren_list(&mut self) -> Result<Vec<Expr>> {
        self.expect("(")?;
        let mut items = Vec::new();
        if self.eat(")") {
            return Ok(items);
        }
        loop {
            items.push(self.expr()?);
            if self.eat(")") {
                return Ok(items);
            }
            self.expect(",")?;
        }
    }

    fn guard(&mut self) -> Result<Expr> {
        let mut cs = vec![self.expr()?];
        while self.eat(",") {
            cs.push(self.expr()?);
        }
        Ok(if cs.len() == 1 { cs.pop().unwrap() } else { Expr::Prim(Prim::And, cs) })
    }

    fn expr(&mut self) -> Result<Expr> {
        let l = self.or()?;
        if self.eat("|>") {
            let r = self.expr()?;
            return Ok(Expr::Prim(Prim::Then, vec![l, r]));
        }
        Ok(l)
    }

    fn nary(&mut self, sym: &str, op: Prim, next: fn(&mut Self) -> Result<Expr>) -> Result<Expr> {
        let mut items = vec![next(self)?];
        while self.eat(sym) {
            match next(self)? {
                Expr::Prim(p, xs) if p == op => items.extend(xs),
                x => items.push(x),
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Prim(op, items) })
    }

    fn or(&mut self) -> Result<Expr> {
        self.nary("||", Prim::Or, Self::and)
    }

    fn and(&mut self) -> Result<Expr> {
        self.nary("&&", Prim::And, Self::cmp)
    }

    fn cmp(&mut self) -> Result<Expr> {
        let l = self.cons()?;
        for (s, p) in [(">=", Prim::Ge), ("<=", Prim::Le), ("==", Prim::Eq), (">", Prim::Gt), ("<", Prim::Lt)] {
            if self.eat(s) {
                let r = self.cons()?;
                return Ok(Expr::Prim(p, vec![l, r]));
            }
        }
        Ok(l)
    }

    fn cons(&mut self) -> Result<Expr> {
        let l = self.add()?;
        if self.eat(":") {
            let r = self.cons()?;
            return Ok(Expr::cons(l, r));
        }
        Ok(l)
    }

    fn add(&mut self) -> Result<Expr> {
        let mut l = self.mul()?;
        loop {
            let op = if self.eat("+") {
                Prim::Add
            } else if self.eat("-") {
                Prim::Sub
            } else {
                return Ok(l);
            };
            let r = self.mul()?;
            l = Expr::Prim(op, vec![l, r]);
        }
    }

    fn mul(&mut self) -> Result<Expr> {
        let mut l = self.app()?;
        while self.eat("*") {
            let r = self.app()?;
            l = Expr::Prim(Prim::Mul, vec![l, r]);
        }
        Ok(l)
    }

    fn app(&mut self) -> Result<Expr> {
        let head = self.atom(true)?;
        let head = self.postfixes(head)?;
        let mut args = Vec::new();
        while self.starts_atom() {
            args.push(self.postfix()?);
        }
        if args.is_empty() {
            return self.finish(head);
        }
        self.extend(head, args)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let a = self.atom(false)?;
        self.postfixes(a)
    }

    fn postfixes(&mut self, mut e: Expr) -> Result<Expr> {
        while self.at("@") {
            self.pos += 1;
            self.expect("[")?;
            let mut args = vec![self.finish(e)?];
            if !self.eat("]") {
                loop {
                    args.push(self.expr()?);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            e = Expr::Prim(Prim::Apply, args);
        }
        Ok(e)
    }

    /// Fixes the arity of a constructor seen for the first time without arguments.
    fn finish(&mut self, e: Expr) -> Result<Expr> {
        match e {
            Expr::Con(k, UNKNOWN_ARITY, a) => self.extend(Expr::Con(k, UNKNOWN_ARITY, vec![]), a),
            Expr::Prim(p, a) if a.is_empty() && p != Prim::And && p != Prim::Or => Err(self.error(format!("{} needs arguments", p.name()))),
            e => Ok(e),
        }
    }

    fn extend(&mut self, head: Expr, args: Vec<Expr>) -> Result<Expr> {
        match head {
            Expr::Con(k, UNKNOWN_ARITY, mut a) => {
                a.extend(args);
                let n = a.len();
                self.prog.ctors.insert(k.clone(), CtorInfo { arity: n, type_name: k.clone() });
                self.prog.types.insert(k.clone(), vec![k.clone()]);
                Ok(Expr::Con(k, n, a))
            }
            Expr::Con(k, n, mut a) => {
                a.extend(args);
                if a.len() > n {
                    return Err(self.error(format!("constructor {k} takes {n} arguments, got {}", a.len())));
                }
                Ok(Expr::Con(k, n, a))
            }
            Expr::Fun(f, n, mut a) => {
                let mut args = args.into_iter();
                while a.len() < n {
                    match args.next() {
                        Some(x) => a.push(x),
                        None => break,
                    }
                }
                let call = Expr::Fun(f, n, a);
                let rest: Vec<Expr> = args.collect();
                if rest.is_empty() {
                    Ok(call)
                } else {
                    Ok(Expr::Prim(Prim::Apply, std::iter::once(call).chain(rest).collect()))
                }
            }
            Expr::Prim(Prim::Apply, mut a) => {
                a.extend(args);
                Ok(Expr::Prim(Prim::Apply, a))
            }
            Expr::Prim(p, a) if a.is_empty() => Ok(Expr::Prim(p, args)),
            Expr::Var(_) => Ok(Expr::Prim(Prim::Apply, std::iter::once(head).chain(args).collect())),
            other => Err(self.error(format!("{other} cannot be applied"))),
        }
    }

    fn resolve(&mut self, name: &str) -> Result<Expr> {
        if name == "Bot" {
            if self.pattern {
                return Err(self.error("Bot cannot appear in a pattern"));
            }
            return Ok(Expr::Bot);
        }
        if name == "_" {
            if !self.pattern {
                return Err(self.error("wildcard outside a pattern"));
            }
            *self.fresh += 1;
            return Ok(Expr::Var(format!("_{}", self.fresh)));
        }
        if is_upper(name) {
            if !self.pattern {
                if let Some(n) = self.prog.arity(name) {
                    return Ok(Expr::Fun(name.into(), n, vec![]));
                }
            }
            return Ok(match self.prog.ctors.get(name) {
                Some(info) => Expr::Con(name.into(), info.arity, vec![]),
                None => Expr::Con(name.into(), UNKNOWN_ARITY, vec![]),
            });
        }
        if self.pattern || self.bound.contains(name) {
            return Ok(Expr::var(name));
        }
        if let Some(p) = Prim::from_name(name) {
            return Ok(Expr::Prim(p, vec![]));
        }
        if let Some(n) = self.prog.arity(name) {
            return Ok(Expr::Fun(name.into(), n, vec![]));
        }
        Ok(Expr::var(name))
    }

    fn atom(&mut self, head: bool) -> Result<Expr> {
        let Some(t) = self.peek().cloned() else {
            return Err(self.error("unexpected end of line"));
        };
        match t.tok {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Tok::Sym("-") => {
                self.pos += 1;
                match self.peek().map(|t| &t.tok) {
                    Some(Tok::Int(n)) => {
                        let n = -*n;
                        self.pos += 1;
                        Ok(Expr::Int(n))
                    }
                    _ => Err(self.error("expected an integer after '-'")),
                }
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let base = self.resolve(&name)?;
                if self.tight_paren() {
                    let args = self.paren_list()?;
                    return self.extend(base, args);
                }
                if head {
                    Ok(base)
                } else {
                    self.finish(base)
                }
            }
            Tok::Sym("(") => {
                self.pos += 1;
                if self.eat(")") {
                    return Ok(Expr::tuple(vec![]));
                }
                let first = self.expr()?;
                if self.eat(")") {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(",") {
                    items.push(self.expr()?);
                }
                self.expect(")")?;
                Ok(Expr::tuple(items))
            }
            Tok::Sym("[") => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat("]") {
                    loop {
                        items.push(self.expr()?);
                        if self.eat("]") {
                            break;
                        }
                        self.expect(",")?;
                    }
                }
                Ok(Expr::list(items))
            }
            Tok::Sym(s) => Err(self.error(format!("unexpected '{s}'"))),
        }
    }
}
