use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// No whitespace between this token and the previous one.
    pub tight: bool,
}

impl Token {
    pub fn is_sym(&self, s: &str) -> bool {
        matches!(&self.tok, Tok::Sym(x) if *x == s)
    }

    pub fn ident(&self) -> Option<&str> {
        match &self.tok {
            Tok::Ident(s) => Some(s),
            _ => None,
        }
    }
}

const SYMS: &[&str] = &[
    "::", "->", "|>", "||", "&&", ">=", "<=", "==", "(", ")", "[", "]", ",", "|", "=", ":", "+", "-", "*", ">", "<", "@",
];

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '#' || c == '\''
}

/// Tokenizes one physical line (comments already removed).
pub fn lex_line(text: &str, line: usize, out: &mut Vec<Token>) -> Result<()> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut tight = false;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            tight = false;
            i += 1;
            continue;
        }
        let push = |tok: Tok, out: &mut Vec<Token>| out.push(Token { tok, line, col, tight });
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| Error::Parse { line, col, msg: format!("integer {s} out of range") })?;
            push(Tok::Int(n), out);
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            push(Tok::Ident(chars[start..i].iter().collect()), out);
        } else {
            let (tok, width) = match c {
                '▶' => (Tok::Sym("|>"), 1),
                '∧' => (Tok::Sym("&&"), 1),
                '∨' => (Tok::Sym("||"), 1),
                '⊥' => (Tok::Ident("Bot".into()), 1),
                _ => {
                    let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
                    match SYMS.iter().find(|s| rest.starts_with(**s)) {
                        Some(s) => (Tok::Sym(s), s.chars().count()),
                        None => return Err(Error::Parse { line, col, msg: format!("unexpected character '{c}'") }),
                    }
                }
            };
            push(tok, out);
            i += width;
        }
        tight = true;
    }
    Ok(())
}

/// Removes a `--` comment, keeping everything before it.
pub fn strip_comment(line: &str) -> &str {
    match line.find("--") {
        Some(i) => &line[..i],
        None => line,
    }
}
