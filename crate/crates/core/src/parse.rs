//! Circuit and word description files.
//!
//! ```text
//! circuit := expr
//! expr    := IDENT ['[' FLOAT ']'] '(' expr (',' expr)* ')' | 'w' INT
//! word    := letter+          one letter per line
//! letter  := IDENT ['(' FLOAT ')']
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::fmt;

use crate::automaton::{Letter, Word};
use crate::composer::{Child, CircuitNode};
use crate::gates::lookup;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagCode {
    Syntax,
    UnknownGate,
    Arity,
    MalformedNumber,
    Parameter,
    Topology,
}

impl DiagCode {
    pub fn code(self) -> &'static str {
        match self {
            DiagCode::Syntax => "E001",
            DiagCode::UnknownGate => "E002",
            DiagCode::Arity => "E003",
            DiagCode::MalformedNumber => "E004",
            DiagCode::Parameter => "E005",
            DiagCode::Topology => "E006",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub line: usize,
    pub col: usize,
    pub token: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "error[{}] {}:{}: {} (at `{}`)",
            self.code.code(),
            self.line,
            self.col,
            self.message,
            self.token
        )
    }
}

impl std::error::Error for Diagnostic {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Open,
    Close,
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    line: usize,
    col: usize,
}

fn diag(code: DiagCode, t: &Token, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        code,
        line: t.line,
        col: t.col,
        token: t.text.clone(),
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let chars: Vec<(usize, char)> = line.chars().enumerate().collect();
        let mut i = 0;
        while i < chars.len() {
            let (col, ch) = chars[i];
            let at = |tok, text: String| Token {
                tok,
                text,
                line: ln + 1,
                col: col + 1,
            };
            let single = match ch {
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                _ => None,
            };
            if let Some(t) = single {
                out.push(at(t, ch.to_string()));
                i += 1;
            } else if ch.is_whitespace() {
                i += 1;
            } else if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                out.push(at(Tok::Ident(s.clone()), s));
            } else if ch.is_ascii_digit() || "+-.".contains(ch) {
                let start = i;
                while i < chars.len()
                    && (chars[i].1.is_ascii_alphanumeric() || "+-.".contains(chars[i].1))
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|c| c.1).collect();
                out.push(at(Tok::Number(s.clone()), s));
            } else {
                let t = at(Tok::Comma, ch.to_string());
                return Err(diag(DiagCode::Syntax, &t, format!("unexpected character `{ch}`")));
            }
        }
    }
    Ok(out)
}

fn number(t: &Token) -> Result<f64, Diagnostic> {
    let text = match &t.tok {
        Tok::Number(s) => s,
        _ => return Err(diag(DiagCode::Syntax, t, "expected a number")),
    };
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(diag(DiagCode::MalformedNumber, t, format!("malformed number `{text}`"))),
    }
}

fn wire_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('w')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&k| k >= 1)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: Token,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        let end = toks.last().map_or(
            Token {
                tok: Tok::Comma,
                text: "<end of input>".into(),
                line: 1,
                col: 1,
            },
            |t| Token {
                text: "<end of input>".into(),
                col: t.col + t.text.chars().count(),
                ..t.clone()
            },
        );
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Token, Diagnostic> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| diag(DiagCode::Syntax, &self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, Diagnostic> {
        let t = self.next()?;
        if t.tok == want {
            Ok(t)
        } else {
            Err(diag(DiagCode::Syntax, &t, format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Child, Diagnostic> {
        let t = self.next()?;
        let Tok::Ident(name) = &t.tok else {
            return Err(diag(DiagCode::Syntax, &t, "expected a gate name or a wire"));
        };
        let next_is_call = matches!(
            self.peek().map(|n| &n.tok),
            Some(Tok::Open) | Some(Tok::LBracket)
        );
        if !next_is_call {
            if let Some(k) = wire_index(name) {
                return Ok(Child::Wire(k));
            }
        }
        let spec = lookup(name)
            .ok_or_else(|| diag(DiagCode::UnknownGate, &t, format!("unknown gate `{name}`")))?;
        let mut param = None;
        if self.peek().map(|n| &n.tok) == Some(&Tok::LBracket) {
            self.next()?;
            let nt = self.next()?;
            param = Some(number(&nt)?);
            self.expect(Tok::RBracket, "`]`")?;
        }
        match (spec.takes_param, param) {
            (true, None) => {
                return Err(diag(DiagCode::Parameter, &t, format!("{name} needs an angle `{name}[φ]`")))
            }
            (false, Some(_)) => {
                return Err(diag(DiagCode::Parameter, &t, format!("{name} takes no parameter")))
            }
            _ => {}
        }
        self.expect(Tok::Open, "`(`")?;
        let mut children = vec![self.expr()?];
        loop {
            let sep = self.next()?;
            match sep.tok {
                Tok::Comma => children.push(self.expr()?),
                Tok::Close => break,
                _ => return Err(diag(DiagCode::Syntax, &sep, "expected `,` or `)`")),
            }
        }
        if children.len() != spec.n_in {
            return Err(diag(
                DiagCode::Arity,
                &t,
                format!("{name} takes {} inputs, got {}", spec.n_in, children.len()),
            ));
        }
        for c in &children {
            if let Child::Node(n) = c {
                let out = lookup(&n.gate).expect("parsed").n_out;
                if out != 1 {
                    return Err(diag(
                        DiagCode::Topology,
                        &t,
                        format!("{} has {out} outputs and cannot feed an input of {name}", n.gate),
                    ));
                }
            }
        }
        Ok(Child::Node(CircuitNode::new(name.clone(), param, children)))
    }
}

/// Parses a circuit tree; wires must read `w1..wN` from left to right.
pub fn parse_circuit(text: &str) -> Result<CircuitNode, Diagnostic> {
    let mut p = Parser::new(lex(text)?);
    let first = p.peek().cloned();
    let root = match p.expr()? {
        Child::Node(n) => n,
        Child::Wire(_) => {
            let t = first.expect("a wire was read");
            return Err(diag(DiagCode::Syntax, &t, "a circuit must start with a gate"));
        }
    };
    if let Some(t) = p.peek() {
        return Err(diag(DiagCode::Syntax, t, "trailing input after the circuit"));
    }
    if let Err(e) = root.check() {
        let t = first.expect("non-empty");
        return Err(diag(DiagCode::Topology, &t, e.to_string()));
    }
    Ok(root)
}

/// Parses a word file, one letter per line.
pub fn parse_word(text: &str) -> Result<Word, Diagnostic> {
    let toks = lex(text)?;
    let mut letters = Vec::new();
    let mut cells: Option<usize> = None;
    let mut i = 0;
    while i < toks.len() {
        let t = &toks[i];
        let line_end = toks[i..]
            .iter()
            .position(|u| u.line != t.line)
            .map_or(toks.len(), |d| i + d);
        let line = &toks[i..line_end];
        i = line_end;
        let Tok::Ident(name) = &t.tok else {
            return Err(diag(DiagCode::Syntax, t, "expected a gate name"));
        };
        let spec = lookup(name)
            .ok_or_else(|| diag(DiagCode::UnknownGate, t, format!("unknown gate `{name}`")))?;
        let param = match line {
            [_] => None,
            [_, open, num, close] if open.tok == Tok::Open && close.tok == Tok::Close => {
                Some(number(num)?)
            }
            [_, open, num, ..] if open.tok == Tok::Open => {
                number(num)?;
                let bad = line.get(3).unwrap_or(num);
                return Err(diag(DiagCode::Syntax, bad, "expected `)` ending the letter"));
            }
            [_, other, ..] => {
                return Err(diag(DiagCode::Syntax, other, "expected `(` or end of line"))
            }
            [] => unreachable!("line holds its first token"),
        };
        match (spec.takes_param, param) {
            (true, None) => {
                return Err(diag(DiagCode::Parameter, t, format!("{name} needs an angle `{name}(φ)`")))
            }
            (false, Some(_)) => {
                return Err(diag(DiagCode::Parameter, t, format!("{name} takes no parameter")))
            }
            _ => {}
        }
        if spec.n_in != spec.n_out || cells.is_some_and(|c| c != spec.n_in) {
            return Err(diag(
                DiagCode::Arity,
                t,
                format!(
                    "letter {name} maps {} to {} cells; all letters must act on {} cells",
                    spec.n_in,
                    spec.n_out,
                    cells.unwrap_or(spec.n_in)
                ),
            ));
        }
        cells = Some(spec.n_in);
        letters.push(Letter::new(name.clone(), param));
    }
    if letters.is_empty() {
        let end = Token {
            tok: Tok::Comma,
            text: "<end of input>".into(),
            line: 1,
            col: 1,
        };
        return Err(diag(DiagCode::Syntax, &end, "a word needs at least one letter"));
    }
    Ok(Word::new(letters))
}

/// One letter per line, in a form [`parse_word`] reads back.
pub fn render_word(w: &Word) -> String {
    w.letters.iter().map(|l| format!("{l}\n")).collect()
}
