use std::fmt;

use thiserror::Error;

use super::law::{ActionTheory, EffectLaw, ExecLaw, Law, Query};
use crate::formula::{Action, Formula, Signature, SignatureError};
use crate::kripke::Modal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),
    #[error("undeclared action `{0}`")]
    UndeclaredAction(String),
    #[error("empty {0} declaration")]
    EmptyDeclaration(&'static str),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unsupported query shape: {0}")]
    Unsupported(String),
}

/// Non-fatal diagnostics produced while reading a theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// Executability laws are stated for an action with no effect laws.
    ExecWithoutEffects { action: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ExecWithoutEffects { action } => {
                write!(f, "executability laws for `{action}` but no effect laws")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Xor,
    Arrow,
    Iff,
    FatArrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Semi,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Not => "`~`",
            Tok::And => "`&`",
            Tok::Or => "`|`",
            Tok::Xor => "`^`",
            Tok::Arrow => "`->`",
            Tok::Iff => "`<->`",
            Tok::FatArrow => "`=>`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Lt => "`<`",
            Tok::Gt => "`>`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Newline => "end of line",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l0, column: c0 });
        let peek = |k: usize| chars.get(i + k).copied();
        match c {
            '\n' => {
                push(&mut out, Tok::Newline);
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            '~' => push(&mut out, Tok::Not),
            '&' => push(&mut out, Tok::And),
            '|' => push(&mut out, Tok::Or),
            '^' => push(&mut out, Tok::Xor),
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            '[' => push(&mut out, Tok::LBracket),
            ']' => push(&mut out, Tok::RBracket),
            '>' => push(&mut out, Tok::Gt),
            ',' => push(&mut out, Tok::Comma),
            ';' => push(&mut out, Tok::Semi),
            '-' if peek(1) == Some('>') => {
                push(&mut out, Tok::Arrow);
                i += 1;
                col += 1;
            }
            '=' if peek(1) == Some('>') => {
                push(&mut out, Tok::FatArrow);
                i += 1;
                col += 1;
            }
            '<' if peek(1) == Some('-') && peek(2) == Some('>') => {
                push(&mut out, Tok::Iff);
                i += 2;
                col += 2;
            }
            '<' => push(&mut out, Tok::Lt),
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Ident(word));
                continue;
            }
            other => {
                return Err(ParseError { line, column: col, kind: ParseErrorKind::UnexpectedChar(other) });
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: Option<&'s Signature>,
}

impl<'s> Parser<'s> {
    fn new(src: &str, sig: Option<&'s Signature>, keep_newlines: bool) -> Result<Self, ParseError> {
        let mut toks = lex(src)?;
        if !keep_newlines {
            toks.retain(|t| t.tok != Tok::Newline);
        }
        Ok(Parser { toks, pos: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, kind: ParseErrorKind) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { line: t.line, column: t.column, kind }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.err_here(ParseErrorKind::Unexpected { expected: expected.into(), found: self.peek().to_string() })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<Spanned, ParseError> {
        match self.peek() {
            Tok::Ident(_) => Ok(self.bump()),
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.bump();
        }
    }

    fn end_of_line(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of line")),
        }
    }

    fn sig(&self) -> &'s Signature {
        self.sig.expect("signature set before parsing formulas")
    }

    fn action(&mut self) -> Result<Action, ParseError> {
        let t = self.ident("action name")?;
        let Tok::Ident(name) = t.tok else { unreachable!() };
        self.sig().action(&name).ok_or(ParseError {
            line: t.line,
            column: t.column,
            kind: ParseErrorKind::UndeclaredAction(name),
        })
    }

    // Precedence climbing over the shared Boolean/modal grammar. The same
    // routine builds modal trees; pure-Boolean results are collapsed later.
    fn modal(&mut self) -> Result<Modal, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Modal, ParseError> {
        let mut lhs = self.implies()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implies()?;
            lhs = Modal::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Modal, ParseError> {
        let lhs = self.xor()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Modal::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Modal, ParseError> {
        let mut lhs = self.or()?;
        while *self.peek() == Tok::Xor {
            self.bump();
            let rhs = self.or()?;
            lhs = Modal::Xor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Modal, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Modal::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Modal, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Modal::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Modal, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Modal::Not(Box::new(self.unary()?)))
            }
            Tok::LBracket => {
                self.bump();
                let a = self.action()?;
                self.expect(Tok::RBracket)?;
                Ok(Modal::Necessarily(a, Box::new(self.unary()?)))
            }
            Tok::Lt => {
                self.bump();
                let a = self.action()?;
                self.expect(Tok::Gt)?;
                Ok(Modal::Possibly(a, Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.modal()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let t = self.bump();
                match name.as_str() {
                    "true" => Ok(Modal::Prop(Formula::True)),
                    "false" => Ok(Modal::Prop(Formula::False)),
                    _ => match self.sig().atom(&name) {
                        Some(a) => Ok(Modal::Prop(Formula::Atom(a))),
                        None => Err(ParseError {
                            line: t.line,
                            column: t.column,
                            kind: ParseErrorKind::UndeclaredAtom(name),
                        }),
                    },
                }
            }
            _ => Err(self.unexpected("formula")),
        }
    }

    fn boolean(&mut self) -> Result<Formula, ParseError> {
        let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
        let m = self.modal()?;
        m.as_prop().ok_or(ParseError {
            line,
            column,
            kind: ParseErrorKind::Unexpected {
                expected: "Boolean formula".into(),
                found: "modal operator".into(),
            },
        })
    }

    fn law(&mut self) -> Result<Law, ParseError> {
        let kw = self.ident("`static`, `effect` or `exec`")?;
        match kw.tok {
            Tok::Ident(ref k) if k == "static" => Ok(Law::Static(self.boolean()?)),
            Tok::Ident(ref k) if k == "effect" => {
                let pre = self.boolean()?;
                self.expect(Tok::FatArrow)?;
                self.expect(Tok::LBracket)?;
                let action = self.action()?;
                self.expect(Tok::RBracket)?;
                let post = self.boolean()?;
                Ok(Law::Effect(EffectLaw { pre, action, post }))
            }
            Tok::Ident(ref k) if k == "exec" => {
                let pre = self.boolean()?;
                self.expect(Tok::FatArrow)?;
                self.expect(Tok::Lt)?;
                let action = self.action()?;
                self.expect(Tok::Gt)?;
                Ok(Law::Exec(ExecLaw { pre, action }))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`static`, `effect` or `exec`"))
            }
        }
    }

    fn ident_list(&mut self, what: &'static str) -> Result<Vec<String>, ParseError> {
        let mut names = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(s) => {
                    self.bump();
                    names.push(s);
                }
                Tok::Comma if !names.is_empty() => {
                    self.bump();
                    if !matches!(self.peek(), Tok::Ident(_)) {
                        return Err(self.unexpected("name"));
                    }
                }
                Tok::Newline | Tok::Eof => break,
                _ => return Err(self.unexpected("name")),
            }
        }
        if names.is_empty() {
            return Err(self.err_here(ParseErrorKind::EmptyDeclaration(what)));
        }
        Ok(names)
    }

    fn at_end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a theory file, returning the theory and any warnings.
pub fn parse_theory_with_warnings(text: &str) -> Result<(ActionTheory, Vec<Warning>), ParseError> {
    let mut p = Parser::new(text, None, true)?;
    p.skip_newlines();
    p.keyword("theory")?;
    let name = match p.ident("theory name")?.tok {
        Tok::Ident(s) => s,
        _ => unreachable!(),
    };
    p.end_of_line()?;
    p.skip_newlines();
    p.keyword("atoms")?;
    let decl = p.toks[p.pos].clone();
    let atoms = p.ident_list("atom")?;
    p.end_of_line()?;
    p.skip_newlines();
    p.keyword("actions")?;
    let actions = p.ident_list("action")?;
    p.end_of_line()?;
    let sig = Signature::new(atoms, actions)
        .map_err(|e| ParseError { line: decl.line, column: decl.column, kind: e.into() })?;
    let mut theory = ActionTheory::new(name, sig.clone());
    let mut p = Parser { toks: p.toks, pos: p.pos, sig: Some(&sig) };
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        let law = p.law()?;
        p.end_of_line()?;
        theory.add(law).expect("parsed laws use the declared signature");
    }
    let warnings = lint(&theory);
    Ok((theory, warnings))
}

pub fn parse_theory(text: &str) -> Result<ActionTheory, ParseError> {
    parse_theory_with_warnings(text).map(|(t, _)| t)
}

/// Warnings for a theory: executability laws for actions without effect laws.
pub fn lint(theory: &ActionTheory) -> Vec<Warning> {
    theory
        .sig()
        .all_actions()
        .filter(|a| theory.execs_for(*a).next().is_some() && theory.effects_for(*a).next().is_none())
        .map(|a| Warning::ExecWithoutEffects { action: theory.sig().action_name(a).to_string() })
        .collect()
}

pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, Some(sig), false)?;
    let f = p.boolean()?;
    p.at_end()?;
    Ok(f)
}

/// Parses one law written with its keyword, e.g. `exec token => <buy>`.
pub fn parse_law(sig: &Signature, text: &str) -> Result<Law, ParseError> {
    let mut p = Parser::new(text, Some(sig), false)?;
    let l = p.law()?;
    p.at_end()?;
    Ok(l)
}

/// Parses a modal formula over the signature (arbitrary nesting).
pub fn parse_modal(sig: &Signature, text: &str) -> Result<Modal, ParseError> {
    let mut p = Parser::new(text, Some(sig), false)?;
    let m = p.modal()?;
    p.at_end()?;
    Ok(m)
}

/// Parses a query: either laws with keywords separated by `;`, or a modal
/// formula that must fall in the law fragment.
pub fn parse_query(sig: &Signature, text: &str) -> Result<Query, QueryError> {
    let mut p = Parser::new(text, Some(sig), false)?;
    let keyword = matches!(p.peek(), Tok::Ident(k) if ["static", "effect", "exec"].contains(&k.as_str()))
        && !matches!(p.peek_at(1), Tok::Eof | Tok::And | Tok::Or | Tok::Xor | Tok::Arrow | Tok::Iff | Tok::RParen);
    if keyword {
        let mut laws = vec![p.law()?];
        while *p.peek() == Tok::Semi {
            p.bump();
            laws.push(p.law()?);
        }
        p.at_end()?;
        return Ok(Query::all(laws).expect("at least one law"));
    }
    let m = p.modal()?;
    p.at_end()?;
    query_from_modal(&m).ok_or_else(|| QueryError::Unsupported(m.display(sig).to_string()))
}

/// Recognises law shapes: `φ`, `φ → [a]ψ`, `[a]ψ`, `φ → ⟨a⟩⊤`, `⟨a⟩⊤` and
/// conjunctions of these.
pub fn query_from_modal(m: &Modal) -> Option<Query> {
    fn collect(m: &Modal, out: &mut Vec<Law>) -> bool {
        if let Some(f) = m.as_prop() {
            out.push(Law::Static(f));
            return true;
        }
        let (pre, rest) = match m {
            Modal::And(a, b) => return collect(a, out) && collect(b, out),
            Modal::Implies(a, b) => match a.as_prop() {
                Some(pre) => (pre, b.as_ref()),
                None => return false,
            },
            other => (Formula::True, other),
        };
        match rest {
            Modal::Necessarily(a, post) => match post.as_prop() {
                Some(post) => out.push(Law::Effect(EffectLaw { pre, action: *a, post })),
                None => return false,
            },
            Modal::Possibly(a, post) if post.as_prop() == Some(Formula::True) => {
                out.push(Law::Exec(ExecLaw { pre, action: *a }))
            }
            _ => return false,
        }
        true
    }
    let mut laws = Vec::new();
    if collect(m, &mut laws) {
        Query::all(laws)
    } else {
        None
    }
}
