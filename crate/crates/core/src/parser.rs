//! Reader for the `.ablp` abductive-program format.
//!
//! ```text
//! program   ::= clause*
//! clause    ::= "abducible" spec ("," spec)* "."
//!             | "ic" ":-" body "."
//!             | atom (":-" body)? "."
//! spec      ::= NAME "/" INT
//! body      ::= literal ("," literal)*
//! literal   ::= "not" atom | atom
//! atom      ::= NAME ("(" term ("," term)* ")")?
//! term      ::= VAR | INT | NAME ("(" term ("," term)* ")")?
//! ```
//!
//! `NAME` starts with a lowercase letter, `VAR` with an uppercase letter or
//! `_` (a lone `_` is anonymous), `INT` is an optionally signed decimal.
//! `%` comments run to end of line. Queries and context lists are bodies
//! with an optional trailing `.`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::model::{
    AbductiveFramework, FrameworkError, IntegrityConstraint, Literal, PredicateKey, Rule, Term,
};

/// Program text plus where it came from.
#[derive(Clone, Debug)]
pub struct SourceProgram {
    pub text: String,
    pub origin: String,
}

impl SourceProgram {
    pub fn inline(text: impl Into<String>) -> Self {
        SourceProgram {
            text: text.into(),
            origin: "<inline>".to_string(),
        }
    }

    pub fn from_file(path: &Path) -> std::io::Result<Self> {
        Ok(SourceProgram {
            text: std::fs::read_to_string(path)?,
            origin: path.display().to_string(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{origin}:{pos}: syntax error: {message}")]
    Syntax {
        origin: String,
        pos: Position,
        message: String,
    },
    #[error("{origin}:{pos}: {source}")]
    Semantic {
        origin: String,
        pos: Position,
        source: FrameworkError,
    },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Var(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Slash,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Name(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Neck => f.write_str("`:-`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().peekable(),
            src,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Position)>, (Position, String)> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                } else {
                    break;
                }
            }
            let pos = Position {
                line: self.line,
                column: self.col,
            };
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, pos));
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '/' => {
                    self.bump();
                    Tok::Slash
                }
                ':' => {
                    self.bump();
                    if self.peek() == Some('-') {
                        self.bump();
                        Tok::Neck
                    } else {
                        return Err((pos, "expected `:-`".to_string()));
                    }
                }
                '-' | '0'..='9' => {
                    let start = self.chars.peek().unwrap().0;
                    self.bump();
                    if c == '-' && !self.peek().is_some_and(|d| d.is_ascii_digit()) {
                        return Err((pos, "expected digits after `-`".to_string()));
                    }
                    let mut end = start + 1;
                    while let Some(&(i, d)) = self.chars.peek() {
                        if d.is_ascii_digit() {
                            self.bump();
                            end = i + 1;
                        } else {
                            break;
                        }
                    }
                    let text = &self.src[start..end];
                    let v = text
                        .parse::<i64>()
                        .map_err(|_| (pos, format!("integer `{text}` out of range")))?;
                    Tok::Int(v)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = self.chars.peek().unwrap().0;
                    let mut end = start;
                    while let Some(&(i, d)) = self.chars.peek() {
                        if d.is_alphanumeric() || d == '_' {
                            self.bump();
                            end = i + d.len_utf8();
                        } else {
                            break;
                        }
                    }
                    let text = self.src[start..end].to_string();
                    if c.is_uppercase() || c == '_' {
                        Tok::Var(text)
                    } else {
                        Tok::Name(text)
                    }
                }
                other => return Err((pos, format!("unexpected character `{other}`"))),
            };
            out.push((tok, pos));
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, Position)>,
    at: usize,
    origin: &'a str,
    anon: usize,
}

enum Clause {
    Abducibles(Vec<PredicateKey>),
    Rule(Rule),
    Ic(IntegrityConstraint),
}

impl<'a> Parser<'a> {
    fn new(src: &str, origin: &'a str) -> Result<Self, ParseError> {
        let toks = Lexer::new(src).tokens().map_err(|(pos, message)| ParseError::Syntax {
            origin: origin.to_string(),
            pos,
            message,
        })?;
        Ok(Parser {
            toks,
            at: 0,
            origin,
            anon: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            origin: self.origin.to_string(),
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!("expected {tok}, found {}", self.peek()))
        }
    }

    fn clause(&mut self) -> Result<(Clause, Position), ParseError> {
        let start = self.pos();
        let clause = match self.peek().clone() {
            Tok::Name(n) if n == "abducible" => {
                self.next();
                let mut specs = vec![self.spec()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    specs.push(self.spec()?);
                }
                Clause::Abducibles(specs)
            }
            Tok::Name(n) if n == "ic" && self.toks[self.at + 1].0 != Tok::LParen => {
                self.next();
                let body = if *self.peek() == Tok::Neck {
                    self.next();
                    self.body()?
                } else {
                    Vec::new()
                };
                Clause::Ic(IntegrityConstraint { body })
            }
            Tok::Name(n) if n == "not" => return self.error("rule heads must be positive"),
            Tok::Name(_) => {
                let head = self.atom()?;
                let body = if *self.peek() == Tok::Neck {
                    self.next();
                    self.body()?
                } else {
                    Vec::new()
                };
                Clause::Rule(Rule::new(head, body))
            }
            other => return self.error(format!("expected a clause, found {other}")),
        };
        self.expect(Tok::Dot)?;
        self.anon = 0;
        Ok((clause, start))
    }

    fn spec(&mut self) -> Result<PredicateKey, ParseError> {
        let name = match self.next() {
            Tok::Name(n) => n,
            other => return self.error(format!("expected a predicate name, found {other}")),
        };
        self.expect(Tok::Slash)?;
        match self.next() {
            Tok::Int(a) if a >= 0 => Ok(PredicateKey::new(&name, a as usize)),
            other => self.error(format!("expected an arity, found {other}")),
        }
    }

    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut out = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.next();
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if matches!(self.peek(), Tok::Name(n) if n == "not") {
            self.next();
            Ok(self.atom()?.complement())
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Literal, ParseError> {
        let name = match self.peek().clone() {
            Tok::Name(n) if n != "not" => {
                self.next();
                n
            }
            other => return self.error(format!("expected an atom, found {other}")),
        };
        let args = self.args()?;
        Ok(Literal::pos(&name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(Vec::new());
        }
        self.next();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.next();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if !matches!(self.peek(), Tok::Var(_) | Tok::Int(_) | Tok::Name(_)) {
            return self.error(format!("expected a term, found {}", self.peek()));
        }
        match self.next() {
            Tok::Var(v) if v == "_" => {
                self.anon += 1;
                Ok(Term::var(&format!("_G{}", self.anon)))
            }
            Tok::Var(v) => Ok(Term::var(&v)),
            Tok::Int(i) => Ok(Term::Int(i)),
            Tok::Name(n) => {
                let args = self.args()?;
                Ok(Term::compound(&n, args))
            }
            _ => unreachable!("checked above"),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }
}

/// Parses a complete program and validates it as an abductive framework.
pub fn parse_program(src: &SourceProgram) -> Result<AbductiveFramework, ParseError> {
    let mut p = Parser::new(&src.text, &src.origin)?;
    let mut abducibles = BTreeSet::new();
    let mut rules = Vec::new();
    let mut ics = Vec::new();
    while !p.at_eof() {
        let (clause, pos) = p.clause()?;
        match clause {
            Clause::Abducibles(specs) => abducibles.extend(specs),
            Clause::Rule(r) => rules.push((r, pos)),
            Clause::Ic(ic) => {
                if ic.body.is_empty() {
                    return Err(ParseError::Semantic {
                        origin: src.origin.clone(),
                        pos,
                        source: FrameworkError::EmptyIcBody,
                    });
                }
                ics.push(ic)
            }
        }
    }
    if let Some((r, pos)) = rules.iter().find(|(r, _)| abducibles.contains(&r.head.key())) {
        return Err(ParseError::Semantic {
            origin: src.origin.clone(),
            pos: *pos,
            source: FrameworkError::AbducibleHead(r.head.to_string()),
        });
    }
    Ok(AbductiveFramework {
        program: rules.into_iter().map(|(r, _)| r).collect(),
        abducibles,
        ics,
    })
}

pub fn parse_program_str(text: &str) -> Result<AbductiveFramework, ParseError> {
    parse_program(&SourceProgram::inline(text))
}

/// Parses a non-empty goal list such as `r, t(1), not t(2).`
pub fn parse_query(text: &str) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(text, "<query>")?;
    let body = p.body()?;
    if *p.peek() == Tok::Dot {
        p.next();
    }
    if !p.at_eof() {
        return p.error(format!("unexpected {} after goals", p.peek()));
    }
    Ok(body)
}

/// Parses a possibly empty literal list, e.g. a context given on the command line.
pub fn parse_literals(text: &str) -> Result<Vec<Literal>, ParseError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    parse_query(text)
}

/// Parses exactly one literal.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let mut lits = parse_query(text)?;
    if lits.len() != 1 {
        return Err(ParseError::Syntax {
            origin: "<query>".to_string(),
            pos: Position { line: 1, column: 1 },
            message: format!("expected one literal, found {}", lits.len()),
        });
    }
    Ok(lits.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::RUNNING_EXAMPLE;

    #[test]
    fn running_example_shape() {
        let fw = parse_program_str(RUNNING_EXAMPLE).unwrap();
        assert_eq!(fw.program.len(), 3);
        assert_eq!(fw.abducibles.len(), 3);
        assert_eq!(fw.ics.len(), 2);
        assert_eq!(fw.program[0].to_string(), "p(X) :- q(0), q(1), s(X).");
        assert_eq!(fw.ics[0].to_string(), "ic :- q(X), r(X).");
    }

    #[test]
    fn abducible_declaration_alone() {
        let fw = parse_program_str("abducible a/1.").unwrap();
        assert!(fw.program.is_empty());
        assert!(fw.abducibles.contains(&PredicateKey::new("a", 1)));
    }

    #[test]
    fn abducible_head_is_rejected() {
        let err = parse_program_str("abducible a/1.\na(X) :- b(X).").unwrap_err();
        match err {
            ParseError::Semantic { pos, source, .. } => {
                assert_eq!(source, FrameworkError::AbducibleHead("a(X)".into()));
                assert_eq!(pos.line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        // declaration order does not matter
        assert!(parse_program_str("a(X) :- b(X). abducible a/1.").is_err());
    }

    #[test]
    fn empty_ic_body_is_rejected() {
        assert!(matches!(
            parse_program_str("ic."),
            Err(ParseError::Semantic {
                source: FrameworkError::EmptyIcBody,
                ..
            })
        ));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_program_str("p(X) :- q(X).\np(Y :- r.").unwrap_err();
        assert_eq!(err.position(), Position { line: 2, column: 5 });
        assert!(err.to_string().contains("2:5"));
    }

    #[test]
    fn queries() {
        assert_eq!(parse_query("p(0).").unwrap()[0].to_string(), "p(0)");
        let q = parse_query("r, t(1), t(2).").unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q[0].to_string(), "r");
        assert!(parse_query("").is_err());
        assert!(parse_query("not p(X)").unwrap()[0].negative);
    }

    #[test]
    fn anonymous_variables_are_distinct() {
        let fw = parse_program_str("p :- q(_, _).").unwrap();
        let args = &fw.program[0].body[0].args;
        assert_ne!(args[0], args[1]);
    }

    #[test]
    fn comments_and_compounds() {
        let fw = parse_program_str("% header\np(f(X, -3)) :- q. % trailing\n").unwrap();
        assert_eq!(fw.program[0].to_string(), "p(f(X,-3)) :- q.");
    }
}
