//! Recursive-descent parser for clause files and goal strings.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Atom, HornClause, Program};
use crate::syntax::{Cursor, Location, SyntaxError};
use crate::term::{Term, Var, VarSupply};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Var(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("'{n}'"),
            Tok::Var(n) => format!("variable '{n}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Neck => "':-'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, Location)>, SyntaxError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_trivia("%");
        let loc = cur.location();
        let Some(c) = cur.peek() else {
            out.push((Tok::Eof, loc));
            return Ok(out);
        };
        let tok = match c {
            '(' => {
                cur.bump();
                Tok::LParen
            }
            ')' => {
                cur.bump();
                Tok::RParen
            }
            ',' => {
                cur.bump();
                Tok::Comma
            }
            '.' => {
                cur.bump();
                Tok::Dot
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                    Tok::Neck
                } else {
                    return Err(SyntaxError::new(loc, "':-'", "':'"));
                }
            }
            c if c.is_uppercase() || c == '_' => {
                let mut s = String::new();
                cur.eat_while(is_name_char, &mut s);
                Tok::Var(s)
            }
            c if c.is_lowercase() || c.is_ascii_digit() => {
                let mut s = String::new();
                cur.eat_while(is_name_char, &mut s);
                Tok::Name(s)
            }
            other => {
                return Err(SyntaxError::new(loc, "a term", format!("'{other}'")));
            }
        };
        out.push((tok, loc));
    }
}

struct Parser<'s> {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    supply: &'s mut VarSupply,
    /// Named variables of the clause (or goal) being parsed.
    scope: BTreeMap<String, Var>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn loc(&self) -> Location {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Location) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::new(self.loc(), expected, self.peek().describe())
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn variable(&mut self, name: &str) -> Var {
        if name == "_" {
            return self.supply.fresh_named("_");
        }
        if let Some(v) = self.scope.get(name) {
            return v.clone();
        }
        let v = self.supply.fresh_named(name);
        self.scope.insert(name.to_string(), v.clone());
        v
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(name) => {
                self.advance();
                Ok(Term::Var(self.variable(&name)))
            }
            Tok::Name(name) => {
                self.advance();
                let args = self.arguments()?;
                Ok(Term::app(&name, args))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.advance();
        loop {
            args.push(self.term()?);
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RParen => {
                    self.advance();
                    return Ok(args);
                }
                _ => return Err(self.error("',' or ')'")),
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        match self.peek().clone() {
            Tok::Name(name) => {
                self.advance();
                let args = self.arguments()?;
                Ok(Atom::new(&name, args))
            }
            _ => Err(self.error("an atom")),
        }
    }

    fn conjunction(&mut self) -> Result<Vec<Atom>, SyntaxError> {
        let mut atoms = Vec::new();
        loop {
            atoms.push(self.atom()?);
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                return Ok(atoms);
            }
        }
    }

    fn clause(&mut self) -> Result<HornClause, SyntaxError> {
        self.scope.clear();
        let start = self.loc();
        // `co` followed by a name is the co-fact marker; otherwise `co` is an
        // ordinary predicate name.
        let cofact = matches!(self.peek(), Tok::Name(n) if n == "co")
            && matches!(self.peek_at(1), Tok::Name(_));
        if cofact {
            self.advance();
        }
        let head = self.atom()?;
        if cofact {
            if *self.peek() == Tok::Neck {
                return Err(self.error("'.' (a co-fact is a unit clause)"));
            }
            self.expect(Tok::Dot, "'.'")?;
            return Ok(HornClause::cofact(head, start));
        }
        let body = match self.peek() {
            Tok::Neck => {
                self.advance();
                self.conjunction()?
            }
            _ => Vec::new(),
        };
        if *self.peek() != Tok::Dot {
            let expected = if body.is_empty() { "':-' or '.'" } else { "',' or '.'" };
            return Err(self.error(expected));
        }
        self.advance();
        Ok(HornClause::new(head, body, start))
    }
}

/// Parses a clause file. Each clause gets its own variables counted from
/// zero; the engine renames clauses apart before every use.
pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    let toks = lex(text)?;
    let mut clauses = Vec::new();
    let mut supply = VarSupply::new();
    let mut p = Parser {
        toks,
        pos: 0,
        supply: &mut supply,
        scope: BTreeMap::new(),
    };
    while *p.peek() != Tok::Eof {
        *p.supply = VarSupply::new();
        clauses.push(p.clause()?);
    }
    Ok(Program::new(clauses))
}

/// Parses a comma-separated conjunction; repeated names denote one variable.
/// A trailing `.` is accepted.
pub fn parse_goal(text: &str) -> Result<Vec<Atom>, SyntaxError> {
    parse_goal_with(text, &mut VarSupply::new())
}

pub fn parse_goal_with(text: &str, supply: &mut VarSupply) -> Result<Vec<Atom>, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        supply,
        scope: BTreeMap::new(),
    };
    let atoms = p.conjunction()?;
    if *p.peek() == Tok::Dot {
        p.advance();
    }
    if *p.peek() != Tok::Eof {
        return Err(p.error("',' or end of input"));
    }
    Ok(atoms)
}
