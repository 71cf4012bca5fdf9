//! Parser for `.ml1` source.
//!
//! ```text
//! expr    ::= '\' x+ '.' expr | 'let' x '=' expr 'in' expr
//!           | 'letrec' x '=' expr 'in' expr | app
//! app     ::= postfix+                       -- left-associative
//! postfix ::= atom ('.' label)*
//! atom    ::= x | int | string | '(' expr ')' | '{' '}'
//!           | '{' l '=' expr (',' l '=' expr)* '}'
//!           | '{' expr 'with' l '=' expr (',' l '=' expr)* '}'
//! ```
//!
//! A lambda or `let` may also appear as the last argument of an
//! application, as in `f \x. x`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Expr, ExprKind};
use crate::syntax::{Cursor, Location, SyntaxError};
use crate::types::Label;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Backslash,
    Dot,
    Eq,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Let,
    LetRec,
    In,
    With,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(n) => format!("'{n}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Str(_) => "a string literal".into(),
            Tok::Backslash => "'\\'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Eq => "'='".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Let => "'let'".into(),
            Tok::LetRec => "'letrec'".into(),
            Tok::In => "'in'".into(),
            Tok::With => "'with'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Location)>, SyntaxError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_trivia("--");
        let loc = cur.location();
        let Some(c) = cur.peek() else {
            out.push((Tok::Eof, loc));
            return Ok(out);
        };
        let single = match c {
            '\\' => Some(Tok::Backslash),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            _ => None,
        };
        let tok = if let Some(t) = single {
            cur.bump();
            t
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            cur.eat_while(|c| c.is_ascii_digit(), &mut s);
            let n = s
                .parse()
                .map_err(|_| SyntaxError::new(loc, "an integer that fits in 64 bits", format!("'{s}'")))?;
            Tok::Int(n)
        } else if c == '"' {
            cur.bump();
            Tok::Str(string_body(&mut cur)?)
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            cur.eat_while(|c| c.is_alphanumeric() || c == '_' || c == '\'', &mut s);
            match s.as_str() {
                "let" => Tok::Let,
                "letrec" => Tok::LetRec,
                "in" => Tok::In,
                "with" => Tok::With,
                _ => Tok::Ident(s),
            }
        } else {
            return Err(SyntaxError::new(loc, "an expression", format!("'{c}'")));
        };
        out.push((tok, loc));
    }
}

fn string_body(cur: &mut Cursor<'_>) -> Result<String, SyntaxError> {
    let mut s = String::new();
    loop {
        let loc = cur.location();
        match cur.bump() {
            None => return Err(SyntaxError::new(loc, "'\"'", "end of input")),
            Some('"') => return Ok(s),
            Some('\\') => match cur.bump() {
                Some('"') => s.push('"'),
                Some('\\') => s.push('\\'),
                Some('n') => s.push('\n'),
                Some('t') => s.push('\t'),
                Some(c) => {
                    return Err(SyntaxError::new(loc, "an escape sequence", format!("'\\{c}'")))
                }
                None => return Err(SyntaxError::new(loc, "an escape sequence", "end of input")),
            },
            Some(c) => s.push(c),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Location)>,
    pos: usize,
}

impl Parser {
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

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::new(self.loc(), expected, self.peek().describe())
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.error(what)),
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let loc = self.loc();
        match self.peek() {
            Tok::Backslash => {
                self.advance();
                let mut params = Vec::new();
                params.push(self.ident("a parameter name")?);
                while let Tok::Ident(_) = self.peek() {
                    params.push(self.ident("a parameter name")?);
                }
                self.expect(Tok::Dot)?;
                let mut body = self.expr()?;
                for p in params.into_iter().rev() {
                    body = Expr::new(ExprKind::Lam(p.into(), Box::new(body)), loc);
                }
                Ok(body)
            }
            Tok::Let | Tok::LetRec => {
                let rec = self.advance() == Tok::LetRec;
                let name: Arc<str> = self.ident("a variable name")?.into();
                self.expect(Tok::Eq)?;
                let bound = Box::new(self.expr()?);
                self.expect(Tok::In)?;
                let body = Box::new(self.expr()?);
                let kind = if rec {
                    ExprKind::LetRec(name, bound, body)
                } else {
                    ExprKind::Let(name, bound, body)
                };
                Ok(Expr::new(kind, loc))
            }
            _ => self.app(),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Int(_) | Tok::Str(_) | Tok::LParen | Tok::LBrace
        )
    }

    fn app(&mut self) -> Result<Expr, SyntaxError> {
        let loc = self.loc();
        let mut e = self.postfix()?;
        loop {
            let arg = if self.starts_atom() {
                self.postfix()?
            } else if matches!(self.peek(), Tok::Backslash | Tok::Let | Tok::LetRec) {
                self.expr()?
            } else {
                return Ok(e);
            };
            e = Expr::new(ExprKind::App(Box::new(e), Box::new(arg)), loc);
        }
    }

    fn postfix(&mut self) -> Result<Expr, SyntaxError> {
        let loc = self.loc();
        let mut e = self.atom()?;
        while *self.peek() == Tok::Dot {
            self.advance();
            let l = self.ident("a label")?;
            e = Expr::new(ExprKind::Select(Box::new(e), Label::new(l)), loc);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let loc = self.loc();
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.advance();
                Ok(Expr::new(ExprKind::Var(n.into()), loc))
            }
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::new(ExprKind::IntLit(n), loc))
            }
            Tok::Str(s) => {
                self.advance();
                Ok(Expr::new(ExprKind::StrLit(s), loc))
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBrace => {
                self.advance();
                self.record(loc)
            }
            _ => Err(self.error("an expression")),
        }
    }

    fn record(&mut self, loc: Location) -> Result<Expr, SyntaxError> {
        let base = match (self.peek(), self.peek_at(1)) {
            (Tok::RBrace, _) => {
                self.advance();
                return Ok(Expr::new(ExprKind::EmptyRec, loc));
            }
            (Tok::Ident(_), Tok::Eq) => Expr::new(ExprKind::EmptyRec, loc),
            _ => {
                let e = self.expr()?;
                self.expect(Tok::With)?;
                e
            }
        };
        let mut e = base;
        loop {
            let field_loc = self.loc();
            let l = self.ident("a label")?;
            self.expect(Tok::Eq)?;
            let v = self.expr()?;
            e = Expr::new(
                ExprKind::Extend(Box::new(e), Label::new(l), Box::new(v)),
                field_loc,
            );
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                }
                Tok::RBrace => {
                    self.advance();
                    return Ok(relocate(e, loc));
                }
                _ => return Err(self.error("',' or '}'")),
            }
        }
    }
}

fn relocate(mut e: Expr, loc: Location) -> Expr {
    e.location = loc;
    e
}

/// Parses one `.ml1` expression.
pub fn parse_ml(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn lambda() {
        let e = parse_ml("\\x. x").unwrap();
        match &e.kind {
            ExprKind::Lam(x, body) => {
                assert_eq!(&**x, "x");
                assert!(matches!(&body.kind, ExprKind::Var(y) if &**y == "x"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn record_literal_desugars_left_to_right() {
        let e = parse_ml("{name = \"bob\", age = 3}").unwrap();
        let ExprKind::Extend(inner, age, three) = &e.kind else {
            panic!()
        };
        assert_eq!(age.name(), "age");
        assert!(matches!(three.kind, ExprKind::IntLit(3)));
        let ExprKind::Extend(empty, name, bob) = &inner.kind else {
            panic!()
        };
        assert_eq!(name.name(), "name");
        assert!(matches!(&bob.kind, ExprKind::StrLit(s) if s == "bob"));
        assert!(matches!(empty.kind, ExprKind::EmptyRec));
        assert_eq!(e.location, Location::new(1, 1));
    }

    #[test]
    fn selection_and_application() {
        let e = parse_ml("r.name").unwrap();
        assert!(matches!(&e.kind, ExprKind::Select(r, l)
            if l.name() == "name" && matches!(&r.kind, ExprKind::Var(v) if &**v == "r")));
        let e = parse_ml("f a b").unwrap();
        assert_eq!(e.to_string(), "((f a) b)");
        let e = parse_ml("(\\r. r.name) {age = 3}").unwrap();
        assert_eq!(e.to_string(), "((\\r. r.name) {{} with age = 3})");
        assert_eq!(e.location, Location::new(1, 1));
    }

    #[test]
    fn let_forms_and_with() {
        let e = parse_ml("let id = \\x. x in id id").unwrap();
        assert_eq!(e.to_string(), "let id = (\\x. x) in (id id)");
        let e = parse_ml("letrec f = \\x. f x in f").unwrap();
        assert!(matches!(e.kind, ExprKind::LetRec(..)));
        let e = parse_ml("{ r with a = 1, b = \"s\" }").unwrap();
        assert_eq!(e.to_string(), "{{r with a = 1} with b = \"s\"}");
        let e = parse_ml("\\x y. x").unwrap();
        assert_eq!(e.to_string(), "(\\x. (\\y. x))");
    }

    #[test]
    fn comments_and_escapes() {
        let e = parse_ml("-- the answer\n  \"a\\\"b\" -- trailing").unwrap();
        assert!(matches!(&e.kind, ExprKind::StrLit(s) if s == "a\"b"));
        assert_eq!(e.location, Location::new(2, 3));
    }

    #[test]
    fn errors() {
        let e = parse_ml("\\x x").unwrap_err();
        assert_eq!(e.location, Location::new(1, 5));
        assert_eq!(e.expected, "'.'");
        let e = parse_ml("let x = 1").unwrap_err();
        assert_eq!(e.found, "end of input");
        assert!(parse_ml("{a = 1").is_err());
        assert!(parse_ml("\"open").is_err());
        assert!(parse_ml("1 )").is_err());
        assert!(parse_ml("99999999999999999999").is_err());
        assert!(parse_ml("#").is_err());
        assert!(parse_ml("").is_err());
    }
}
