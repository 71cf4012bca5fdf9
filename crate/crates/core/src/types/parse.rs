//! Reader for the printed type syntax, e.g. `Rec {name : String | r} -> a`.
//!
//! Capitalised names are constructors and lowercase names are variables.
//! A variable is row-kinded when it appears as a row tail or as the
//! argument of `Rec`; every other variable is ⋆-kinded.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Kind, Label, TyVar, Type};
use crate::syntax::{Cursor, Location, SyntaxError};
use crate::term::VarSupply;

#[derive(Clone, Debug)]
pub struct ParsedType {
    pub ty: Type,
    /// Variables by source name, in first-occurrence order.
    pub vars: Vec<(String, TyVar)>,
}

impl ParsedType {
    pub fn var(&self, name: &str) -> Option<&TyVar> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

struct Parser<'a, 's> {
    cur: Cursor<'a>,
    supply: &'s mut VarSupply,
    vars: Vec<(String, TyVar)>,
    rows: BTreeSet<String>,
}

impl Parser<'_, '_> {
    fn ws(&mut self) -> Location {
        self.cur.skip_trivia("--");
        self.cur.location()
    }

    fn error(&mut self, expected: &str) -> SyntaxError {
        let loc = self.ws();
        let found = match self.cur.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        SyntaxError::new(loc, expected, found)
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.cur.peek() == Some(c) {
            self.cur.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        match self.cur.peek() {
            Some(c) if c.is_alphabetic() => {
                let mut s = String::new();
                self.cur.eat_while(|c| c.is_alphanumeric() || c == '_', &mut s);
                Some(s)
            }
            _ => None,
        }
    }

    fn variable(&mut self, name: &str) -> Type {
        if let Some((_, v)) = self.vars.iter().find(|(n, _)| n == name) {
            return Type::Var(v.clone());
        }
        let v = TyVar::new(self.supply.fresh_named(name), Kind::Star);
        self.vars.push((name.into(), v.clone()));
        Type::Var(v)
    }

    fn ty(&mut self) -> Result<Type, SyntaxError> {
        let lhs = self.app()?;
        self.ws();
        if self.cur.peek() == Some('-') && self.cur.peek2() == Some('>') {
            self.cur.bump();
            self.cur.bump();
            Ok(Type::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.ws();
        matches!(self.cur.peek(), Some(c) if c.is_alphabetic() || c == '(' || c == '{')
    }

    fn app(&mut self) -> Result<Type, SyntaxError> {
        let mut t = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            if let (Type::Con(c), Type::Var(v)) = (&t, &arg) {
                if &**c == "Rec" {
                    self.mark_row(v);
                }
            }
            t = Type::app(t, arg);
        }
        Ok(t)
    }

    fn mark_row(&mut self, v: &TyVar) {
        if let Some((n, _)) = self.vars.iter().find(|(_, w)| w.id() == v.id()) {
            self.rows.insert(n.clone());
        }
    }

    fn atom(&mut self) -> Result<Type, SyntaxError> {
        if self.eat('(') {
            let t = self.ty()?;
            self.expect(')')?;
            return Ok(t);
        }
        if self.eat('{') {
            return self.row();
        }
        match self.ident() {
            Some(name) if name.starts_with(char::is_uppercase) => Ok(Type::Con(name.into())),
            Some(name) => Ok(self.variable(&name)),
            None => Err(self.error("a type")),
        }
    }

    fn row(&mut self) -> Result<Type, SyntaxError> {
        let mut fields = Vec::new();
        let mut tail = Type::RowEmpty;
        if !self.eat('}') {
            loop {
                if self.eat('|') {
                    tail = self.row_tail()?;
                    break;
                }
                let label = self.ident().ok_or_else(|| self.error("a label"))?;
                self.expect(':')?;
                fields.push((Label::new(label), self.ty()?));
                if self.eat(',') {
                    continue;
                }
                if self.eat('|') {
                    tail = self.row_tail()?;
                }
                break;
            }
            self.expect('}')?;
        }
        let mut row = tail;
        for (l, t) in fields.into_iter().rev() {
            row = Type::extend(l, t, row);
        }
        Ok(row)
    }

    fn row_tail(&mut self) -> Result<Type, SyntaxError> {
        match self.ident() {
            Some(name) if !name.starts_with(char::is_uppercase) => {
                let t = self.variable(&name);
                if let Type::Var(v) = &t {
                    let v = v.clone();
                    self.mark_row(&v);
                }
                Ok(t)
            }
            _ => Err(self.error("a row variable")),
        }
    }
}

/// Parses one type. Fresh variable ids come from `supply`.
pub fn parse_type(text: &str, supply: &mut VarSupply) -> Result<ParsedType, SyntaxError> {
    let mut p = Parser {
        cur: Cursor::new(text),
        supply,
        vars: Vec::new(),
        rows: BTreeSet::new(),
    };
    let ty = p.ty()?;
    p.ws();
    if p.cur.peek().is_some() {
        return Err(p.error("end of input"));
    }
    let rows = p.rows;
    let vars: Vec<(String, TyVar)> = p
        .vars
        .into_iter()
        .map(|(n, v)| {
            let kind = if rows.contains(&n) { Kind::Row } else { Kind::Star };
            let v = TyVar::new(v.var, kind);
            (n, v)
        })
        .collect();
    let ty = ty.map_vars(&mut |v| {
        let (_, w) = vars.iter().find(|(_, w)| w.id() == v.id()).unwrap();
        Type::Var(w.clone())
    });
    Ok(ParsedType { ty, vars })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_of_parsed_variables() {
        let p = parse_type("Rec {name : a | r} -> Rec s -> a", &mut VarSupply::new()).unwrap();
        assert_eq!(p.var("a").unwrap().kind, Kind::Star);
        assert_eq!(p.var("r").unwrap().kind, Kind::Row);
        assert_eq!(p.var("s").unwrap().kind, Kind::Row);
        assert_eq!(p.vars.len(), 3);
    }

    #[test]
    fn rows() {
        let mut s = VarSupply::new();
        assert_eq!(parse_type("{}", &mut s).unwrap().ty, Type::RowEmpty);
        let p = parse_type("{ | r}", &mut s).unwrap();
        assert_eq!(p.ty.as_var().unwrap().kind, Kind::Row);
        let p = parse_type("{a : Int, b : Bool}", &mut s).unwrap();
        assert_eq!(
            p.ty,
            Type::row([("a", Type::int()), ("b", Type::bool())], None)
        );
    }

    #[test]
    fn errors() {
        let mut s = VarSupply::new();
        let e = parse_type("List (", &mut s).unwrap_err();
        assert_eq!(e.location, Location::new(1, 7));
        assert!(parse_type("{a Int}", &mut s).is_err());
        assert!(parse_type("{a : Int | Int}", &mut s).is_err());
        assert!(parse_type("Int Int )", &mut s).is_err());
    }
}
