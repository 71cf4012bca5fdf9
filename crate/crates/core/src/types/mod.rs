//! Kinds, type expressions with rows, kind checking, and row-aware
//! unification.
//!
//! Rows are spines of [`Type::RowExtend`] ending in [`Type::RowEmpty`]
//! (closed) or a row-kinded variable (open). Two rows are equivalent when
//! they agree up to the order of their fields; [`row_normalize`] picks the
//! representative with labels in code-point order.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::term::Var;

mod parse;
mod print;
mod subst;
mod unify;

pub use parse::{parse_type, ParsedType};
pub use print::TypeNames;
pub use subst::TypeSubst;
pub use unify::{row_unify, type_unify, Unifier, UnifyError};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Kind {
    Star,
    Row,
    Arrow(Box<Kind>, Box<Kind>),
}

impl Kind {
    pub fn arrow(from: Kind, to: Kind) -> Kind {
        Kind::Arrow(Box::new(from), Box::new(to))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Star => f.write_str("*"),
            Kind::Row => f.write_str("row"),
            Kind::Arrow(a, b) => match **a {
                Kind::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindParseError {
    pub text: String,
    pub position: usize,
}

impl fmt::Display for KindParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "malformed kind '{}' at offset {}; expected '*', 'row', '(' or 'k -> k'",
            self.text, self.position
        )
    }
}

impl core::error::Error for KindParseError {}

/// `*`, `row`, `k -> k` (right-associative), and parentheses.
impl FromStr for Kind {
    type Err = KindParseError;

    fn from_str(s: &str) -> Result<Kind, KindParseError> {
        struct P<'a> {
            s: &'a str,
            pos: usize,
        }
        impl P<'_> {
            fn ws(&mut self) {
                while self.s[self.pos..].starts_with(char::is_whitespace) {
                    self.pos += 1;
                }
            }
            fn eat(&mut self, tok: &str) -> bool {
                self.ws();
                if self.s[self.pos..].starts_with(tok) {
                    self.pos += tok.len();
                    true
                } else {
                    false
                }
            }
            fn err(&self) -> KindParseError {
                KindParseError {
                    text: self.s.into(),
                    position: self.pos,
                }
            }
            fn kind(&mut self) -> Result<Kind, KindParseError> {
                let k = if self.eat("*") {
                    Kind::Star
                } else if self.eat("row") {
                    Kind::Row
                } else if self.eat("(") {
                    let k = self.kind()?;
                    if !self.eat(")") {
                        return Err(self.err());
                    }
                    k
                } else {
                    return Err(self.err());
                };
                if self.eat("->") {
                    Ok(Kind::arrow(k, self.kind()?))
                } else {
                    Ok(k)
                }
            }
        }
        let mut p = P { s, pos: 0 };
        let k = p.kind()?;
        p.ws();
        if p.pos != s.len() {
            return Err(p.err());
        }
        Ok(k)
    }
}

/// A record field name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    /// # Panics
    ///
    /// Panics if `name` is empty.
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "labels must be non-empty");
        Label(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A type variable with its kind. Ids come from the same
/// [`VarSupply`](crate::term::VarSupply) as term variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TyVar {
    pub var: Var,
    pub kind: Kind,
}

impl TyVar {
    pub fn new(var: Var, kind: Kind) -> Self {
        TyVar { var, kind }
    }

    pub fn id(&self) -> u32 {
        self.var.id()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Var(TyVar),
    /// A constructor; its kind comes from the [`KindEnv`].
    Con(Arc<str>),
    App(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    RowEmpty,
    RowExtend(Label, Box<Type>, Box<Type>),
}

impl Type {
    pub fn var(v: TyVar) -> Type {
        Type::Var(v)
    }

    pub fn con(name: &str) -> Type {
        Type::Con(name.into())
    }

    pub fn int() -> Type {
        Type::con("Int")
    }

    pub fn string() -> Type {
        Type::con("String")
    }

    pub fn bool() -> Type {
        Type::con("Bool")
    }

    pub fn app(f: Type, a: Type) -> Type {
        Type::App(Box::new(f), Box::new(a))
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn list(t: Type) -> Type {
        Type::app(Type::con("List"), t)
    }

    pub fn rec(row: Type) -> Type {
        Type::app(Type::con("Rec"), row)
    }

    pub fn extend(label: Label, field: Type, tail: Type) -> Type {
        Type::RowExtend(label, Box::new(field), Box::new(tail))
    }

    /// Builds a row from `fields` (outermost first) over `tail`.
    pub fn row<'a>(fields: impl IntoIterator<Item = (&'a str, Type)>, tail: Option<TyVar>) -> Type {
        let fields: Vec<_> = fields.into_iter().collect();
        let mut row = tail.map_or(Type::RowEmpty, Type::Var);
        for (l, t) in fields.into_iter().rev() {
            row = Type::extend(Label::new(l), t, row);
        }
        row
    }

    pub fn as_var(&self) -> Option<&TyVar> {
        match self {
            Type::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_row(&self) -> bool {
        matches!(self, Type::RowEmpty | Type::RowExtend(..))
            || matches!(self, Type::Var(v) if v.kind == Kind::Row)
    }

    /// Fields along a row spine, outermost first, and the spine's tail.
    pub fn row_spine(&self) -> (Vec<(&Label, &Type)>, &Type) {
        let mut fields = Vec::new();
        let mut t = self;
        while let Type::RowExtend(l, f, rest) = t {
            fields.push((l, &**f));
            t = rest;
        }
        (fields, t)
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<TyVar> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<TyVar>, seen: &mut BTreeSet<u32>) {
        match self {
            Type::Var(v) => {
                if seen.insert(v.id()) {
                    out.push(v.clone());
                }
            }
            Type::Con(_) | Type::RowEmpty => {}
            Type::App(a, b) | Type::Arrow(a, b) | Type::RowExtend(_, a, b) => {
                a.collect_vars(out, seen);
                b.collect_vars(out, seen);
            }
        }
    }

    pub fn occurs(&self, id: u32) -> bool {
        match self {
            Type::Var(v) => v.id() == id,
            Type::Con(_) | Type::RowEmpty => false,
            Type::App(a, b) | Type::Arrow(a, b) | Type::RowExtend(_, a, b) => {
                a.occurs(id) || b.occurs(id)
            }
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&TyVar) -> Type) -> Type {
        match self {
            Type::Var(v) => f(v),
            Type::Con(_) | Type::RowEmpty => self.clone(),
            Type::App(a, b) => Type::app(a.map_vars(f), b.map_vars(f)),
            Type::Arrow(a, b) => Type::arrow(a.map_vars(f), b.map_vars(f)),
            Type::RowExtend(l, a, b) => Type::extend(l.clone(), a.map_vars(f), b.map_vars(f)),
        }
    }

    pub fn display_with(&self, names: &mut TypeNames) -> String {
        print::type_to_string(self, names)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&mut TypeNames::new()))
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Var(v) => write!(f, "t{}:{}", v.id(), v.kind),
            Type::Con(c) => f.write_str(c),
            Type::App(a, b) => write!(f, "({a:?} {b:?})"),
            Type::Arrow(a, b) => write!(f, "({a:?} -> {b:?})"),
            Type::RowEmpty => f.write_str("{}"),
            Type::RowExtend(l, t, rest) => write!(f, "{{{l}: {t:?} | {rest:?}}}"),
        }
    }
}

/// The kinding context: constructors and, optionally, type variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KindEnv {
    constructors: BTreeMap<Arc<str>, Kind>,
    vars: BTreeMap<u32, Kind>,
}

impl KindEnv {
    /// `Int`, `String`, `Bool : *`, `List : * -> *`, `Rec : row -> *`.
    pub fn builtin() -> Self {
        let mut constructors = BTreeMap::new();
        for name in ["Int", "String", "Bool"] {
            constructors.insert(Arc::from(name), Kind::Star);
        }
        constructors.insert(Arc::from("List"), Kind::arrow(Kind::Star, Kind::Star));
        constructors.insert(Arc::from("Rec"), Kind::arrow(Kind::Row, Kind::Star));
        KindEnv {
            constructors,
            vars: BTreeMap::new(),
        }
    }

    /// Adds or replaces a constructor, returning its previous kind.
    pub fn declare(&mut self, name: &str, kind: Kind) -> Option<Kind> {
        self.constructors.insert(name.into(), kind)
    }

    pub fn bind_var(&mut self, v: &TyVar) {
        self.vars.insert(v.id(), v.kind.clone());
    }

    pub fn constructor(&self, name: &str) -> Option<&Kind> {
        self.constructors.get(name)
    }

    pub fn constructors(&self) -> impl Iterator<Item = (&str, &Kind)> {
        self.constructors.iter().map(|(n, k)| (&**n, k))
    }
}

impl Default for KindEnv {
    fn default() -> Self {
        Self::builtin()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KindError {
    /// `ty` has kind `found` where `expected` was required.
    Mismatch {
        expected: Kind,
        found: Kind,
        ty: Type,
    },
    UnboundTypeName(String),
    DuplicateLabel(Label),
    /// A row spine ends in something other than `{}` or a row variable.
    MalformedRow(Type),
}

impl fmt::Display for KindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KindError::Mismatch {
                expected,
                found,
                ty,
            } => write!(f, "expected kind {expected}, found {found} for '{ty}'"),
            KindError::UnboundTypeName(n) => write!(f, "unknown type constructor '{n}'"),
            KindError::DuplicateLabel(l) => write!(f, "duplicate label '{l}' in row"),
            KindError::MalformedRow(t) => write!(f, "malformed row tail '{t}'"),
        }
    }
}

impl core::error::Error for KindError {}

/// The kind of `ty` under `env`.
pub fn kind_of(env: &KindEnv, ty: &Type) -> Result<Kind, KindError> {
    match ty {
        Type::Var(v) => match env.vars.get(&v.id()) {
            Some(k) if *k != v.kind => Err(KindError::Mismatch {
                expected: k.clone(),
                found: v.kind.clone(),
                ty: ty.clone(),
            }),
            _ => Ok(v.kind.clone()),
        },
        Type::Con(c) => env
            .constructor(c)
            .cloned()
            .ok_or_else(|| KindError::UnboundTypeName(String::from(&**c))),
        Type::App(fun, arg) => {
            let kf = kind_of(env, fun)?;
            let ka = kind_of(env, arg)?;
            match kf {
                Kind::Arrow(from, to) => {
                    if *from == ka {
                        Ok(*to)
                    } else {
                        Err(KindError::Mismatch {
                            expected: *from,
                            found: ka,
                            ty: (**arg).clone(),
                        })
                    }
                }
                found => Err(KindError::Mismatch {
                    expected: Kind::arrow(ka, Kind::Star),
                    found,
                    ty: (**fun).clone(),
                }),
            }
        }
        Type::Arrow(a, b) => {
            expect_kind(env, a, Kind::Star)?;
            expect_kind(env, b, Kind::Star)?;
            Ok(Kind::Star)
        }
        Type::RowEmpty => Ok(Kind::Row),
        Type::RowExtend(..) => {
            let (fields, tail) = ty.row_spine();
            let mut seen = BTreeSet::new();
            for (l, t) in fields {
                if !seen.insert(l) {
                    return Err(KindError::DuplicateLabel(l.clone()));
                }
                expect_kind(env, t, Kind::Star)?;
            }
            match tail {
                Type::RowEmpty => Ok(Kind::Row),
                Type::Var(_) => {
                    expect_kind(env, tail, Kind::Row)?;
                    Ok(Kind::Row)
                }
                other => Err(KindError::MalformedRow(other.clone())),
            }
        }
    }
}

fn expect_kind(env: &KindEnv, ty: &Type, expected: Kind) -> Result<(), KindError> {
    let found = kind_of(env, ty)?;
    if found == expected {
        Ok(())
    } else {
        Err(KindError::Mismatch {
            expected,
            found,
            ty: ty.clone(),
        })
    }
}

/// Sorts the top-level fields of a row by label. Field types are left
/// untouched; non-rows are returned unchanged.
pub fn row_normalize(row: &Type) -> Type {
    let (mut fields, tail) = row.row_spine();
    fields.sort_by(|a, b| a.0.cmp(b.0));
    let mut out = tail.clone();
    for (l, t) in fields.into_iter().rev() {
        out = Type::extend(l.clone(), t.clone(), out);
    }
    out
}

/// Normalizes every row inside `ty`.
pub fn normalize(ty: &Type) -> Type {
    match ty {
        Type::Var(_) | Type::Con(_) | Type::RowEmpty => ty.clone(),
        Type::App(a, b) => Type::app(normalize(a), normalize(b)),
        Type::Arrow(a, b) => Type::arrow(normalize(a), normalize(b)),
        Type::RowExtend(..) => {
            let (mut fields, tail) = ty.row_spine();
            fields.sort_by(|a, b| a.0.cmp(b.0));
            let mut out = tail.clone();
            for (l, t) in fields.into_iter().rev() {
                out = Type::extend(l.clone(), normalize(t), out);
            }
            out
        }
    }
}
