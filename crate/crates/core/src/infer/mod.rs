//! The `.ml1` language and its type inference.
//!
//! Checking runs in two stages. [`check_kinds`] first validates every type
//! constructor the program relies on against the [`KindEnv`]; failures
//! there are always [`InferErrorKind::KindMismatch`]. [`infer`] then runs
//! algorithm W with row-aware unification.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::Location;
use crate::term::VarSupply;
use crate::types::{
    kind_of, normalize, Kind, KindEnv, KindError, Label, TyVar, Type, TypeNames, TypeSubst,
    Unifier, UnifyError,
};

mod parse;

pub use parse::parse_ml;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub location: Location,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Var(Arc<str>),
    Lam(Arc<str>, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Let(Arc<str>, Box<Expr>, Box<Expr>),
    LetRec(Arc<str>, Box<Expr>, Box<Expr>),
    IntLit(i64),
    StrLit(String),
    EmptyRec,
    Extend(Box<Expr>, Label, Box<Expr>),
    Select(Box<Expr>, Label),
}

impl Expr {
    pub fn new(kind: ExprKind, location: Location) -> Self {
        Expr { kind, location }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Var(x) => f.write_str(x),
            ExprKind::Lam(x, b) => write!(f, "(\\{x}. {b})"),
            ExprKind::App(g, a) => write!(f, "({g} {a})"),
            ExprKind::Let(x, e, b) => write!(f, "let {x} = {e} in {b}"),
            ExprKind::LetRec(x, e, b) => write!(f, "letrec {x} = {e} in {b}"),
            ExprKind::IntLit(n) => write!(f, "{n}"),
            ExprKind::StrLit(s) => write!(f, "{s:?}"),
            ExprKind::EmptyRec => f.write_str("{}"),
            ExprKind::Extend(r, l, v) => write!(f, "{{{r} with {l} = {v}}}"),
            ExprKind::Select(r, l) => write!(f, "{r}.{l}"),
        }
    }
}

/// A type with an outer block of quantified variables. Quantified row
/// variables may carry labels they must lack.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub quantified: Vec<TyVar>,
    pub lacks: BTreeMap<u32, BTreeSet<Label>>,
    pub body: Type,
}

impl Scheme {
    pub fn mono(body: Type) -> Self {
        Scheme {
            quantified: Vec::new(),
            lacks: BTreeMap::new(),
            body,
        }
    }

    /// Variables free in the scheme.
    pub fn free_vars(&self) -> Vec<TyVar> {
        let bound: BTreeSet<u32> = self.quantified.iter().map(TyVar::id).collect();
        self.body
            .free_vars()
            .into_iter()
            .filter(|v| !bound.contains(&v.id()))
            .collect()
    }

    fn apply(&self, s: &TypeSubst) -> Scheme {
        let bound: BTreeSet<u32> = self.quantified.iter().map(TyVar::id).collect();
        let body = self.body.map_vars(&mut |v| {
            if bound.contains(&v.id()) {
                Type::Var(v.clone())
            } else {
                s.apply(&Type::Var(v.clone()))
            }
        });
        Scheme {
            quantified: self.quantified.clone(),
            lacks: self.lacks.clone(),
            body,
        }
    }

    pub fn display_with(&self, names: &mut TypeNames) -> String {
        let body = normalize(&self.body);
        let order = body.free_vars();
        let quantified: BTreeSet<u32> = self.quantified.iter().map(TyVar::id).collect();
        for v in &order {
            names.name(v.id(), &v.kind);
        }
        let mut out = String::new();
        for v in order.iter().filter(|v| quantified.contains(&v.id())) {
            out.push_str("forall ");
            out.push_str(names.name(v.id(), &v.kind));
            if v.kind != Kind::Star {
                out.push(':');
                out.push_str(&alloc::format!("{}", v.kind));
            }
            let implied = implied_lacks(&body, v.id());
            let extra: Vec<&Label> = self
                .lacks
                .get(&v.id())
                .into_iter()
                .flatten()
                .filter(|l| !implied.contains(l))
                .collect();
            for (i, l) in extra.iter().enumerate() {
                out.push_str(if i == 0 { " lacks " } else { ", " });
                out.push_str(l.name());
            }
            out.push_str(". ");
        }
        out.push_str(&body.display_with(names));
        out
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&mut TypeNames::new()))
    }
}

/// Labels that any row spine ending in variable `id` already carries.
fn implied_lacks(ty: &Type, id: u32) -> BTreeSet<Label> {
    fn walk(ty: &Type, id: u32, out: &mut BTreeSet<Label>) {
        match ty {
            Type::Var(_) | Type::Con(_) | Type::RowEmpty => {}
            Type::App(a, b) | Type::Arrow(a, b) => {
                walk(a, id, out);
                walk(b, id, out);
            }
            Type::RowExtend(..) => {
                let (fields, tail) = ty.row_spine();
                if tail.as_var().is_some_and(|v| v.id() == id) {
                    out.extend(fields.iter().map(|(l, _)| (*l).clone()));
                }
                for (_, t) in fields {
                    walk(t, id, out);
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(ty, id, &mut out);
    out
}

/// Typing context, newest binding first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    // Stored oldest first so that extension is a push.
    entries: Vec<(Arc<str>, Scheme)>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extended(&self, name: impl Into<Arc<str>>, scheme: Scheme) -> TypeEnv {
        let mut entries = self.entries.clone();
        entries.push((name.into(), scheme));
        TypeEnv { entries }
    }

    pub fn push(&mut self, name: impl Into<Arc<str>>, scheme: Scheme) {
        self.entries.push((name.into(), scheme));
    }

    /// Newest first.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Scheme)> {
        self.entries.iter().rev().map(|(n, s)| (&**n, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn free_vars(&self) -> BTreeSet<u32> {
        self.entries
            .iter()
            .flat_map(|(_, s)| s.free_vars())
            .map(|v| v.id())
            .collect()
    }

    pub fn apply(&self, s: &TypeSubst) -> TypeEnv {
        TypeEnv {
            entries: self
                .entries
                .iter()
                .map(|(n, sc)| (n.clone(), sc.apply(s)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InferErrorKind {
    UnboundVariable(Arc<str>),
    /// Unifying would need `var` to equal a type containing it.
    OccursViolation { var: Type, ty: Type },
    /// `duplicate` is set when a record was extended with a label it
    /// already has.
    TypeClash {
        left: Type,
        right: Type,
        duplicate: Option<Label>,
    },
    MissingLabel(Label),
    KindMismatch(KindError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferError {
    pub kind: InferErrorKind,
    pub location: Location,
}

impl InferError {
    pub fn is_kind_error(&self) -> bool {
        matches!(self.kind, InferErrorKind::KindMismatch(_))
    }
}

impl fmt::Display for InferError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = TypeNames::new();
        match &self.kind {
            InferErrorKind::UnboundVariable(x) => write!(f, "type error: unbound variable '{x}'")?,
            InferErrorKind::OccursViolation { var, ty } => {
                let v = var.display_with(&mut names);
                let t = ty.display_with(&mut names);
                write!(f, "type error: infinite type: '{v}' occurs in '{t}'")?
            }
            InferErrorKind::TypeClash {
                left,
                duplicate: Some(l),
                ..
            } => {
                let a = left.display_with(&mut names);
                write!(f, "type error: duplicate label '{l}': '{a}' already has it")?
            }
            InferErrorKind::TypeClash { left, right, .. } => {
                let a = left.display_with(&mut names);
                let b = right.display_with(&mut names);
                write!(f, "type error: cannot unify '{a}' with '{b}'")?
            }
            InferErrorKind::MissingLabel(l) => write!(f, "type error: record lacks label '{l}'")?,
            InferErrorKind::KindMismatch(e) => write!(f, "kind error: {e}")?,
        }
        write!(f, " at {}", self.location)
    }
}

impl core::error::Error for InferError {}

/// Newest binding for `name`.
pub fn lookup_env<'a>(gamma: &'a TypeEnv, name: &str) -> Option<&'a Scheme> {
    gamma.iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

/// Quantifies the variables free in `ty` but not in `gamma`.
pub fn generalize(gamma: &TypeEnv, ty: &Type) -> Scheme {
    let fixed = gamma.free_vars();
    let body = normalize(ty);
    let quantified = body
        .free_vars()
        .into_iter()
        .filter(|v| !fixed.contains(&v.id()))
        .collect();
    Scheme {
        quantified,
        lacks: BTreeMap::new(),
        body,
    }
}

/// Replaces the quantified variables by fresh ones of the same kinds.
pub fn instantiate(scheme: &Scheme, supply: &mut VarSupply) -> Type {
    instantiate_with(scheme, &mut |k| TyVar::new(supply.fresh(), k)).0
}

fn instantiate_with(
    scheme: &Scheme,
    fresh: &mut impl FnMut(Kind) -> TyVar,
) -> (Type, Vec<(TyVar, BTreeSet<Label>)>) {
    if scheme.quantified.is_empty() {
        return (scheme.body.clone(), Vec::new());
    }
    let mut map = BTreeMap::new();
    let mut lacks = Vec::new();
    for q in &scheme.quantified {
        let v = fresh(q.kind.clone());
        if let Some(ls) = scheme.lacks.get(&q.id()) {
            lacks.push((v.clone(), ls.clone()));
        }
        map.insert(q.id(), Type::Var(v));
    }
    let body = scheme
        .body
        .map_vars(&mut |v| map.get(&v.id()).cloned().unwrap_or_else(|| Type::Var(v.clone())));
    (body, lacks)
}

/// Stage one: the constructors used by literals and record forms must
/// have their usual kinds under `env`.
pub fn check_kinds(env: &KindEnv, e: &Expr) -> Result<(), InferError> {
    let star = |name: &str, at: Location| check_con(env, name, Kind::Star, at);
    let rec = |at: Location| check_con(env, "Rec", Kind::arrow(Kind::Row, Kind::Star), at);
    let mut stack = alloc::vec![e];
    while let Some(e) = stack.pop() {
        match &e.kind {
            ExprKind::Var(_) => {}
            ExprKind::IntLit(_) => star("Int", e.location)?,
            ExprKind::StrLit(_) => star("String", e.location)?,
            ExprKind::EmptyRec => rec(e.location)?,
            ExprKind::Lam(_, b) => stack.push(b),
            ExprKind::App(a, b) | ExprKind::Let(_, a, b) | ExprKind::LetRec(_, a, b) => {
                stack.push(b);
                stack.push(a);
            }
            ExprKind::Extend(r, _, v) => {
                rec(e.location)?;
                stack.push(v);
                stack.push(r);
            }
            ExprKind::Select(r, _) => {
                rec(e.location)?;
                stack.push(r);
            }
        }
    }
    Ok(())
}

fn check_con(env: &KindEnv, name: &str, expected: Kind, at: Location) -> Result<(), InferError> {
    let err = |k| InferError {
        kind: InferErrorKind::KindMismatch(k),
        location: at,
    };
    let found = kind_of(env, &Type::con(name)).map_err(err)?;
    if found != expected {
        return Err(err(KindError::Mismatch {
            expected,
            found,
            ty: Type::con(name),
        }));
    }
    Ok(())
}

/// Stage two: algorithm W. Returns the accumulated substitution and the
/// type of `e`, with the substitution already applied.
pub fn infer(
    env: &KindEnv,
    gamma: &TypeEnv,
    e: &Expr,
    supply: &mut VarSupply,
) -> Result<(TypeSubst, Type), InferError> {
    let mut w = W {
        u: Unifier::with_env(env.clone(), supply),
    };
    let ty = w.infer(gamma, e)?;
    let ty = w.u.apply(&ty);
    Ok((w.u.into_subst(), ty))
}

/// Both stages, then generalization over `gamma`.
pub fn infer_scheme(
    env: &KindEnv,
    gamma: &TypeEnv,
    e: &Expr,
    supply: &mut VarSupply,
) -> Result<Scheme, InferError> {
    check_kinds(env, e)?;
    let mut w = W {
        u: Unifier::with_env(env.clone(), supply),
    };
    let ty = w.infer(gamma, e)?;
    Ok(w.generalize(gamma, &ty))
}

struct W<'s> {
    u: Unifier<'s>,
}

impl W<'_> {
    fn unify(&mut self, a: &Type, b: &Type, at: Location) -> Result<(), InferError> {
        self.u.unify(a, b).map_err(|e| self.error(e, at, Some((a, b))))
    }

    fn error(&self, e: UnifyError, at: Location, sides: Option<(&Type, &Type)>) -> InferError {
        let kind = match e {
            UnifyError::Clash(a, b) => InferErrorKind::TypeClash {
                left: self.u.apply(&a),
                right: self.u.apply(&b),
                duplicate: None,
            },
            UnifyError::Occurs(v, t) => InferErrorKind::OccursViolation {
                var: Type::Var(v),
                ty: self.u.apply(&t),
            },
            UnifyError::MissingLabel(l) => InferErrorKind::MissingLabel(l),
            UnifyError::Duplicate(l) => {
                let (left, right) = match sides {
                    Some((a, b)) => (self.u.apply(a), self.u.apply(b)),
                    None => (Type::RowEmpty, Type::RowEmpty),
                };
                InferErrorKind::TypeClash {
                    left,
                    right,
                    duplicate: Some(l),
                }
            }
            UnifyError::KindMismatch {
                expected,
                found,
                ty,
            } => InferErrorKind::KindMismatch(KindError::Mismatch {
                expected,
                found,
                ty,
            }),
        };
        InferError { kind, location: at }
    }

    fn instantiate(&mut self, s: &Scheme, at: Location) -> Result<Type, InferError> {
        let u = &mut self.u;
        let (ty, lacks) = instantiate_with(s, &mut |k| u.fresh(k));
        for (v, labels) in lacks {
            for l in &labels {
                self.u
                    .require_lacks(&Type::Var(v.clone()), l)
                    .map_err(|e| self.error(e, at, None))?;
            }
        }
        Ok(ty)
    }

    fn generalize(&self, gamma: &TypeEnv, ty: &Type) -> Scheme {
        let gamma = gamma.apply(self.u.subst());
        let mut s = generalize(&gamma, &self.u.apply(ty));
        for q in &s.quantified {
            if let Some(ls) = self.u.lacks(q.id()) {
                s.lacks.insert(q.id(), ls.clone());
            }
        }
        s
    }

    fn infer(&mut self, gamma: &TypeEnv, e: &Expr) -> Result<Type, InferError> {
        let at = e.location;
        match &e.kind {
            ExprKind::Var(x) => match lookup_env(gamma, x) {
                Some(s) => {
                    let s = s.clone();
                    self.instantiate(&s, at)
                }
                None => Err(InferError {
                    kind: InferErrorKind::UnboundVariable(x.clone()),
                    location: at,
                }),
            },
            ExprKind::Lam(x, body) => {
                let a = Type::Var(self.u.fresh(Kind::Star));
                let inner = gamma.extended(x.clone(), Scheme::mono(a.clone()));
                let b = self.infer(&inner, body)?;
                Ok(Type::arrow(a, b))
            }
            ExprKind::App(f, arg) => {
                let tf = self.infer(gamma, f)?;
                let ta = self.infer(gamma, arg)?;
                let b = Type::Var(self.u.fresh(Kind::Star));
                self.unify(&tf, &Type::arrow(ta, b.clone()), at)?;
                Ok(b)
            }
            ExprKind::Let(x, bound, body) => {
                let t = self.infer(gamma, bound)?;
                let s = self.generalize(gamma, &t);
                self.infer(&gamma.extended(x.clone(), s), body)
            }
            ExprKind::LetRec(x, bound, body) => {
                let a = Type::Var(self.u.fresh(Kind::Star));
                let inner = gamma.extended(x.clone(), Scheme::mono(a.clone()));
                let t = self.infer(&inner, bound)?;
                self.unify(&a, &t, at)?;
                let s = self.generalize(gamma, &t);
                self.infer(&gamma.extended(x.clone(), s), body)
            }
            ExprKind::IntLit(_) => Ok(Type::int()),
            ExprKind::StrLit(_) => Ok(Type::string()),
            ExprKind::EmptyRec => Ok(Type::rec(Type::RowEmpty)),
            ExprKind::Extend(r, l, v) => {
                let tr = self.infer(gamma, r)?;
                let rho = Type::Var(self.u.fresh(Kind::Row));
                self.unify(&tr, &Type::rec(rho.clone()), at)?;
                let tv = self.infer(gamma, v)?;
                if self.u.require_lacks(&rho, l).is_err() {
                    let left = self.u.apply(&tr);
                    let right = Type::extend(l.clone(), self.u.apply(&tv), Type::RowEmpty);
                    return Err(InferError {
                        kind: InferErrorKind::TypeClash {
                            left,
                            right,
                            duplicate: Some(l.clone()),
                        },
                        location: at,
                    });
                }
                Ok(Type::rec(Type::extend(l.clone(), tv, rho)))
            }
            ExprKind::Select(r, l) => {
                let tr = self.infer(gamma, r)?;
                let a = Type::Var(self.u.fresh(Kind::Star));
                let rho = Type::Var(self.u.fresh(Kind::Row));
                self.u
                    .require_lacks(&rho, l)
                    .map_err(|e| self.error(e, at, None))?;
                self.unify(
                    &tr,
                    &Type::rec(Type::extend(l.clone(), a.clone(), rho)),
                    at,
                )?;
                Ok(a)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn check(src: &str) -> Result<String, InferError> {
        let e = parse_ml(src).unwrap();
        infer_scheme(&KindEnv::builtin(), &TypeEnv::new(), &e, &mut VarSupply::new())
            .map(|s| s.to_string())
    }

    #[test]
    fn identity() {
        assert_eq!(check("\\x. x").unwrap(), "forall a. a -> a");
    }

    #[test]
    fn field_access() {
        assert_eq!(
            check("\\r. r.name").unwrap(),
            "forall a. forall r:row. Rec {name : a | r} -> a"
        );
    }

    #[test]
    fn record_literal() {
        assert_eq!(
            check("{name = \"bob\", age = 3}").unwrap(),
            "Rec {age : Int, name : String}"
        );
        assert_eq!(check("{}").unwrap(), "Rec {}");
    }

    #[test]
    fn let_polymorphism() {
        assert_eq!(check("let id = \\x. x in id id").unwrap(), "forall a. a -> a");
        assert_eq!(
            check("let id = \\x. x in {a = id 1, b = id \"s\"}").unwrap(),
            "Rec {a : Int, b : String}"
        );
    }

    #[test]
    fn self_application_fails_occurs() {
        let e = check("\\f. f f").unwrap_err();
        assert!(matches!(e.kind, InferErrorKind::OccursViolation { .. }));
        assert_eq!(e.location, Location::new(1, 5));
    }

    #[test]
    fn missing_label() {
        let e = check("(\\r. r.name) {age = 3}").unwrap_err();
        assert_eq!(e.kind, InferErrorKind::MissingLabel(Label::new("name")));
        assert_eq!(e.to_string(), "type error: record lacks label 'name' at 1:1");
    }

    #[test]
    fn extension_and_duplicates() {
        assert_eq!(
            check("\\r. {r with a = 1}").unwrap(),
            "forall r:row. Rec r -> Rec {a : Int | r}"
        );
        assert_eq!(
            check("{ {b = 2} with a = 1 }").unwrap(),
            "Rec {a : Int, b : Int}"
        );
        let e = check("{ {a = 2} with a = 1 }").unwrap_err();
        assert!(matches!(
            e.kind,
            InferErrorKind::TypeClash { duplicate: Some(_), .. }
        ));
        assert_eq!(
            e.to_string(),
            "type error: duplicate label 'a': 'Rec {a : Int}' already has it at 1:1"
        );
        let e = check("{a = 1, a = 2}").unwrap_err();
        assert!(matches!(
            e.kind,
            InferErrorKind::TypeClash { duplicate: Some(_), .. }
        ));
    }

    #[test]
    fn lacks_constraints_survive_instantiation() {
        let e = check("let ext = \\r. {r with a = 1} in ext {a = 2}").unwrap_err();
        assert!(matches!(
            e.kind,
            InferErrorKind::TypeClash { duplicate: Some(_), .. }
        ));
        assert_eq!(
            check("let ext = \\r. {r with a = 1} in ext {b = 2}").unwrap(),
            "Rec {a : Int, b : Int}"
        );
    }

    #[test]
    fn letrec_is_monomorphic_inside() {
        assert_eq!(
            check("letrec f = \\x. f x in f").unwrap(),
            "forall a. forall b. a -> b"
        );
        let e = check("letrec f = \\x. f (f 1) \"s\" in f").unwrap_err();
        assert!(matches!(e.kind, InferErrorKind::TypeClash { .. }));
    }

    #[test]
    fn basic_errors() {
        let e = check("\\x. y").unwrap_err();
        assert_eq!(e.kind, InferErrorKind::UnboundVariable("y".into()));
        assert_eq!(e.location, Location::new(1, 5));
        assert_eq!(e.to_string(), "type error: unbound variable 'y' at 1:5");
        let e = check("1 2").unwrap_err();
        assert_eq!(
            e.to_string(),
            "type error: cannot unify 'Int' with 'Int -> a' at 1:1"
        );
    }

    #[test]
    fn redeclared_builtins_are_kind_errors() {
        let mut env = KindEnv::builtin();
        env.declare("Int", Kind::Row);
        let e = parse_ml("\\x. 1").unwrap();
        let err = infer_scheme(&env, &TypeEnv::new(), &e, &mut VarSupply::new()).unwrap_err();
        assert!(err.is_kind_error());
        assert_eq!(err.location, Location::new(1, 5));
        assert_eq!(
            err.to_string(),
            "kind error: expected kind *, found row for 'Int' at 1:5"
        );
    }

    #[test]
    fn generalize_respects_environment() {
        let mut supply = VarSupply::new();
        let a = TyVar::new(supply.fresh(), Kind::Star);
        let b = TyVar::new(supply.fresh(), Kind::Star);
        let gamma = TypeEnv::new().extended("x", Scheme::mono(Type::Var(a.clone())));
        let s = generalize(&gamma, &Type::arrow(Type::Var(a.clone()), Type::Var(b.clone())));
        assert_eq!(s.quantified, [b]);
        assert_eq!(s.free_vars(), [a]);
    }

    #[test]
    fn instantiate_gives_fresh_variables_of_same_kind() {
        let mut supply = VarSupply::new();
        let a = TyVar::new(supply.fresh(), Kind::Star);
        let r = TyVar::new(supply.fresh(), Kind::Row);
        let body = Type::rec(Type::extend(Label::new("l"), Type::Var(a.clone()), Type::Var(r.clone())));
        let s = generalize(&TypeEnv::new(), &body);
        assert_eq!(s.quantified.len(), 2);
        let t1 = instantiate(&s, &mut supply);
        let t2 = instantiate(&s, &mut supply);
        let v1 = t1.free_vars();
        let v2 = t2.free_vars();
        assert_eq!(
            v1.iter().map(|v| v.kind.clone()).collect::<Vec<_>>(),
            [Kind::Star, Kind::Row]
        );
        assert!(v1.iter().all(|v| v.id() != a.id() && v.id() != r.id()));
        assert!(v1.iter().all(|v| v2.iter().all(|w| w.id() != v.id())));
        let mono = Scheme::mono(Type::int());
        assert_eq!(instantiate(&mono, &mut supply), Type::int());
    }

    #[test]
    fn lookup_prefers_newest() {
        let gamma = TypeEnv::new()
            .extended("x", Scheme::mono(Type::int()))
            .extended("x", Scheme::mono(Type::bool()));
        assert_eq!(lookup_env(&gamma, "x").unwrap().body, Type::bool());
        assert!(lookup_env(&gamma, "y").is_none());
        assert_eq!(gamma.iter().next().unwrap().1.body, Type::bool());
    }
}
