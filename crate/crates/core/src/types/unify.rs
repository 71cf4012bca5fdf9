use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use super::{kind_of, Kind, KindEnv, Label, TyVar, Type, TypeSubst};
use crate::term::VarSupply;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyError {
    /// Incompatible type structure.
    Clash(Type, Type),
    /// Binding the variable would make a type (or a row) infinite.
    Occurs(TyVar, Type),
    /// A closed row has no field with this label.
    MissingLabel(Label),
    /// A row variable that must lack this label would receive it.
    Duplicate(Label),
    /// Binding a variable to `ty` would change its kind.
    KindMismatch { expected: Kind, found: Kind, ty: Type },
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = super::TypeNames::new();
        match self {
            UnifyError::Clash(a, b) => write!(
                f,
                "cannot unify '{}' with '{}'",
                a.display_with(&mut names),
                b.display_with(&mut names)
            ),
            UnifyError::Occurs(v, t) => {
                let v = Type::Var(v.clone()).display_with(&mut names);
                write!(f, "'{v}' occurs in '{}'", t.display_with(&mut names))
            }
            UnifyError::MissingLabel(l) => write!(f, "record lacks label '{l}'"),
            UnifyError::Duplicate(l) => write!(f, "record already has label '{l}'"),
            UnifyError::KindMismatch {
                expected,
                found,
                ty,
            } => write!(
                f,
                "expected kind {expected}, found {found} for '{}'",
                ty.display_with(&mut names)
            ),
        }
    }
}

impl core::error::Error for UnifyError {}

/// Incremental unification state: an idempotent substitution plus "lacks"
/// constraints on row variables. Failed calls may leave partial bindings.
pub struct Unifier<'s> {
    subst: TypeSubst,
    lacks: BTreeMap<u32, BTreeSet<Label>>,
    env: KindEnv,
    supply: &'s mut VarSupply,
}

impl<'s> Unifier<'s> {
    pub fn new(supply: &'s mut VarSupply) -> Self {
        Self::with_env(KindEnv::builtin(), supply)
    }

    pub fn with_env(env: KindEnv, supply: &'s mut VarSupply) -> Self {
        Unifier {
            subst: TypeSubst::new(),
            lacks: BTreeMap::new(),
            env,
            supply,
        }
    }

    pub fn subst(&self) -> &TypeSubst {
        &self.subst
    }

    pub fn into_subst(self) -> TypeSubst {
        self.subst
    }

    pub fn apply(&self, ty: &Type) -> Type {
        self.subst.apply(ty)
    }

    pub fn fresh(&mut self, kind: Kind) -> TyVar {
        TyVar::new(self.supply.fresh(), kind)
    }

    pub fn supply(&mut self) -> &mut VarSupply {
        self.supply
    }

    pub fn env(&self) -> &KindEnv {
        &self.env
    }

    /// Labels the (unbound) row variable `id` may never receive.
    pub fn lacks(&self, id: u32) -> Option<&BTreeSet<Label>> {
        self.lacks.get(&id).filter(|s| !s.is_empty())
    }

    /// Requires `row` to have no field `label`, now or after later
    /// bindings.
    pub fn require_lacks(&mut self, row: &Type, label: &Label) -> Result<(), UnifyError> {
        let row = self.apply(row);
        let (fields, tail) = row.row_spine();
        if fields.iter().any(|(l, _)| *l == label) {
            return Err(UnifyError::Duplicate(label.clone()));
        }
        if let Type::Var(v) = tail {
            self.lacks.entry(v.id()).or_default().insert(label.clone());
        }
        Ok(())
    }

    pub fn unify(&mut self, a: &Type, b: &Type) -> Result<(), UnifyError> {
        let a = self.apply(a);
        let b = self.apply(b);
        self.unify_applied(&a, &b)
    }

    fn unify_applied(&mut self, a: &Type, b: &Type) -> Result<(), UnifyError> {
        match (a, b) {
            (Type::Var(x), Type::Var(y)) if x.id() == y.id() => Ok(()),
            (Type::Var(x), t) | (t, Type::Var(x)) => self.bind(x, t),
            (Type::Con(c), Type::Con(d)) if c == d => Ok(()),
            (Type::App(f, x), Type::App(g, y)) | (Type::Arrow(f, x), Type::Arrow(g, y)) => {
                self.unify_applied(f, g)?;
                self.unify(x, y)
            }
            (Type::RowEmpty | Type::RowExtend(..), Type::RowEmpty | Type::RowExtend(..)) => {
                self.unify_rows(a, b)
            }
            _ => Err(UnifyError::Clash(a.clone(), b.clone())),
        }
    }

    fn unify_rows(&mut self, r1: &Type, r2: &Type) -> Result<(), UnifyError> {
        let (f1, t1) = r1.row_spine();
        let (f2, t2) = r2.row_spine();
        let m1: BTreeMap<&Label, &Type> = f1.iter().copied().collect();
        let m2: BTreeMap<&Label, &Type> = f2.iter().copied().collect();

        let common: Vec<&Label> = m1.keys().filter(|l| m2.contains_key(*l)).copied().collect();
        for l in &common {
            self.unify(m1[l], m2[l])?;
        }
        let only1: Vec<(&Label, &Type)> = m1
            .iter()
            .filter(|(l, _)| !m2.contains_key(*l))
            .map(|(l, t)| (*l, *t))
            .collect();
        let only2: Vec<(&Label, &Type)> = m2
            .iter()
            .filter(|(l, _)| !m1.contains_key(*l))
            .map(|(l, t)| (*l, *t))
            .collect();

        let rest1 = self.apply(&build_row(&only1, t1));
        let rest2 = self.apply(&build_row(&only2, t2));
        if !common.is_empty() {
            // Field unification may have bound a tail; start over on what is left.
            return self.unify_rest(&rest1, &rest2);
        }
        self.unify_residues(&rest1, &rest2)
    }

    fn unify_rest(&mut self, r1: &Type, r2: &Type) -> Result<(), UnifyError> {
        match (r1, r2) {
            (Type::RowExtend(..), Type::RowExtend(..)) => self.unify_rows(r1, r2),
            _ => self.unify_applied(r1, r2),
        }
    }

    /// Rows with disjoint labels.
    fn unify_residues(&mut self, r1: &Type, r2: &Type) -> Result<(), UnifyError> {
        let (f1, t1) = r1.row_spine();
        let (f2, t2) = r2.row_spine();
        let missing_in = |fields: &[(&Label, &Type)]| UnifyError::MissingLabel(fields[0].0.clone());
        match (f1.is_empty(), f2.is_empty()) {
            (true, true) => {
                return match (t1, t2) {
                    (Type::Var(v), t) | (t, Type::Var(v)) => self.bind(v, t),
                    _ => Ok(()),
                }
            }
            (true, false) => {
                return match t1 {
                    Type::Var(v) => self.bind(v, r2),
                    _ => Err(missing_in(&f2)),
                }
            }
            (false, true) => {
                return match t2 {
                    Type::Var(v) => self.bind(v, r1),
                    _ => Err(missing_in(&f1)),
                }
            }
            (false, false) => {}
        }
        let v1 = match t1 {
            Type::Var(v) => v.clone(),
            _ => return Err(missing_in(&f2)),
        };
        let v2 = match t2 {
            Type::Var(v) => v.clone(),
            _ => return Err(missing_in(&f1)),
        };
        if v1.id() == v2.id() {
            return Err(UnifyError::Occurs(v1, r2.clone()));
        }
        let rho = self.fresh(Kind::Row);
        let tail = Type::Var(rho);
        self.bind(&v1, &build_row(&f2, &tail))?;
        let r1_rest = self.apply(&build_row(&f1, &tail));
        let v2_now = self.apply(&Type::Var(v2));
        self.unify_applied(&v2_now, &r1_rest)
    }

    fn bind(&mut self, v: &TyVar, t: &Type) -> Result<(), UnifyError> {
        if let Type::Var(w) = t {
            if w.id() == v.id() {
                return Ok(());
            }
        }
        if t.occurs(v.id()) {
            return Err(UnifyError::Occurs(v.clone(), t.clone()));
        }
        let found = kind_of(&self.env, t).unwrap_or_else(|_| shallow_kind(t));
        if found != v.kind {
            return Err(UnifyError::KindMismatch {
                expected: v.kind.clone(),
                found,
                ty: t.clone(),
            });
        }
        if let Some(labels) = self.lacks.remove(&v.id()) {
            for l in &labels {
                self.require_lacks(t, l)?;
            }
        }
        self.subst.bind(v.clone(), t.clone());
        Ok(())
    }
}

fn shallow_kind(t: &Type) -> Kind {
    match t {
        Type::Var(v) => v.kind.clone(),
        Type::RowEmpty | Type::RowExtend(..) => Kind::Row,
        _ => Kind::Star,
    }
}

fn build_row(fields: &[(&Label, &Type)], tail: &Type) -> Type {
    let mut out = tail.clone();
    for (l, t) in fields.iter().rev() {
        out = Type::extend((*l).clone(), (*t).clone(), out);
    }
    out
}

/// Most general unifier of two rows, up to field order.
pub fn row_unify(r1: &Type, r2: &Type, supply: &mut VarSupply) -> Result<TypeSubst, UnifyError> {
    type_unify(r1, r2, supply)
}

/// Most general unifier of two types; rows are compared up to field order.
pub fn type_unify(a: &Type, b: &Type, supply: &mut VarSupply) -> Result<TypeSubst, UnifyError> {
    let mut u = Unifier::new(supply);
    u.unify(a, b)?;
    Ok(u.into_subst())
}
