//! Terms, variables and substitutions.
//!
//! A [`Term`] is always a finite tree. Cyclic (rational) terms only exist
//! through substitutions whose bindings refer back to themselves; they are
//! materialised as [`RationalTerm`] graphs when they need to be inspected or
//! printed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

mod rational;
mod unify;

pub use rational::{Node, NodeId, RationalTerm};
pub use unify::{is_variant, unify_finite, unify_rational};
pub(crate) use unify::{unify_finite_in, unify_rational_in};

/// A function or predicate symbol. `(name, arity)` identifies it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    /// # Panics
    ///
    /// Panics if `name` is empty.
    pub fn new(name: impl Into<Arc<str>>, arity: usize) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "symbol names are non-empty");
        Symbol { name, arity }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Marker placed where [`RationalTerm::unfold`] stops expanding.
    pub fn elided() -> Self {
        Symbol::new("...", 0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// A logic variable. Identity is the numeric id alone; the hint only
/// remembers the source name for printing.
#[derive(Clone)]
pub struct Var {
    id: u32,
    hint: Option<Arc<str>>,
}

impl Var {
    pub fn new(id: u32) -> Self {
        Var { id, hint: None }
    }

    pub fn named(id: u32, hint: impl Into<Arc<str>>) -> Self {
        Var {
            id,
            hint: Some(hint.into()),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn hint(&self) -> Option<&str> {
        self.hint.as_deref()
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hint {
            Some(h) => write!(f, "{}#{}", h, self.id),
            None => write!(f, "_{}", self.id),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hint {
            Some(h) => f.write_str(h),
            None => write!(f, "_{}", self.id),
        }
    }
}

/// Monotone source of fresh variables. Ids are never handed out twice.
#[derive(Clone, Debug, Default)]
pub struct VarSupply {
    next: u32,
}

impl VarSupply {
    pub fn new() -> Self {
        VarSupply { next: 0 }
    }

    pub fn starting_at(next: u32) -> Self {
        VarSupply { next }
    }

    /// The id the next call to [`fresh`](Self::fresh) will use.
    pub fn peek(&self) -> u32 {
        self.next
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var::new(self.next);
        self.next = self.next.checked_add(1).expect("variable ids exhausted");
        v
    }

    pub fn fresh_named(&mut self, hint: impl Into<Arc<str>>) -> Var {
        let mut v = self.fresh();
        v.hint = Some(hint.into());
        v
    }

    /// Makes sure future ids are strictly greater than `id`.
    pub fn reserve_past(&mut self, id: u32) {
        if self.next <= id {
            self.next = id + 1;
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn constant(name: &str) -> Self {
        Term::App(Symbol::new(name, 0), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Self {
        Term::App(Symbol::new(name, args.len()), args)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Number of nested applications; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Distinct variables in first-occurrence (left-to-right) order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Var>, seen: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out, seen);
                }
            }
        }
    }

    /// Renders the term, naming variables through `names`.
    pub fn display_with(&self, names: &mut VarNames) -> String {
        let mut out = String::new();
        self.write_with(names, &mut out);
        out
    }

    fn write_with(&self, names: &mut VarNames, out: &mut String) {
        match self {
            Term::Var(v) => out.push_str(names.name(v)),
            Term::App(f, args) => {
                out.push_str(f.name());
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        a.write_with(names, out);
                    }
                    out.push(')');
                }
            }
        }
    }

    pub(crate) fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v:?}"),
            Term::App(s, args) => {
                f.write_str(s.name())?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a:?}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                f.write_str(s.name())?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// Assigns stable printed names to variables.
///
/// Variables with a source hint keep it unless the hint is already
/// taken by a different variable; everything else becomes `_1`, `_2`, ...
/// in first-request order.
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    names: BTreeMap<Var, String>,
    taken: BTreeSet<String>,
    anonymous: usize,
}

impl VarNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn name(&mut self, v: &Var) -> &str {
        if !self.names.contains_key(v) {
            let name = match v.hint() {
                Some(h) if !h.starts_with('_') && !self.taken.contains(h) => h.to_string(),
                _ => self.next_anonymous(),
            };
            self.taken.insert(name.clone());
            self.names.insert(v.clone(), name);
        }
        &self.names[v]
    }

    fn next_anonymous(&mut self) -> String {
        loop {
            self.anonymous += 1;
            let candidate = format!("_{}", self.anonymous);
            if !self.taken.contains(&candidate) {
                return candidate;
            }
        }
    }

    pub(crate) fn is_taken(&self, name: &str) -> bool {
        self.taken.contains(name)
    }
}

/// Read/write access to variable bindings, shared by [`Substitution`] and
/// the engine's trailed binding store.
pub(crate) trait Bindings {
    fn lookup(&self, v: &Var) -> Option<&Term>;
    fn bind(&mut self, v: Var, t: Term);
}

/// Follows variable bindings until an unbound variable or an application.
pub(crate) fn walk<'a, B: Bindings + ?Sized>(b: &'a B, mut t: &'a Term) -> &'a Term {
    while let Term::Var(v) = t {
        match b.lookup(v) {
            Some(next) => t = next,
            None => break,
        }
    }
    t
}

/// Finite mapping from variables to terms.
///
/// Results of [`unify_finite`] are idempotent. Results of
/// [`unify_rational`] are triangular and may be cyclic through an
/// application; inspect those with [`RationalTerm::resolve`].
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(v, t);
        s
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    /// Raw insertion without normalisation.
    pub fn insert(&mut self, v: Var, t: Term) {
        self.map.insert(v, t);
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    /// Replaces bound variables recursively until no bound variable is
    /// left. A variable met again while its own binding is being expanded is
    /// left in place, so cyclic bindings terminate (use
    /// [`RationalTerm::resolve`] to see them in full).
    pub fn apply(&self, t: &Term) -> Term {
        let mut expanding = Vec::new();
        self.apply_guarded(t, &mut expanding)
    }

    fn apply_guarded(&self, t: &Term, expanding: &mut Vec<Var>) -> Term {
        match t {
            Term::Var(v) => match self.map.get(v) {
                Some(b) if !expanding.contains(v) => {
                    expanding.push(v.clone());
                    let out = self.apply_guarded(b, expanding);
                    expanding.pop();
                    out
                }
                _ => t.clone(),
            },
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| self.apply_guarded(a, expanding)).collect(),
            ),
        }
    }

    /// Rewrites every binding to its fully applied form. For acyclic
    /// substitutions the result is idempotent.
    pub fn normalized(&self) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .map(|(v, t)| (v.clone(), self.apply(t)))
                .filter(|(v, t)| t.as_var() != Some(v))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.values().all(|t| self.apply(t) == *t)
    }

    /// Keeps only the bindings of `vars`.
    pub fn restricted_to<'a>(&self, vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
        let keep: BTreeSet<&Var> = vars.into_iter().collect();
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }
}

impl Bindings for Substitution {
    fn lookup(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    fn bind(&mut self, v: Var, t: Term) {
        self.map.insert(v, t);
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v:?} -> {t:?}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn x() -> Var {
        Var::named(0, "x")
    }
    fn y() -> Var {
        Var::named(1, "y")
    }

    #[test]
    fn empty_substitution_is_identity() {
        let t = Term::app("nat", vec![Term::Var(x())]);
        assert_eq!(Substitution::new().apply(&t), t);
    }

    #[test]
    fn single_binding_replaces_variable() {
        let t = Term::app("nat", vec![Term::Var(x())]);
        let s = Substitution::singleton(x(), Term::constant("0"));
        assert_eq!(s.apply(&t).to_string(), "nat(0)");
    }

    #[test]
    fn two_binding_chain_applies_to_fixpoint() {
        let s: Substitution = [
            (x(), Term::app("s", vec![Term::Var(y())])),
            (y(), Term::constant("0")),
        ]
        .into_iter()
        .collect();
        // Oracle: compose by hand, x ↦ s(y)·{y ↦ 0} = s(0).
        assert_eq!(s.apply(&Term::Var(x())).to_string(), "s(0)");
        let n = s.normalized();
        assert!(n.is_idempotent());
        assert_eq!(n.get(&x()).unwrap().to_string(), "s(0)");
    }

    #[test]
    fn cyclic_apply_terminates() {
        let s = Substitution::singleton(x(), Term::app("f", vec![Term::Var(x())]));
        assert_eq!(s.apply(&Term::Var(x())).to_string(), "f(x)");
    }

    #[test]
    fn names_avoid_collisions() {
        let mut names = VarNames::new();
        assert_eq!(names.name(&Var::named(3, "X")), "X");
        assert_eq!(names.name(&Var::named(4, "X")), "_1");
        assert_eq!(names.name(&Var::new(9)), "_2");
        assert_eq!(names.name(&Var::named(3, "X")), "X");
    }

    #[test]
    fn depth_counts_nested_applications() {
        let t = Term::app("s", vec![Term::app("s", vec![Term::constant("0")])]);
        assert_eq!(t.depth(), 2);
        assert_eq!(Term::constant("0").depth(), 0);
    }
}
