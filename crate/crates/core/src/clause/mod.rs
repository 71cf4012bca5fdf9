//! Horn clauses, programs, and the `.lp` clause language.
//!
//! ```text
//! nat(0).
//! nat(s(X)) :- nat(X).
//! co stream(X).          % co-fact: a unit clause read coinductively
//! ```

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::Location;
use crate::term::{Symbol, Term, Var, VarNames, VarSupply};

mod parse;

pub use parse::{parse_goal, parse_goal_with, parse_program};

#[derive(Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: Symbol,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(name: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: Symbol::new(name, args.len()),
            args,
        }
    }

    /// The atom as a term with the predicate as its functor.
    pub fn to_term(&self) -> Term {
        Term::App(self.predicate.clone(), self.args.clone())
    }

    pub fn from_term(t: Term) -> Option<Atom> {
        match t {
            Term::App(predicate, args) => Some(Atom { predicate, args }),
            Term::Var(_) => None,
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for a in &self.args {
            a.collect_vars(&mut out, &mut seen);
        }
        out
    }

    pub fn display_with(&self, names: &mut VarNames) -> String {
        self.to_term().display_with(names)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_term())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// Variables of a conjunction of atoms in first-occurrence order.
pub fn goal_vars(goal: &[Atom]) -> Vec<Var> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for atom in goal {
        for a in &atom.args {
            a.collect_vars(&mut out, &mut seen);
        }
    }
    out
}

/// A definite clause. Co-facts are always unit clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornClause {
    head: Atom,
    body: Vec<Atom>,
    is_cofact: bool,
    source: Location,
}

impl HornClause {
    pub fn new(head: Atom, body: Vec<Atom>, source: Location) -> Self {
        HornClause {
            head,
            body,
            is_cofact: false,
            source,
        }
    }

    pub fn fact(head: Atom, source: Location) -> Self {
        Self::new(head, Vec::new(), source)
    }

    pub fn cofact(head: Atom, source: Location) -> Self {
        HornClause {
            head,
            body: Vec::new(),
            is_cofact: true,
            source,
        }
    }

    pub fn head(&self) -> &Atom {
        &self.head
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn is_cofact(&self) -> bool {
        self.is_cofact
    }

    pub fn source(&self) -> Location {
        self.source
    }

    /// Head and body variables in first-occurrence order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for atom in core::iter::once(&self.head).chain(&self.body) {
            for a in &atom.args {
                a.collect_vars(&mut out, &mut seen);
            }
        }
        out
    }

    /// `clause(head, body...)` as a single term, convenient for variant
    /// checks over whole clauses.
    pub fn to_term(&self) -> Term {
        let mut parts = Vec::with_capacity(self.body.len() + 1);
        parts.push(self.head.to_term());
        parts.extend(self.body.iter().map(Atom::to_term));
        Term::app(if self.is_cofact { "co" } else { "clause" }, parts)
    }

    pub fn display_with(&self, names: &mut VarNames) -> String {
        let mut out = String::new();
        if self.is_cofact {
            out.push_str("co ");
        }
        out.push_str(&self.head.display_with(names));
        if !self.body.is_empty() {
            out.push_str(" :- ");
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&b.display_with(names));
            }
        }
        out.push('.');
        out
    }
}

impl fmt::Display for HornClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&mut VarNames::new()))
    }
}

/// Replaces every clause variable by a fresh one from `supply`, keeping the
/// sharing pattern and display hints.
pub fn rename_apart(clause: &HornClause, supply: &mut VarSupply) -> HornClause {
    let mut map: BTreeMap<Var, Var> = BTreeMap::new();
    let mut rename = |t: &Term| {
        t.map_vars(&mut |v| {
            let fresh = map.entry(v.clone()).or_insert_with(|| match v.hint() {
                Some(h) => supply.fresh_named(h),
                None => supply.fresh(),
            });
            Term::Var(fresh.clone())
        })
    };
    let mut rename_atom = |a: &Atom| Atom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(&mut rename).collect(),
    };
    let head = rename_atom(&clause.head);
    let body = clause.body.iter().map(&mut rename_atom).collect();
    HornClause {
        head,
        body,
        is_cofact: clause.is_cofact,
        source: clause.source,
    }
}

/// Clauses in source order plus a predicate index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    clauses: Vec<HornClause>,
    index: BTreeMap<Symbol, Vec<usize>>,
}

impl Program {
    pub fn new(clauses: Vec<HornClause>) -> Self {
        let mut index: BTreeMap<Symbol, Vec<usize>> = BTreeMap::new();
        for (i, c) in clauses.iter().enumerate() {
            index.entry(c.head.predicate.clone()).or_default().push(i);
        }
        Program { clauses, index }
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Positions of the clauses defining `predicate`, in source order.
    pub fn positions(&self, predicate: &Symbol) -> &[usize] {
        self.index.get(predicate).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn clauses_for<'a>(
        &'a self,
        predicate: &Symbol,
    ) -> impl Iterator<Item = (usize, &'a HornClause)> + 'a {
        self.positions(predicate).iter().map(move |&i| (i, &self.clauses[i]))
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Symbol> {
        self.index.keys()
    }

    /// Function symbols used in clause arguments (not predicates).
    pub fn functors(&self) -> BTreeSet<Symbol> {
        fn walk(t: &Term, out: &mut BTreeSet<Symbol>) {
            if let Term::App(f, args) = t {
                out.insert(f.clone());
                for a in args {
                    walk(a, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            for atom in core::iter::once(&c.head).chain(&c.body) {
                for a in &atom.args {
                    walk(a, &mut out);
                }
            }
        }
        out
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
