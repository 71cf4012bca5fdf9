//! Bottom-up least fixed point over a bounded Herbrand base.

use std::collections::{BTreeMap, BTreeSet};

use rowhorn_core::term::{Symbol, Term, Var};
use rowhorn_core::Program;

/// Symbol levels in a ground term; constants count as one.
pub fn height(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(height).max().unwrap_or(0),
    }
}

/// All ground terms over `functors` with height at most `max`.
pub fn universe(functors: &[Symbol], max: usize) -> Vec<Term> {
    let mut all: Vec<Term> = Vec::new();
    for h in 1..=max {
        let mut fresh = Vec::new();
        for f in functors {
            if f.arity() == 0 {
                if h == 1 {
                    fresh.push(Term::constant(f.name()));
                }
                continue;
            }
            if h == 1 {
                continue;
            }
            // Arguments below height h, at least one exactly h - 1.
            let below = &all;
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..f.arity() {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        below.iter().map(move |a| {
                            let mut t = t.clone();
                            t.push(a.clone());
                            t
                        })
                    })
                    .collect();
            }
            for args in tuples {
                if args.iter().any(|a| height(a) == h - 1) {
                    fresh.push(Term::app(f.name(), args));
                }
            }
        }
        all.extend(fresh);
    }
    all
}

fn matches(pattern: &Term, fact: &Term, env: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, fact) {
        (Term::Var(v), _) => match env.get(v) {
            Some(bound) => bound == fact,
            None => {
                env.insert(v.clone(), fact.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| matches(x, y, env))
        }
        _ => false,
    }
}

fn instantiate(t: &Term, env: &BTreeMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::app(f.name(), args.iter().map(|a| instantiate(a, env)).collect()),
    }
}

fn args_fit(atom: &Term, max: usize) -> bool {
    match atom {
        Term::App(_, args) => args.iter().all(|a| height(a) <= max),
        Term::Var(_) => false,
    }
}

/// Least model of `program` restricted to atoms whose arguments have height
/// at most `max`. Head variables that the body leaves unbound range over
/// `universe`.
pub fn least_model(program: &Program, universe: &[Term], max: usize) -> BTreeSet<Term> {
    let mut model: BTreeSet<Term> = BTreeSet::new();
    loop {
        let mut added = false;
        for clause in program.clauses() {
            let mut envs = vec![BTreeMap::new()];
            for atom in clause.body() {
                let pattern = atom.to_term();
                let mut next = Vec::new();
                for env in &envs {
                    for fact in &model {
                        let mut e = env.clone();
                        if matches(&pattern, fact, &mut e) {
                            next.push(e);
                        }
                    }
                }
                envs = next;
            }
            let head = clause.head().to_term();
            for env in envs {
                let mut pending = vec![env];
                for v in head.vars() {
                    pending = pending
                        .into_iter()
                        .flat_map(|e| {
                            if e.contains_key(&v) {
                                vec![e]
                            } else {
                                universe
                                    .iter()
                                    .map(|u| {
                                        let mut e = e.clone();
                                        e.insert(v.clone(), u.clone());
                                        e
                                    })
                                    .collect()
                            }
                        })
                        .collect();
                }
                for e in pending {
                    let fact = instantiate(&head, &e);
                    if args_fit(&fact, max) && model.insert(fact) {
                        added = true;
                    }
                }
            }
        }
        if !added {
            return model;
        }
    }
}

/// Every atom `p(t1, ..., tn)` for the program's predicates over `universe`.
pub fn base(program: &Program, universe: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for p in program.predicates() {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for _ in 0..p.arity() {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    universe.iter().map(move |a| {
                        let mut t = t.clone();
                        t.push(a.clone());
                        t
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|args| Term::app(p.name(), args)));
    }
    out
}
