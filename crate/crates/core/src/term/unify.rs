//! Finite (occurs-checked) and rational-tree unification, and variant checks.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{walk, Bindings, Substitution, Term, Var};

/// Most general unifier over finite trees. The occurs check is always on.
///
/// The returned substitution is idempotent.
pub fn unify_finite(t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if unify_finite_in(&mut s, t1, t2) {
        Some(s.normalized())
    } else {
        None
    }
}

/// Unifier over rational trees: no occurs check, so `X = f(X)` succeeds and
/// binds `X` cyclically. Fails only on a symbol clash.
///
/// The result is triangular and possibly cyclic.
pub fn unify_rational(t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if unify_rational_in(&mut s, t1, t2) {
        Some(s)
    } else {
        None
    }
}

fn occurs<B: Bindings + ?Sized>(b: &B, v: &Var, t: &Term) -> bool {
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        match walk(b, t) {
            Term::Var(w) => {
                if w == v {
                    return true;
                }
            }
            Term::App(_, args) => stack.extend(args.iter()),
        }
    }
    false
}

/// Extends `b` with an occurs-checked unifier of `t1` and `t2`. On failure
/// `b` may hold partial bindings; callers roll back.
pub(crate) fn unify_finite_in<B: Bindings + ?Sized>(b: &mut B, t1: &Term, t2: &Term) -> bool {
    let mut stack = vec![(t1.clone(), t2.clone())];
    while let Some((l, r)) = stack.pop() {
        let l = walk(b, &l).clone();
        let r = walk(b, &r).clone();
        match (l, r) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if occurs(b, &x, &t) {
                    return false;
                }
                b.bind(x, t);
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g {
                    return false;
                }
                stack.extend(xs.into_iter().zip(ys));
            }
        }
    }
    true
}

/// Dereferences `t`, also reporting the last variable on the chain when the
/// chain ends in an application. That variable stands for the shared node.
fn resolve<B: Bindings + ?Sized>(b: &B, t: &Term) -> (Option<Var>, Term) {
    let mut last = None;
    let mut cur = t;
    while let Term::Var(v) = cur {
        match b.lookup(v) {
            Some(next) => {
                last = Some(v.clone());
                cur = next;
            }
            None => return (None, cur.clone()),
        }
    }
    (last, cur.clone())
}

/// Extends `b` with a rational-tree unifier of `t1` and `t2`.
///
/// When both sides are variables bound to applications, the two nodes are
/// merged (one variable is re-pointed at the other) before their arguments
/// are compared. When only one side is such a variable, the pair is
/// remembered and assumed equal if it comes up again. Every cycle passes
/// through a bound variable and there are finitely many such pairs, so the
/// loop terminates.
pub(crate) fn unify_rational_in<B: Bindings + ?Sized>(b: &mut B, t1: &Term, t2: &Term) -> bool {
    let mut stack = vec![(t1.clone(), t2.clone())];
    let mut assumed: BTreeSet<(Var, Term)> = BTreeSet::new();
    while let Some((l, r)) = stack.pop() {
        let (lv, lt) = resolve(b, &l);
        let (rv, rt) = resolve(b, &r);
        match (lt, rt) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), t) | (t, Term::Var(x)) => b.bind(x, t),
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g {
                    return false;
                }
                match (lv, rv) {
                    (Some(u), Some(w)) => {
                        if u == w {
                            continue;
                        }
                        b.bind(u, Term::Var(w));
                    }
                    (Some(u), None) => {
                        if !assumed.insert((u, Term::App(g.clone(), ys.clone()))) {
                            continue;
                        }
                    }
                    (None, Some(w)) => {
                        if !assumed.insert((w, Term::App(f.clone(), xs.clone()))) {
                            continue;
                        }
                    }
                    (None, None) => {}
                }
                stack.extend(xs.into_iter().zip(ys));
            }
        }
    }
    true
}

/// True iff a bijective renaming of variables carries `t1` onto `t2`.
pub fn is_variant(t1: &Term, t2: &Term) -> bool {
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    variant_in(t1, t2, &mut forward, &mut backward)
}

pub(crate) fn variant_in<'a>(
    t1: &'a Term,
    t2: &'a Term,
    forward: &mut BTreeMap<&'a Var, &'a Var>,
    backward: &mut BTreeMap<&'a Var, &'a Var>,
) -> bool {
    let mut stack: Vec<(&Term, &Term)> = vec![(t1, t2)];
    while let Some((a, b)) = stack.pop() {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                match (forward.get(x), backward.get(y)) {
                    (None, None) => {
                        forward.insert(x, y);
                        backward.insert(y, x);
                    }
                    (Some(fx), Some(by)) if *fx == y && *by == x => {}
                    _ => return false,
                }
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g {
                    return false;
                }
                stack.extend(xs.iter().zip(ys.iter()));
            }
            _ => return false,
        }
    }
    true
}
