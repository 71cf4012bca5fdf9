//! SLD resolution over a [`Program`].
//!
//! Search is depth-first and left-to-right with chronological backtracking.
//! Clauses are tried in source order, each renamed apart first. The budget
//! is counted in resolution steps along the current branch: a branch that
//! reaches it is abandoned and the search reports
//! [`SearchStatus::BudgetExceeded`] instead of plain failure.
//!
//! In coinductive mode two success rules are tried before clauses:
//!
//! 1. loop closure: the goal unifies, as a rational tree, with an ancestor
//!    atom of the same predicate on its own branch (nearest first);
//! 2. co-fact closure: the goal unifies with a co-fact head.
//!
//! Every unification in coinductive mode is rational; inductive mode always
//! runs the occurs check. Co-facts are ignored in inductive mode.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroUsize;

use crate::clause::{goal_vars, rename_apart, Atom, HornClause, Program};
use crate::term::{
    unify_finite_in, unify_rational_in, Bindings, RationalTerm, Substitution, Term, Var, VarNames,
    VarSupply,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Inductive,
    Coinductive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Maximum resolution steps on one branch.
    pub depth_limit: NonZeroUsize,
    /// `None` means unbounded.
    pub max_solutions: Option<NonZeroUsize>,
    pub trace: bool,
}

impl EngineConfig {
    pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

    pub fn inductive() -> Self {
        EngineConfig {
            mode: Mode::Inductive,
            depth_limit: NonZeroUsize::new(Self::DEFAULT_DEPTH_LIMIT).unwrap(),
            max_solutions: None,
            trace: false,
        }
    }

    pub fn coinductive() -> Self {
        EngineConfig {
            mode: Mode::Coinductive,
            ..Self::inductive()
        }
    }

    /// # Panics
    ///
    /// Panics if `limit` is zero.
    pub fn with_depth_limit(mut self, limit: usize) -> Self {
        self.depth_limit = NonZeroUsize::new(limit).expect("depth limit must be at least 1");
        self
    }

    /// `0` means unbounded.
    pub fn with_max_solutions(mut self, n: usize) -> Self {
        self.max_solutions = NonZeroUsize::new(n);
        self
    }

    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self::inductive()
    }
}

/// How a goal was closed in a derivation. Clause positions are 0-based
/// indices into [`Program::clauses`]; they print 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Clause(usize),
    Loop { ancestor_depth: usize },
    CoFact(usize),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Clause(k) => write!(f, "clause#{}", k + 1),
            Rule::Loop { ancestor_depth } => write!(f, "loop@depth {ancestor_depth}"),
            Rule::CoFact(k) => write!(f, "cofact#{}", k + 1),
        }
    }
}

/// One resolution step on the successful branch, with every term resolved
/// under the final answer bindings.
#[derive(Clone, Debug)]
pub struct DerivationStep {
    /// Tree depth of the goal; query atoms are at depth 0.
    pub depth: usize,
    pub goal: RationalTerm,
    pub rule: Rule,
    /// Step that introduced this goal, if it was not a query atom.
    pub parent: Option<usize>,
    /// For loop closures, the step that resolved the ancestor.
    pub ancestor_step: Option<usize>,
    /// For clause and co-fact steps: the renamed clause that was used, and
    /// its head and body under the final bindings.
    pub instance: Option<ClauseInstance>,
}

#[derive(Clone, Debug)]
pub struct ClauseInstance {
    pub renamed: HornClause,
    pub head: RationalTerm,
    pub body: Vec<RationalTerm>,
}

/// A node of the resolved branch's derivation tree.
#[derive(Clone, Debug)]
pub struct DerivationNode {
    pub goal: RationalTerm,
    pub rule: Rule,
    pub children: Vec<DerivationNode>,
}

#[derive(Clone, Debug, Default)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl Derivation {
    /// One tree per query atom.
    pub fn trees(&self) -> Vec<DerivationNode> {
        fn build(d: &Derivation, i: usize) -> DerivationNode {
            let s = &d.steps[i];
            let children = d
                .steps
                .iter()
                .enumerate()
                .filter(|(_, c)| c.parent == Some(i))
                .map(|(j, _)| build(d, j))
                .collect();
            DerivationNode {
                goal: s.goal.clone(),
                rule: s.rule,
                children,
            }
        }
        (0..self.steps.len())
            .filter(|&i| self.steps[i].parent.is_none())
            .map(|i| build(self, i))
            .collect()
    }

    /// Trace lines `depth  goal  ⊢ rule`, one per step.
    pub fn lines(&self, names: &mut VarNames) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| {
                alloc::format!(
                    "{}  {}  ⊢ {}",
                    s.depth,
                    s.goal.minimized().display_with(names),
                    s.rule
                )
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Every query variable, in first-occurrence order, with its value.
    pub bindings: Vec<(Var, RationalTerm)>,
    /// Whether loop or co-fact closure was used.
    pub coinductive: bool,
    /// Resolution steps on the branch.
    pub steps: usize,
    pub derivation: Option<Derivation>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Option<&RationalTerm> {
        self.bindings
            .iter()
            .find(|(v, _)| v.hint() == Some(name))
            .map(|(_, t)| t)
    }

    /// The answer as an idempotent substitution, when no binding is cyclic.
    /// Variables bound to themselves are left out.
    pub fn finite_bindings(&self) -> Option<Substitution> {
        let mut s = Substitution::new();
        for (v, t) in &self.bindings {
            let t = t.to_term()?;
            if t.as_var() != Some(v) {
                s.insert(v.clone(), t);
            }
        }
        Some(s)
    }

    /// `(name, printed value)` for each query variable that did not stay
    /// unbound. Cyclic values are minimised and printed in μ-notation.
    pub fn render(&self, names: &mut VarNames) -> Vec<(String, String)> {
        for (v, _) in &self.bindings {
            names.name(v);
        }
        let mut out = Vec::new();
        for (v, t) in &self.bindings {
            let m = t.minimized();
            if let crate::term::Node::Var(w) = m.node(m.root()) {
                if w == v {
                    continue;
                }
            }
            let name = String::from(names.name(v));
            out.push((name, m.display_with(names)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// More solutions may follow.
    Running,
    /// The whole search space was explored; no branch hit the budget.
    Exhausted,
    /// Search ended, but at least one branch was cut by the budget.
    BudgetExceeded,
    /// `max_solutions` answers were produced.
    SolutionLimit,
}

/// Inductive or coinductive resolution, as selected by `config.mode`.
pub fn solve<'p>(program: &'p Program, goal: &[Atom], config: EngineConfig) -> Solutions<'p> {
    Solutions::new(program, goal, config)
}

/// Coinductive resolution regardless of `config.mode`.
pub fn solve_coinductive<'p>(
    program: &'p Program,
    goal: &[Atom],
    config: EngineConfig,
) -> Solutions<'p> {
    Solutions::new(
        program,
        goal,
        EngineConfig {
            mode: Mode::Coinductive,
            ..config
        },
    )
}

/// Variable bindings with an undo trail.
#[derive(Default)]
struct Store {
    slots: Vec<Option<Term>>,
    trail: Vec<(Var, Option<Term>)>,
}

impl Store {
    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().unwrap();
            self.slots[v.id() as usize] = old;
        }
    }
}

impl Bindings for Store {
    fn lookup(&self, v: &Var) -> Option<&Term> {
        self.slots.get(v.id() as usize).and_then(Option::as_ref)
    }

    fn bind(&mut self, v: Var, t: Term) {
        let i = v.id() as usize;
        if self.slots.len() <= i {
            self.slots.resize(i + 1, None);
        }
        let old = self.slots[i].replace(t);
        self.trail.push((v, old));
    }
}

/// Persistent singly linked list, shared between choice points.
struct Cons<T> {
    head: T,
    tail: List<T>,
}

type List<T> = Option<Arc<Cons<T>>>;

fn cons<T>(head: T, tail: List<T>) -> List<T> {
    Some(Arc::new(Cons { head, tail }))
}

struct Ancestor {
    atom: Term,
    depth: usize,
    step: Option<usize>,
}

#[derive(Clone)]
struct Goal {
    atom: Term,
    depth: usize,
    ancestors: List<Ancestor>,
    parent_step: Option<usize>,
}

#[derive(Clone)]
enum Alternative {
    Loop {
        atom: Term,
        depth: usize,
        step: Option<usize>,
    },
    CoFact(usize),
    Clause(usize),
}

struct ChoicePoint {
    goal: Goal,
    rest: List<Goal>,
    alternatives: Vec<Alternative>,
    next: usize,
    trail_mark: usize,
    steps: usize,
    coinductive: bool,
    trace_len: usize,
}

struct Branch {
    goals: List<Goal>,
    steps: usize,
    coinductive: bool,
}

struct PendingStep {
    depth: usize,
    goal: Term,
    rule: Rule,
    parent: Option<usize>,
    ancestor_step: Option<usize>,
    instance: Option<HornClause>,
}

/// Lazy stream of answers. Check [`Solutions::status`] once it is drained
/// to tell finite failure from an exhausted budget.
pub struct Solutions<'p> {
    program: &'p Program,
    config: EngineConfig,
    query_vars: Vec<Var>,
    supply: VarSupply,
    store: Store,
    stack: Vec<ChoicePoint>,
    pending: Option<Branch>,
    trace: Vec<PendingStep>,
    produced: usize,
    budget_hit: bool,
    status: SearchStatus,
}

impl<'p> Solutions<'p> {
    fn new(program: &'p Program, goal: &[Atom], config: EngineConfig) -> Self {
        let query_vars = goal_vars(goal);
        let mut supply = VarSupply::new();
        for v in &query_vars {
            supply.reserve_past(v.id());
        }
        let mut goals: List<Goal> = None;
        for atom in goal.iter().rev() {
            goals = cons(
                Goal {
                    atom: atom.to_term(),
                    depth: 0,
                    ancestors: None,
                    parent_step: None,
                },
                goals,
            );
        }
        Solutions {
            program,
            config,
            query_vars,
            supply,
            store: Store::default(),
            stack: Vec::new(),
            pending: Some(Branch {
                goals,
                steps: 0,
                coinductive: false,
            }),
            trace: Vec::new(),
            produced: 0,
            budget_hit: false,
            status: SearchStatus::Running,
        }
    }

    pub fn status(&self) -> SearchStatus {
        self.status
    }

    /// True once any branch has been cut by the depth limit.
    pub fn budget_exceeded(&self) -> bool {
        self.budget_hit
    }

    fn coinductive(&self) -> bool {
        self.config.mode == Mode::Coinductive
    }

    fn predicate_of(atom: &Term) -> Option<&crate::term::Symbol> {
        match atom {
            Term::App(p, _) => Some(p),
            Term::Var(_) => None,
        }
    }

    fn alternatives(&self, goal: &Goal) -> Vec<Alternative> {
        let mut alts = Vec::new();
        let Some(pred) = Self::predicate_of(&goal.atom) else {
            return alts;
        };
        let coinductive = self.coinductive();
        if coinductive {
            let mut anc = &goal.ancestors;
            while let Some(cell) = anc {
                if Self::predicate_of(&cell.head.atom) == Some(pred) {
                    alts.push(Alternative::Loop {
                        atom: cell.head.atom.clone(),
                        depth: cell.head.depth,
                        step: cell.head.step,
                    });
                }
                anc = &cell.tail;
            }
            for (i, c) in self.program.clauses_for(pred) {
                if c.is_cofact() {
                    alts.push(Alternative::CoFact(i));
                }
            }
        }
        for (i, c) in self.program.clauses_for(pred) {
            if !c.is_cofact() {
                alts.push(Alternative::Clause(i));
            }
        }
        alts
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        if self.coinductive() {
            unify_rational_in(&mut self.store, a, b)
        } else {
            unify_finite_in(&mut self.store, a, b)
        }
    }

    /// Tries one alternative for `goal`. On success returns the goals that
    /// replace it and the step record.
    fn attempt(&mut self, goal: &Goal, alt: &Alternative) -> Option<(Vec<Goal>, PendingStep)> {
        match alt {
            Alternative::Loop { atom, depth, step } => {
                if !unify_rational_in(&mut self.store, &goal.atom, atom) {
                    return None;
                }
                Some((
                    Vec::new(),
                    PendingStep {
                        depth: goal.depth,
                        goal: goal.atom.clone(),
                        rule: Rule::Loop {
                            ancestor_depth: *depth,
                        },
                        parent: goal.parent_step,
                        ancestor_step: *step,
                        instance: None,
                    },
                ))
            }
            Alternative::CoFact(k) | Alternative::Clause(k) => {
                let clause = rename_apart(&self.program.clauses()[*k], &mut self.supply);
                let head = clause.head().to_term();
                if !self.unify(&goal.atom, &head) {
                    return None;
                }
                let rule = match alt {
                    Alternative::CoFact(_) => Rule::CoFact(*k),
                    _ => Rule::Clause(*k),
                };
                let this_step = if self.config.trace {
                    Some(self.trace.len())
                } else {
                    None
                };
                let ancestors = if self.coinductive() {
                    cons(
                        Ancestor {
                            atom: goal.atom.clone(),
                            depth: goal.depth,
                            step: this_step,
                        },
                        goal.ancestors.clone(),
                    )
                } else {
                    None
                };
                let body = clause
                    .body()
                    .iter()
                    .map(|a| Goal {
                        atom: a.to_term(),
                        depth: goal.depth + 1,
                        ancestors: ancestors.clone(),
                        parent_step: this_step,
                    })
                    .collect();
                Some((
                    body,
                    PendingStep {
                        depth: goal.depth,
                        goal: goal.atom.clone(),
                        rule,
                        parent: goal.parent_step,
                        ancestor_step: None,
                        instance: Some(clause),
                    },
                ))
            }
        }
    }

    fn make_solution(&self, steps: usize, coinductive: bool) -> Solution {
        let bindings = self
            .query_vars
            .iter()
            .map(|v| {
                (
                    v.clone(),
                    RationalTerm::resolve_with(&self.store, &Term::Var(v.clone())),
                )
            })
            .collect();
        let derivation = self.config.trace.then(|| Derivation {
            steps: self
                .trace
                .iter()
                .map(|s| DerivationStep {
                    depth: s.depth,
                    goal: RationalTerm::resolve_with(&self.store, &s.goal),
                    rule: s.rule,
                    parent: s.parent,
                    ancestor_step: s.ancestor_step,
                    instance: s.instance.as_ref().map(|c| ClauseInstance {
                        renamed: c.clone(),
                        head: RationalTerm::resolve_with(&self.store, &c.head().to_term()),
                        body: c
                            .body()
                            .iter()
                            .map(|a| RationalTerm::resolve_with(&self.store, &a.to_term()))
                            .collect(),
                    }),
                })
                .collect(),
        });
        Solution {
            bindings,
            coinductive,
            steps,
            derivation,
        }
    }

    fn finish(&mut self) {
        self.status = if self.budget_hit {
            SearchStatus::BudgetExceeded
        } else {
            SearchStatus::Exhausted
        };
        self.stack.clear();
    }
}

impl Iterator for Solutions<'_> {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        if self.status != SearchStatus::Running {
            return None;
        }
        loop {
            if let Some(branch) = self.pending.take() {
                match &branch.goals {
                    None => {
                        let sol = self.make_solution(branch.steps, branch.coinductive);
                        self.produced += 1;
                        if let Some(max) = self.config.max_solutions {
                            if self.produced >= max.get() {
                                self.status = SearchStatus::SolutionLimit;
                                self.stack.clear();
                            }
                        }
                        return Some(sol);
                    }
                    Some(cell) => {
                        if branch.steps >= self.config.depth_limit.get() {
                            self.budget_hit = true;
                        } else {
                            let goal = cell.head.clone();
                            let alternatives = self.alternatives(&goal);
                            self.stack.push(ChoicePoint {
                                goal,
                                rest: cell.tail.clone(),
                                alternatives,
                                next: 0,
                                trail_mark: self.store.mark(),
                                steps: branch.steps,
                                coinductive: branch.coinductive,
                                trace_len: self.trace.len(),
                            });
                        }
                    }
                }
            }

            let Some(cp) = self.stack.last_mut() else {
                self.finish();
                return None;
            };
            let mark = cp.trail_mark;
            let trace_len = cp.trace_len;
            if cp.next == cp.alternatives.len() {
                self.stack.pop();
                self.store.undo_to(mark);
                self.trace.truncate(trace_len);
                continue;
            }
            let alt = cp.alternatives[cp.next].clone();
            cp.next += 1;
            let goal = cp.goal.clone();
            let rest = cp.rest.clone();
            let steps = cp.steps;
            let coinductive = cp.coinductive;

            self.store.undo_to(mark);
            self.trace.truncate(trace_len);
            if let Some((body, step)) = self.attempt(&goal, &alt) {
                let closes = matches!(alt, Alternative::Loop { .. } | Alternative::CoFact(_));
                if self.config.trace {
                    self.trace.push(step);
                }
                let mut goals = rest;
                for g in body.into_iter().rev() {
                    goals = cons(g, goals);
                }
                self.pending = Some(Branch {
                    goals,
                    steps: steps + 1,
                    coinductive: coinductive || closes,
                });
            }
        }
    }
}
