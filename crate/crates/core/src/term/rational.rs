//! Rational trees as explicit term graphs.
//!
//! A [`RationalTerm`] is a rooted graph whose nodes are variables or symbol
//! applications. Its infinite unfolding is a regular tree. Cycles are
//! printed in μ-notation: `mu V. cons(z,V)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Bindings, Substitution, Symbol, Term, Var, VarNames};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Var(Var),
    App(Symbol, Vec<NodeId>),
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalTerm {
    nodes: Vec<Node>,
    root: NodeId,
}

impl RationalTerm {
    pub fn from_term(t: &Term) -> Self {
        struct NoBindings;
        impl Bindings for NoBindings {
            fn lookup(&self, _: &Var) -> Option<&Term> {
                None
            }
            fn bind(&mut self, _: Var, _: Term) {}
        }
        Self::resolve_with(&NoBindings, t)
    }

    /// Applies `subst` to `t` with structure sharing: each bound variable
    /// becomes one node, so cyclic bindings yield a cyclic graph.
    pub fn resolve(subst: &Substitution, t: &Term) -> Self {
        Self::resolve_with(subst, t)
    }

    pub(crate) fn resolve_with<B: Bindings + ?Sized>(bindings: &B, t: &Term) -> Self {
        let mut builder = Builder {
            bindings,
            nodes: Vec::new(),
            memo: BTreeMap::new(),
        };
        let root = builder.build(t);
        RationalTerm {
            nodes: builder.nodes,
            root,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// True iff some cycle is reachable from the root.
    pub fn is_cyclic(&self) -> bool {
        !self.back_edge_targets().is_empty()
    }

    /// The finite tree, if the graph is acyclic.
    pub fn to_term(&self) -> Option<Term> {
        if self.is_cyclic() {
            None
        } else {
            Some(self.unfold(usize::MAX))
        }
    }

    /// The unfolding cut at `depth` application levels; positions below the
    /// cut hold the [`Symbol::elided`] constant.
    pub fn unfold(&self, depth: usize) -> Term {
        self.unfold_node(self.root, depth)
    }

    fn unfold_node(&self, id: NodeId, depth: usize) -> Term {
        match &self.nodes[id] {
            Node::Var(v) => Term::Var(v.clone()),
            Node::App(_, _) if depth == 0 => Term::App(Symbol::elided(), Vec::new()),
            Node::App(f, kids) => Term::App(
                f.clone(),
                kids.iter().map(|&k| self.unfold_node(k, depth - 1)).collect(),
            ),
        }
    }

    /// Free variables in first-occurrence (depth-first) order.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match &self.nodes[id] {
                Node::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Node::App(_, kids) => stack.extend(kids.iter().rev()),
            }
        }
        out
    }

    /// Equality of the infinite unfoldings (coinductive bisimulation).
    pub fn bisimilar(&self, other: &RationalTerm) -> bool {
        let mut assumed = BTreeSet::new();
        let mut stack = vec![(self.root, other.root)];
        while let Some((a, b)) = stack.pop() {
            if !assumed.insert((a, b)) {
                continue;
            }
            match (&self.nodes[a], &other.nodes[b]) {
                (Node::Var(x), Node::Var(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (Node::App(f, xs), Node::App(g, ys)) => {
                    if f != g {
                        return false;
                    }
                    stack.extend(xs.iter().copied().zip(ys.iter().copied()));
                }
                _ => return false,
            }
        }
        true
    }

    /// The smallest graph with the same unfolding: bisimilar nodes are
    /// merged and unreachable ones dropped. Node numbering follows a
    /// depth-first walk from the root, so equal trees give equal graphs.
    pub fn minimized(&self) -> RationalTerm {
        let reachable = self.reachable();
        // Partition refinement, starting from node labels.
        let mut class: BTreeMap<NodeId, usize> = BTreeMap::new();
        {
            let mut labels: BTreeMap<Label<'_>, usize> = BTreeMap::new();
            for &id in &reachable {
                let next = labels.len();
                let c = *labels.entry(self.label(id)).or_insert(next);
                class.insert(id, c);
            }
        }
        loop {
            let mut sigs: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut refined = BTreeMap::new();
            for &id in &reachable {
                let kids = match &self.nodes[id] {
                    Node::Var(_) => Vec::new(),
                    Node::App(_, kids) => kids.iter().map(|k| class[k]).collect(),
                };
                let next = sigs.len();
                let c = *sigs.entry((class[&id], kids)).or_insert(next);
                refined.insert(id, c);
            }
            let before = class.values().collect::<BTreeSet<_>>().len();
            let after = sigs.len();
            class = refined;
            if before == after {
                break;
            }
        }
        // Rebuild one node per class in depth-first order from the root.
        let mut order: BTreeMap<usize, NodeId> = BTreeMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut pending = vec![self.root];
        let mut representatives = Vec::new();
        while let Some(id) = pending.pop() {
            let c = class[&id];
            if order.contains_key(&c) {
                continue;
            }
            order.insert(c, nodes.len());
            nodes.push(Node::Var(Var::new(0)));
            representatives.push(id);
            if let Node::App(_, kids) = &self.nodes[id] {
                pending.extend(kids.iter().rev());
            }
        }
        for (new_id, &old) in representatives.iter().enumerate() {
            nodes[new_id] = match &self.nodes[old] {
                Node::Var(v) => Node::Var(v.clone()),
                Node::App(f, kids) => {
                    Node::App(f.clone(), kids.iter().map(|k| order[&class[k]]).collect())
                }
            };
        }
        RationalTerm { nodes, root: 0 }
    }

    fn label(&self, id: NodeId) -> Label<'_> {
        match &self.nodes[id] {
            Node::Var(v) => Label::Var(v.id()),
            Node::App(f, _) => Label::App(f),
        }
    }

    fn reachable(&self) -> Vec<NodeId> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            out.push(id);
            if let Node::App(_, kids) = &self.nodes[id] {
                stack.extend(kids.iter().copied());
            }
        }
        out
    }

    /// Nodes that some depth-first path from the root re-enters.
    fn back_edge_targets(&self) -> BTreeSet<NodeId> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark = vec![Mark::New; self.nodes.len()];
        let mut targets = BTreeSet::new();
        // (node, next child index)
        let mut stack = vec![(self.root, 0usize)];
        mark[self.root] = Mark::Open;
        while let Some(&mut (id, ref mut next)) = stack.last_mut() {
            let kids: &[NodeId] = match &self.nodes[id] {
                Node::App(_, kids) => kids,
                Node::Var(_) => &[],
            };
            if *next < kids.len() {
                let k = kids[*next];
                *next += 1;
                match mark[k] {
                    Mark::New => {
                        mark[k] = Mark::Open;
                        stack.push((k, 0));
                    }
                    Mark::Open => {
                        targets.insert(k);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[id] = Mark::Done;
                stack.pop();
            }
        }
        targets
    }

    /// Prints in μ-notation, naming free variables through `names`.
    /// Binders are `V`, `V1`, `V2`, ... skipping names already in use.
    pub fn display_with(&self, names: &mut VarNames) -> String {
        let binders = self.back_edge_targets();
        // Free variables first, so binder names cannot capture them.
        for v in self.vars() {
            names.name(&v);
        }
        let mut printer = MuPrinter {
            graph: self,
            binders: &binders,
            open: BTreeMap::new(),
            counter: 0,
            out: String::new(),
        };
        printer.write(self.root, names);
        printer.out
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Label<'a> {
    Var(u32),
    App(&'a Symbol),
}

struct Builder<'b, B: ?Sized> {
    bindings: &'b B,
    nodes: Vec<Node>,
    memo: BTreeMap<Var, NodeId>,
}

impl<B: Bindings + ?Sized> Builder<'_, B> {
    fn build(&mut self, t: &Term) -> NodeId {
        match t {
            Term::Var(v) => {
                if let Some(&id) = self.memo.get(v) {
                    return id;
                }
                // Follow the variable chain; every variable on it shares a node.
                let mut chain = vec![v.clone()];
                let mut end = self.bindings.lookup(v).cloned();
                while let Some(Term::Var(w)) = &end {
                    if let Some(&id) = self.memo.get(w) {
                        for c in chain {
                            self.memo.insert(c, id);
                        }
                        return id;
                    }
                    if chain.contains(w) {
                        end = None;
                        break;
                    }
                    chain.push(w.clone());
                    end = self.bindings.lookup(w).cloned();
                }
                let id = self.nodes.len();
                self.nodes.push(Node::Var(chain.last().unwrap().clone()));
                for c in chain {
                    self.memo.insert(c, id);
                }
                if let Some(Term::App(f, args)) = end {
                    let kids = args.iter().map(|a| self.build(a)).collect();
                    self.nodes[id] = Node::App(f, kids);
                }
                id
            }
            Term::App(f, args) => {
                let kids = args.iter().map(|a| self.build(a)).collect();
                self.nodes.push(Node::App(f.clone(), kids));
                self.nodes.len() - 1
            }
        }
    }
}

struct MuPrinter<'g> {
    graph: &'g RationalTerm,
    binders: &'g BTreeSet<NodeId>,
    open: BTreeMap<NodeId, String>,
    counter: usize,
    out: String,
}

impl MuPrinter<'_> {
    fn fresh_binder(&mut self, names: &mut VarNames) -> String {
        loop {
            let candidate = if self.counter == 0 {
                String::from("V")
            } else {
                format!("V{}", self.counter)
            };
            self.counter += 1;
            if !names.is_taken(&candidate) && !self.open.values().any(|n| *n == candidate) {
                return candidate;
            }
        }
    }

    fn write(&mut self, id: NodeId, names: &mut VarNames) {
        if let Some(name) = self.open.get(&id) {
            let name = name.clone();
            self.out.push_str(&name);
            return;
        }
        match &self.graph.nodes[id] {
            Node::Var(v) => {
                let n = String::from(names.name(v));
                self.out.push_str(&n);
            }
            Node::App(f, kids) => {
                let binder = self.binders.contains(&id);
                if binder {
                    let name = self.fresh_binder(names);
                    self.out.push_str("mu ");
                    self.out.push_str(&name);
                    self.out.push_str(". ");
                    self.open.insert(id, name);
                }
                self.out.push_str(f.name());
                if !kids.is_empty() {
                    self.out.push('(');
                    for (i, &k) in kids.iter().enumerate() {
                        if i > 0 {
                            self.out.push(',');
                        }
                        self.write(k, names);
                    }
                    self.out.push(')');
                }
                if binder {
                    self.open.remove(&id);
                }
            }
        }
    }
}

impl fmt::Debug for RationalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&mut VarNames::new()))
    }
}

impl fmt::Display for RationalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&mut VarNames::new()))
    }
}
