//! The tableau engine: completion structures, expansion of positive and
//! negative literals, choice rules, blocking and redundancy, and the
//! backtracking search that decides satisfiability of a unary predicate.

mod branches;
mod solve;

pub use solve::{
    extract_model, solve, solve_default, solve_with_trace, KVariant, Mode, SearchConfig,
    SolveError, Verdict,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ast::{Program, Signed};
use crate::depgraph::{Atom, DepGraph};
use crate::forest::{ExtendedForest, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unexpanded,
    Expanded,
}

/// Signed content of one node or arc: per predicate, the status of the
/// positive and of the negated occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Content {
    entries: BTreeMap<String, (Option<Status>, Option<Status>)>,
}

impl Content {
    pub fn status(&self, sp: &Signed) -> Option<Status> {
        let (pos, neg) = self.entries.get(&sp.pred)?;
        if sp.negated {
            *neg
        } else {
            *pos
        }
    }

    pub fn contains(&self, sp: &Signed) -> bool {
        self.status(sp).is_some()
    }

    pub fn decided(&self, pred: &str) -> bool {
        self.entries.get(pred).map_or(false, |(p, n)| p.is_some() || n.is_some())
    }

    /// Inserts as unexpanded when absent; returns true when both
    /// polarities are now present (a contradiction).
    fn insert(&mut self, sp: &Signed) -> bool {
        let e = self.entries.entry(sp.pred.clone()).or_insert((None, None));
        let slot = if sp.negated { &mut e.1 } else { &mut e.0 };
        if slot.is_none() {
            *slot = Some(Status::Unexpanded);
        }
        e.0.is_some() && e.1.is_some()
    }

    fn set_status(&mut self, sp: &Signed, st: Status) {
        if let Some(e) = self.entries.get_mut(&sp.pred) {
            let slot = if sp.negated { &mut e.1 } else { &mut e.0 };
            if slot.is_some() {
                *slot = Some(st);
            }
        }
    }

    pub fn is_contradictory(&self) -> bool {
        self.entries.values().any(|(p, n)| p.is_some() && n.is_some())
    }

    /// Signed members, positives before negatives, each in name order.
    pub fn members(&self) -> Vec<Signed> {
        let mut out = Vec::new();
        for (pred, (pos, _)) in &self.entries {
            if pos.is_some() {
                out.push(Signed::pos(pred));
            }
        }
        for (pred, (_, neg)) in &self.entries {
            if neg.is_some() {
                out.push(Signed::neg(pred));
            }
        }
        out
    }

    pub fn positives(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, (p, _))| p.is_some())
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn has_unexpanded(&self) -> bool {
        self.entries
            .values()
            .any(|(p, n)| *p == Some(Status::Unexpanded) || *n == Some(Status::Unexpanded))
    }

    pub fn all_expanded(&self) -> bool {
        !self.has_unexpanded()
    }

    /// Signed-set inclusion, ignoring statuses.
    pub fn subset_of(&self, other: &Content) -> bool {
        self.members().iter().all(|sp| other.contains(sp))
    }

    /// Re-opens every expanded negated entry; used when the successor set
    /// of the owning node grows and refutations must be re-established.
    fn reopen_negatives(&mut self) {
        for (_, neg) in self.entries.values_mut() {
            if *neg == Some(Status::Expanded) {
                *neg = Some(Status::Unexpanded);
            }
        }
    }
}

/// Content carrier: a node or an arc of the extended forest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CtKey {
    Node(NodeId),
    Arc(NodeId, NodeId),
}

impl fmt::Display for CtKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtKey::Node(x) => write!(f, "{x}"),
            CtKey::Arc(x, y) => write!(f, "({x},{y})"),
        }
    }
}

/// Why a branch died.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clash {
    Contradiction(CtKey, String),
    DependencyCycle,
}

/// The tableau state: an extended forest, signed contents with expansion
/// statuses, the atom dependency graph, and the blocking pairs (derived
/// when the structure completes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionStructure {
    pub ef: ExtendedForest,
    ct: BTreeMap<CtKey, Content>,
    pub g: DepGraph,
    /// (blocking node, blocked node) pairs.
    pub bl: BTreeSet<(NodeId, NodeId)>,
    /// Constant roots of the program (the anonymous root is not one).
    constants: BTreeSet<String>,
}

impl CompletionStructure {
    pub fn content(&self, key: &CtKey) -> Content {
        self.ct.get(key).cloned().unwrap_or_default()
    }

    pub fn content_ref(&self, key: &CtKey) -> Option<&Content> {
        self.ct.get(key)
    }

    pub fn node_content(&self, x: &NodeId) -> Content {
        self.content(&CtKey::Node(x.clone()))
    }

    pub fn arc_content(&self, x: &NodeId, y: &NodeId) -> Content {
        self.content(&CtKey::Arc(x.clone(), y.clone()))
    }

    pub fn is_constant_root(&self, x: &NodeId) -> bool {
        x.is_root() && self.constants.contains(&x.root)
    }

    /// The core update: record a signed predicate at a target, feed the
    /// dependency graph, and fail fast on contradictions or dependency
    /// cycles.
    pub fn update(
        &mut self,
        source: Option<&Atom>,
        sp: &Signed,
        target: &CtKey,
    ) -> Result<(), Clash> {
        let content = self.ct.entry(target.clone()).or_default();
        if content.insert(sp) {
            return Err(Clash::Contradiction(target.clone(), sp.pred.clone()));
        }
        if !sp.negated {
            let atom = match target {
                CtKey::Node(x) => Atom::unary(&sp.pred, x.clone()),
                CtKey::Arc(x, y) => Atom::binary(&sp.pred, x.clone(), y.clone()),
            };
            self.g.add_vertex(atom.clone());
            if let Some(l) = source {
                if self.g.would_cycle(l, &atom) {
                    return Err(Clash::DependencyCycle);
                }
                self.g.add_arc(l.clone(), atom);
            }
        }
        Ok(())
    }

    pub fn set_expanded(&mut self, target: &CtKey, sp: &Signed) {
        if let Some(c) = self.ct.get_mut(target) {
            c.set_status(sp, Status::Expanded);
        }
    }

    /// Called after the successor set of `x` grew: refutations of negated
    /// unary members must be re-established over the larger set.
    pub fn reopen_negatives_at(&mut self, x: &NodeId) {
        if let Some(c) = self.ct.get_mut(&CtKey::Node(x.clone())) {
            c.reopen_negatives();
        }
    }

    pub fn is_contradictory(&self) -> bool {
        self.ct.values().any(Content::is_contradictory)
    }

    /// Clash-freeness of a finished structure: no contradiction, no
    /// dependency cycle, no redundant node at the given threshold.
    pub fn is_clash_free(&self, program: &Program, redundancy_k: u128) -> bool {
        if self.is_contradictory() || self.g.has_cycle() {
            return false;
        }
        self.ef
            .nodes()
            .all(|x| !is_redundant(self, x, redundancy_k) || !is_saturated(self, program, x))
    }
}

/// Blocking behaviour: ancestor blocking with the dependency-path test,
/// or anywhere subset blocking for simple programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockingMode {
    Full,
    Simple,
}

/// A node is saturated when every unary predicate is decided and expanded
/// at it and every arc leaving it has every binary predicate decided and
/// expanded.
pub fn is_saturated(cs: &CompletionStructure, program: &Program, x: &NodeId) -> bool {
    let c = cs.node_content(x);
    if !program.upreds().iter().all(|p| c.decided(p)) || !c.all_expanded() {
        return false;
    }
    for y in cs.ef.succ_ef(x).unwrap_or_default() {
        let a = cs.arc_content(x, &y);
        if !program.bpreds().iter().all(|p| a.decided(p)) || !a.all_expanded() {
            return false;
        }
    }
    true
}

/// True when `x` has not been expanded at all yet: blocking may only
/// exempt such leaves.
pub fn is_unexpanded_leaf(cs: &CompletionStructure, x: &NodeId) -> bool {
    if !x.is_root() && cs.ef.succ_ef(x).map_or(true, |s| !s.is_empty()) {
        return false;
    }
    if x.is_root() {
        return false;
    }
    cs.node_content(x).members().iter().all(|sp| {
        cs.node_content(x).status(sp) == Some(Status::Unexpanded)
    })
}

/// Finds the blocking witness for `x`, if any. In full mode this is the
/// closest-to-root strict ancestor outside the constants whose content
/// covers `x`'s with no dependency path between them; in simple mode any
/// saturated non-constant node with covering content qualifies.
pub fn check_blocked(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    mode: BlockingMode,
) -> Option<NodeId> {
    if !is_unexpanded_leaf(cs, x) {
        return None;
    }
    let cx = cs.node_content(x);
    match mode {
        BlockingMode::Full => {
            // Ancestors from the root downward.
            for k in 0..x.path.len() {
                let y = NodeId { root: x.root.clone(), path: x.path[..k].to_vec() };
                if cs.is_constant_root(&y) {
                    continue;
                }
                if cx.subset_of(&cs.node_content(&y))
                    && cs.g.connpr(&y, x, |p| program.is_free(p)).is_empty()
                {
                    return Some(y);
                }
            }
            None
        }
        BlockingMode::Simple => {
            for y in cs.ef.nodes() {
                if y == x || cs.is_constant_root(y) {
                    continue;
                }
                if is_saturated(cs, program, y) && cx.subset_of(&cs.node_content(y)) {
                    return Some(y.clone());
                }
            }
            None
        }
    }
}

/// True when at least `k` strict ancestors of `x` carry exactly the same
/// signed content.
pub fn is_redundant(cs: &CompletionStructure, x: &NodeId, k: u128) -> bool {
    if k == 0 {
        return !x.is_root();
    }
    // Ancestors are bounded by the tree depth, so huge thresholds can
    // never be met.
    if k > x.path.len() as u128 {
        return false;
    }
    let cx = cs.node_content(x);
    let mut count: u128 = 0;
    for d in 0..x.path.len() {
        let y = NodeId { root: x.root.clone(), path: x.path[..d].to_vec() };
        if cs.node_content(&y) == cx {
            count += 1;
            if count >= k {
                return true;
            }
        }
    }
    false
}

/// The redundancy threshold from the content-counting argument;
/// `extra` is 2 for the expansion-rule form and 3 for the variant used in
/// the completeness argument. Saturates for predicate counts that push
/// the bound beyond 128 bits.
pub fn paper_redundancy_k(upred_count: usize, extra: u128) -> u128 {
    let p = upred_count as u32;
    let pow = |e: u32| -> u128 {
        if e >= 127 {
            u128::MAX
        } else {
            1u128 << e
        }
    };
    let inner = pow(p.saturating_mul(p)).saturating_sub(1);
    pow(p).saturating_mul(inner).saturating_add(extra)
}

/// Seed placement for the initial structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    /// Place the checked predicate at this constant root.
    Constant(String),
    /// Add an extra anonymous-root tree carrying the predicate; the name
    /// is chosen outside the program constants.
    Anonymous(String),
}

/// Builds the initial structure: one single-node tree per program
/// constant, plus the anonymous tree when asked for, with the checked
/// predicate pending at the seed root.
pub fn init_completion_at(
    pred: &str,
    program: &Program,
    seed: &Seed,
) -> CompletionStructure {
    let mut ef = ExtendedForest::new();
    for c in program.constants() {
        ef.add_tree(c.clone());
    }
    let seed_node = match seed {
        Seed::Constant(c) => NodeId::root(c.clone()),
        Seed::Anonymous(name) => {
            ef.add_tree(name.clone());
            NodeId::root(name.clone())
        }
    };
    let mut cs = CompletionStructure {
        ef,
        ct: BTreeMap::new(),
        g: DepGraph::new(),
        bl: BTreeSet::new(),
        constants: program.constants().iter().cloned().collect(),
    };
    cs.update(None, &Signed::pos(pred), &CtKey::Node(seed_node))
        .expect("seeding a fresh structure cannot clash");
    cs
}

/// Spec-level convenience: seed at the first constant, or at an anonymous
/// root. Errors when `pred` is not unary.
pub fn init_completion(
    pred: &str,
    program: &Program,
    anonymous_root: bool,
) -> Result<CompletionStructure, SolveError> {
    if program.arity_of(pred) == Some(crate::ast::Arity::Binary) {
        return Err(SolveError::NotUnary(pred.to_string()));
    }
    let seed = if anonymous_root || program.constants().is_empty() {
        Seed::Anonymous(anonymous_root_name(program))
    } else {
        Seed::Constant(program.constants()[0].clone())
    };
    Ok(init_completion_at(pred, program, &seed))
}

/// First `xN` name that is not a program constant.
pub fn anonymous_root_name(program: &Program) -> String {
    crate::oracle::anonymous_names(program, 1).remove(0)
}
