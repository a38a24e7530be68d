//! Branch construction for the expansion rules. Every applicable rule at
//! the scheduled node or arc yields an ordered list of alternative update
//! plans; the search driver tries them in order and backtracks through
//! them chronologically.
//!
//! Negative-literal refutation spaces can be large products, so they are
//! enumerated lazily through a mixed-radix counter instead of being
//! materialized.

use std::collections::BTreeSet;

use crate::ast::{Program, Rule, Signed, Successor, Term};
use crate::depgraph::Atom;
use crate::forest::NodeId;

use super::{Clash, CompletionStructure, CtKey};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum NodeRef {
    Existing(NodeId),
    /// Index into the branch's freshly created children of the task node.
    Fresh(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Target {
    Node(NodeRef),
    /// Arc from the (existing) first node to the referenced successor.
    Arc(NodeId, NodeRef),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Planned {
    pub source: Option<Atom>,
    pub sp: Signed,
    pub target: Target,
    /// Extra arc to a root that must exist before this update lands.
    pub ensure_es: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Branch {
    /// Number of fresh children of the task node to create, referenced by
    /// `NodeRef::Fresh` ordinals.
    pub fresh_count: usize,
    pub updates: Vec<Planned>,
    pub expand: Option<(Target, Signed)>,
}

/// What the scheduler decided to work on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Task {
    ExpandUnaryPos { x: NodeId, pred: String },
    ChooseUnary { x: NodeId, pred: String },
    ExpandUnaryNeg { x: NodeId, pred: String },
    ExpandBinaryPos { x: NodeId, y: NodeId, pred: String },
    ExpandBinaryNeg { x: NodeId, y: NodeId, pred: String },
    ChooseBinary { x: NodeId, y: NodeId, pred: String },
}

impl Task {
    pub fn is_choice(&self) -> bool {
        matches!(self, Task::ChooseUnary { .. } | Task::ChooseBinary { .. })
    }

    pub fn anchor(&self) -> &NodeId {
        match self {
            Task::ExpandUnaryPos { x, .. }
            | Task::ChooseUnary { x, .. }
            | Task::ExpandUnaryNeg { x, .. }
            | Task::ExpandBinaryPos { x, .. }
            | Task::ExpandBinaryNeg { x, .. }
            | Task::ChooseBinary { x, .. } => x,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Task::ExpandUnaryPos { x, pred } => format!("expand-unary-pos {x} {pred}"),
            Task::ChooseUnary { x, pred } => format!("choose-unary {x} {pred}"),
            Task::ExpandUnaryNeg { x, pred } => format!("expand-unary-neg {x} {pred}"),
            Task::ExpandBinaryPos { x, y, pred } => {
                format!("expand-binary-pos ({x},{y}) {pred}")
            }
            Task::ExpandBinaryNeg { x, y, pred } => {
                format!("expand-binary-neg ({x},{y}) {pred}")
            }
            Task::ChooseBinary { x, y, pred } => format!("choose-binary ({x},{y}) {pred}"),
        }
    }
}

/// Ordered alternatives for one task. Choice and positive expansions are
/// small lists; negative expansions enumerate a product space lazily.
pub(crate) enum Branches {
    List { items: Vec<Branch>, next: usize },
    NegProduct(NegEnum),
}

impl Branches {
    pub fn next(&mut self) -> Option<Branch> {
        match self {
            Branches::List { items, next } => {
                let b = items.get(*next).cloned();
                *next += 1;
                b
            }
            Branches::NegProduct(e) => e.next(),
        }
    }
}

/// Counts depth-cap cuts; a run that ends with a non-zero delta was
/// pruned and its exhaustion is not a refutation.
#[derive(Debug, Default)]
pub(crate) struct CapTracker {
    pub events: u64,
}

/// Applies a branch at its anchor node: create children, ensure extra
/// arcs, run the updates, flip the task literal to expanded, and re-open
/// negated members when the successor set grew.
pub(crate) fn apply_branch(
    cs: &mut CompletionStructure,
    anchor: &NodeId,
    branch: &Branch,
) -> Result<(), Clash> {
    let mut fresh: Vec<NodeId> = Vec::with_capacity(branch.fresh_count);
    let mut grew = false;
    for _ in 0..branch.fresh_count {
        fresh.push(cs.ef.add_child(anchor).expect("anchor exists"));
        grew = true;
    }
    let resolve = |r: &NodeRef| -> NodeId {
        match r {
            NodeRef::Existing(id) => id.clone(),
            NodeRef::Fresh(i) => fresh[*i].clone(),
        }
    };
    for u in &branch.updates {
        if let Some(root) = &u.ensure_es {
            if !cs.ef.has_es(anchor, root) {
                cs.ef.add_es(anchor, root).expect("target is a root");
                grew = true;
            }
        }
        let target = match &u.target {
            Target::Node(r) => CtKey::Node(resolve(r)),
            Target::Arc(x, r) => CtKey::Arc(x.clone(), resolve(r)),
        };
        cs.update(u.source.as_ref(), &u.sp, &target)?;
    }
    if let Some((t, sp)) = &branch.expand {
        let key = match t {
            Target::Node(r) => CtKey::Node(resolve(r)),
            Target::Arc(x, r) => CtKey::Arc(x.clone(), resolve(r)),
        };
        cs.set_expanded(&key, sp);
    }
    if grew {
        cs.reopen_negatives_at(anchor);
    }
    Ok(())
}

fn term_matches_node(cs: &CompletionStructure, term: &Term, x: &NodeId) -> bool {
    match term {
        Term::Var(_) => true,
        Term::Const(c) => x.is_root() && x.root == *c && cs.is_constant_root(x),
    }
}

fn free_licenses_unary(
    cs: &CompletionStructure,
    program: &Program,
    pred: &str,
    x: &NodeId,
) -> bool {
    program.rules.iter().any(|r| match r {
        Rule::FreeUnary { pred: p, term } if p == pred => term_matches_node(cs, term, x),
        _ => false,
    })
}

fn free_licenses_binary(
    cs: &CompletionStructure,
    program: &Program,
    pred: &str,
    x: &NodeId,
    y: &NodeId,
) -> bool {
    program.rules.iter().any(|r| match r {
        Rule::FreeBinary { pred: p, terms } if p == pred => {
            term_matches_node(cs, &terms.0, x) && term_matches_node(cs, &terms.1, y)
        }
        _ => false,
    })
}

/// Value of one successor slot during assignment enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
enum SlotVal {
    Existing(NodeId),
    /// Fresh child ordinal (reusing an ordinal picked by an earlier slot
    /// refers to the same new node).
    Fresh(usize),
    /// A constant root not yet a successor; needs an extra arc.
    NewConst(String),
}

impl SlotVal {
    /// Identity key for inequality checks.
    fn key(&self) -> SlotVal {
        match self {
            SlotVal::NewConst(a) => SlotVal::Existing(NodeId::root(a.clone())),
            other => other.clone(),
        }
    }

    fn node_ref(&self) -> NodeRef {
        match self {
            SlotVal::Existing(id) => NodeRef::Existing(id.clone()),
            SlotVal::NewConst(a) => NodeRef::Existing(NodeId::root(a.clone())),
            SlotVal::Fresh(i) => NodeRef::Fresh(*i),
        }
    }
}

/// Enumerates successor assignments for a positive unary expansion:
/// existing successors first, then reuse of fresh nodes picked by earlier
/// slots, then a new child, then constants as new extra-arc targets.
/// Assignments violating the inequality set are dropped; child creation
/// beyond the depth cap is skipped and flagged.
fn enumerate_assignments(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    succs: &[Successor],
    psi: &BTreeSet<(usize, usize)>,
    depth_cap: usize,
    caps: &mut CapTracker,
) -> Vec<Vec<SlotVal>> {
    let existing = cs.ef.succ_ef(x).unwrap_or_default();
    let child_ok = x.depth() + 1 <= depth_cap;
    let mut out = Vec::new();
    let mut current: Vec<SlotVal> = Vec::with_capacity(succs.len());

    fn psi_ok(psi: &BTreeSet<(usize, usize)>, vals: &[SlotVal]) -> bool {
        psi.iter().all(|&(i, j)| {
            if i < vals.len() && j < vals.len() {
                vals[i].key() != vals[j].key()
            } else {
                true
            }
        })
    }

    fn rec(
        succs: &[Successor],
        existing: &[NodeId],
        cts: &[String],
        child_ok: bool,
        caps: &mut CapTracker,
        psi: &BTreeSet<(usize, usize)>,
        current: &mut Vec<SlotVal>,
        out: &mut Vec<Vec<SlotVal>>,
    ) {
        let m = current.len();
        if m == succs.len() {
            out.push(current.clone());
            return;
        }
        let mut options: Vec<SlotVal> = Vec::new();
        match &succs[m].term {
            Term::Const(a) => {
                if existing.iter().any(|n| n.is_root() && n.root == *a) {
                    options.push(SlotVal::Existing(NodeId::root(a.clone())));
                } else {
                    options.push(SlotVal::NewConst(a.clone()));
                }
            }
            Term::Var(_) => {
                for n in existing {
                    options.push(SlotVal::Existing(n.clone()));
                }
                let used_fresh = current
                    .iter()
                    .filter_map(|v| match v {
                        SlotVal::Fresh(i) => Some(*i),
                        _ => None,
                    })
                    .max();
                if let Some(top) = used_fresh {
                    for i in 0..=top {
                        options.push(SlotVal::Fresh(i));
                    }
                }
                let next_ord = used_fresh.map_or(0, |t| t + 1);
                if child_ok {
                    options.push(SlotVal::Fresh(next_ord));
                    for a in cts {
                        if !existing.iter().any(|n| n.is_root() && n.root == *a) {
                            options.push(SlotVal::NewConst(a.clone()));
                        }
                    }
                } else {
                    // Deepening cut: once child creation is capped, the
                    // remaining alternatives for this slot are withheld
                    // until the next round, so shallow structures are
                    // found in a stable order.
                    caps.events += 1;
                }
            }
        }
        for opt in options {
            current.push(opt);
            if psi_ok(psi, current) {
                rec(succs, existing, cts, child_ok, caps, psi, current, out);
            }
            current.pop();
        }
    }

    rec(
        succs,
        &existing,
        program.constants(),
        child_ok,
        caps,
        psi,
        &mut current,
        &mut out,
    );
    out
}

fn expand_unary_pos(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    pred: &str,
    depth_cap: usize,
    caps: &mut CapTracker,
) -> Vec<Branch> {
    let expand = Some((Target::Node(NodeRef::Existing(x.clone())), Signed::pos(pred)));
    if free_licenses_unary(cs, program, pred, x) {
        return vec![Branch { expand, ..Branch::default() }];
    }
    let source = Atom::unary(pred, x.clone());
    let mut out = Vec::new();
    for &ri in program.rules_for(pred) {
        let Rule::Unary(rule) = &program.rules[ri] else { continue };
        if !term_matches_node(cs, &rule.head_term, x) {
            continue;
        }
        for assignment in enumerate_assignments(
            cs,
            program,
            x,
            &rule.body.successors,
            &rule.body.psi,
            depth_cap,
            caps,
        ) {
            let mut branch = Branch {
                fresh_count: assignment
                    .iter()
                    .filter_map(|v| match v {
                        SlotVal::Fresh(i) => Some(*i + 1),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0),
                ..Branch::default()
            };
            for l in &rule.body.beta {
                branch.updates.push(Planned {
                    source: Some(source.clone()),
                    sp: l.clone(),
                    target: Target::Node(NodeRef::Existing(x.clone())),
                    ensure_es: None,
                });
            }
            for (m, slot) in rule.body.successors.iter().enumerate() {
                let val = &assignment[m];
                let ensure = match val {
                    SlotVal::NewConst(a) => Some(a.clone()),
                    _ => None,
                };
                for l in &slot.gamma {
                    branch.updates.push(Planned {
                        source: Some(source.clone()),
                        sp: l.clone(),
                        target: Target::Arc(x.clone(), val.node_ref()),
                        ensure_es: ensure.clone(),
                    });
                }
                for l in &slot.delta {
                    branch.updates.push(Planned {
                        source: Some(source.clone()),
                        sp: l.clone(),
                        target: Target::Node(val.node_ref()),
                        ensure_es: ensure.clone(),
                    });
                }
                // A constant successor with an empty body part still
                // records the extra arc.
                if slot.gamma.is_empty() && slot.delta.is_empty() {
                    if let Some(a) = ensure {
                        branch.updates.push(Planned {
                            source: None,
                            sp: Signed::pos(pred),
                            target: Target::Node(NodeRef::Existing(x.clone())),
                            ensure_es: Some(a),
                        });
                    }
                }
            }
            branch.expand = expand.clone();
            out.push(branch);
        }
    }
    out
}

/// One refutation flip option list for a ground rule instance: body
/// literals in reverse order, flipped, rotated by the instance index and
/// with already-established flips first.
fn grounding_flips(
    cs: &CompletionStructure,
    x: &NodeId,
    rule_succs: &[Successor],
    grounding: &[NodeId],
    rotation: usize,
) -> Vec<Planned> {
    let mut flips: Vec<Planned> = Vec::new();
    for (m, slot) in rule_succs.iter().enumerate() {
        let y = &grounding[m];
        let arc_exists = cs.ef.is_tree_arc(x, y) || cs.ef.has_es(x, &y.root) && y.is_root();
        let ensure = if arc_exists { None } else { Some(y.root.clone()) };
        for l in &slot.gamma {
            flips.push(Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
                ensure_es: ensure.clone(),
            });
        }
        for l in &slot.delta {
            flips.push(Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Node(NodeRef::Existing(y.clone())),
                ensure_es: None,
            });
        }
    }
    flips.reverse();
    if !flips.is_empty() {
        let r = rotation % flips.len();
        flips.rotate_left(r);
    }
    // Established refutations first keeps re-justification cheap and
    // avoids spawning new obligations.
    let (present, rest): (Vec<Planned>, Vec<Planned>) = flips.into_iter().partition(|p| {
        let key = match &p.target {
            Target::Node(NodeRef::Existing(n)) => CtKey::Node(n.clone()),
            Target::Arc(a, NodeRef::Existing(b)) => CtKey::Arc(a.clone(), b.clone()),
            _ => unreachable!("refutation targets are existing nodes"),
        };
        cs.content_ref(&key).map_or(false, |c| c.contains(&p.sp))
    });
    present.into_iter().chain(rest).collect()
}

/// Ground instances of a unary rule at `x`: variable slots range over the
/// current successors, constant slots are fixed, inequalities filter.
fn groundings_at(
    cs: &CompletionStructure,
    x: &NodeId,
    succs: &[Successor],
    psi: &BTreeSet<(usize, usize)>,
) -> Vec<Vec<NodeId>> {
    let existing = cs.ef.succ_ef(x).unwrap_or_default();
    let mut out = Vec::new();
    let mut current: Vec<NodeId> = Vec::new();
    fn rec(
        succs: &[Successor],
        existing: &[NodeId],
        psi: &BTreeSet<(usize, usize)>,
        current: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        let m = current.len();
        if m == succs.len() {
            out.push(current.clone());
            return;
        }
        let options: Vec<NodeId> = match &succs[m].term {
            Term::Const(a) => vec![NodeId::root(a.clone())],
            Term::Var(_) => existing.to_vec(),
        };
        for y in options {
            current.push(y);
            let ok = psi
                .iter()
                .all(|&(i, j)| i >= current.len() || j >= current.len() || current[i] != current[j]);
            if ok {
                rec(succs, existing, psi, current, out);
            }
            current.pop();
        }
    }
    rec(succs, &existing, psi, &mut current, &mut out);
    out
}

/// Per-rule refutation alternatives for a negated unary literal.
pub(crate) struct RuleAlts {
    beta_flips: Vec<Planned>,
    /// Flip options per ground instance; the product over instances forms
    /// the successor-mode refutations.
    grounding_opts: Vec<Vec<Planned>>,
}

impl RuleAlts {
    fn vector_count(&self) -> u128 {
        self.grounding_opts
            .iter()
            .map(|g| g.len() as u128)
            .product()
    }

    fn count(&self) -> u128 {
        self.beta_flips.len() as u128 + self.vector_count()
    }

    fn alternative(&self, idx: u128) -> Vec<Planned> {
        let nb = self.beta_flips.len() as u128;
        if idx < nb {
            return vec![self.beta_flips[idx as usize].clone()];
        }
        let mut v = idx - nb;
        // Mixed-radix decode, first instance most significant.
        let mut weights: Vec<u128> = vec![1; self.grounding_opts.len()];
        for i in (0..self.grounding_opts.len().saturating_sub(1)).rev() {
            weights[i] = weights[i + 1] * self.grounding_opts[i + 1].len() as u128;
        }
        let mut out = Vec::new();
        for (i, opts) in self.grounding_opts.iter().enumerate() {
            let d = (v / weights[i]) as usize;
            v %= weights[i];
            out.push(opts[d].clone());
        }
        out
    }
}

/// Lazy enumerator over the product of per-rule refutation alternatives.
pub(crate) struct NegEnum {
    rules: Vec<RuleAlts>,
    idx: Vec<u128>,
    expand: (Target, Signed),
    done: bool,
}

impl NegEnum {
    fn next(&mut self) -> Option<Branch> {
        if self.done {
            return None;
        }
        let mut branch = Branch::default();
        for (r, &i) in self.rules.iter().zip(&self.idx) {
            branch.updates.extend(r.alternative(i));
        }
        branch.expand = Some(self.expand.clone());
        // Advance, last rule fastest.
        let mut k = self.rules.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.idx[k] += 1;
            if self.idx[k] < self.rules[k].count() {
                break;
            }
            self.idx[k] = 0;
        }
        Some(branch)
    }
}

fn expand_unary_neg(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    pred: &str,
) -> Branches {
    let mut rules = Vec::new();
    for &ri in program.rules_for(pred) {
        let Rule::Unary(rule) = &program.rules[ri] else { continue };
        if !term_matches_node(cs, &rule.head_term, x) {
            continue;
        }
        let groundings = groundings_at(cs, x, &rule.body.successors, &rule.body.psi);
        let mut beta_flips: Vec<Planned> = rule
            .body
            .beta
            .iter()
            .rev()
            .map(|l| Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Node(NodeRef::Existing(x.clone())),
                ensure_es: None,
            })
            .collect();
        let cx = cs.node_content(x);
        // Established flips first.
        let (present, rest): (Vec<Planned>, Vec<Planned>) =
            beta_flips.drain(..).partition(|p| cx.contains(&p.sp));
        beta_flips = present.into_iter().chain(rest).collect();

        if !rule.body.successors.is_empty() && groundings.is_empty() {
            // No instance can fire: vacuously refuted, nothing to do for
            // this rule.
            rules.push(RuleAlts { beta_flips: vec![], grounding_opts: vec![] });
            continue;
        }
        let grounding_opts: Vec<Vec<Planned>> = groundings
            .iter()
            .enumerate()
            .map(|(gi, grounding)| {
                grounding_flips(cs, x, &rule.body.successors, grounding, gi)
            })
            .collect();
        rules.push(RuleAlts { beta_flips, grounding_opts });
    }
    let expand = (Target::Node(NodeRef::Existing(x.clone())), Signed::neg(pred));
    if rules.iter().any(|r| r.count() == 0) {
        // Some rule instance cannot be refuted at all.
        return Branches::List { items: vec![], next: 0 };
    }
    let idx = vec![0u128; rules.len()];
    Branches::NegProduct(NegEnum { rules, idx, expand, done: false })
}

fn binary_rule_matches(
    cs: &CompletionStructure,
    rule: &crate::ast::BinaryRule,
    x: &NodeId,
    y: &NodeId,
) -> bool {
    term_matches_node(cs, &rule.head_terms.0, x) && term_matches_node(cs, &rule.head_terms.1, y)
}

fn expand_binary_pos(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    y: &NodeId,
    pred: &str,
) -> Vec<Branch> {
    let expand = Some((
        Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
        Signed::pos(pred),
    ));
    if free_licenses_binary(cs, program, pred, x, y) {
        return vec![Branch { expand, ..Branch::default() }];
    }
    let source = Atom::binary(pred, x.clone(), y.clone());
    let mut out = Vec::new();
    for &ri in program.rules_for(pred) {
        let Rule::Binary(rule) = &program.rules[ri] else { continue };
        if !binary_rule_matches(cs, rule, x, y) {
            continue;
        }
        let mut branch = Branch::default();
        for l in &rule.body.beta {
            branch.updates.push(Planned {
                source: Some(source.clone()),
                sp: l.clone(),
                target: Target::Node(NodeRef::Existing(x.clone())),
                ensure_es: None,
            });
        }
        for l in &rule.body.gamma {
            branch.updates.push(Planned {
                source: Some(source.clone()),
                sp: l.clone(),
                target: Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
                ensure_es: None,
            });
        }
        for l in &rule.body.delta {
            branch.updates.push(Planned {
                source: Some(source.clone()),
                sp: l.clone(),
                target: Target::Node(NodeRef::Existing(y.clone())),
                ensure_es: None,
            });
        }
        branch.expand = expand.clone();
        out.push(branch);
    }
    out
}

fn expand_binary_neg(
    cs: &CompletionStructure,
    program: &Program,
    x: &NodeId,
    y: &NodeId,
    pred: &str,
) -> Branches {
    let mut rules = Vec::new();
    for &ri in program.rules_for(pred) {
        let Rule::Binary(rule) = &program.rules[ri] else { continue };
        if !binary_rule_matches(cs, rule, x, y) {
            continue;
        }
        // Reverse body order: delta, then gamma, then beta.
        let mut flips: Vec<Planned> = Vec::new();
        for l in &rule.body.beta {
            flips.push(Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Node(NodeRef::Existing(x.clone())),
                ensure_es: None,
            });
        }
        for l in &rule.body.gamma {
            flips.push(Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
                ensure_es: None,
            });
        }
        for l in &rule.body.delta {
            flips.push(Planned {
                source: None,
                sp: l.flipped(),
                target: Target::Node(NodeRef::Existing(y.clone())),
                ensure_es: None,
            });
        }
        flips.reverse();
        let (present, rest): (Vec<Planned>, Vec<Planned>) = flips.into_iter().partition(|p| {
            let key = match &p.target {
                Target::Node(NodeRef::Existing(n)) => CtKey::Node(n.clone()),
                Target::Arc(a, NodeRef::Existing(b)) => CtKey::Arc(a.clone(), b.clone()),
                _ => unreachable!(),
            };
            cs.content_ref(&key).map_or(false, |c| c.contains(&p.sp))
        });
        let flips: Vec<Planned> = present.into_iter().chain(rest).collect();
        rules.push(RuleAlts { beta_flips: flips, grounding_opts: vec![] });
    }
    // RuleAlts with no grounding slots has vector_count 1 (the empty
    // vector), which would wrongly allow an empty refutation, so encode
    // the flips as a single-instance product instead when non-empty.
    let rules: Vec<RuleAlts> = rules
        .into_iter()
        .map(|r| RuleAlts { beta_flips: vec![], grounding_opts: vec![r.beta_flips] })
        .collect();
    if rules.iter().any(|r| r.count() == 0) {
        return Branches::List { items: vec![], next: 0 };
    }
    let expand = (
        Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
        Signed::neg(pred),
    );
    let idx = vec![0u128; rules.len()];
    Branches::NegProduct(NegEnum { rules, idx, expand, done: false })
}

fn choose(target: Target, pred: &str) -> Vec<Branch> {
    [Signed::pos(pred), Signed::neg(pred)]
        .into_iter()
        .map(|sp| Branch {
            updates: vec![Planned {
                source: None,
                sp,
                target: target.clone(),
                ensure_es: None,
            }],
            ..Branch::default()
        })
        .collect()
}

pub(crate) fn build_branches(
    cs: &CompletionStructure,
    program: &Program,
    task: &Task,
    depth_cap: usize,
    caps: &mut CapTracker,
) -> Branches {
    match task {
        Task::ExpandUnaryPos { x, pred } => Branches::List {
            items: expand_unary_pos(cs, program, x, pred, depth_cap, caps),
            next: 0,
        },
        Task::ChooseUnary { x, pred } => Branches::List {
            items: choose(Target::Node(NodeRef::Existing(x.clone())), pred),
            next: 0,
        },
        Task::ExpandUnaryNeg { x, pred } => expand_unary_neg(cs, program, x, pred),
        Task::ExpandBinaryPos { x, y, pred } => Branches::List {
            items: expand_binary_pos(cs, program, x, y, pred),
            next: 0,
        },
        Task::ExpandBinaryNeg { x, y, pred } => expand_binary_neg(cs, program, x, y, pred),
        Task::ChooseBinary { x, y, pred } => Branches::List {
            items: choose(
                Target::Arc(x.clone(), NodeRef::Existing(y.clone())),
                pred,
            ),
            next: 0,
        },
    }
}
