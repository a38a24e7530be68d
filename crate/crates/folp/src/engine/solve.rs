//! The backtracking search: a deterministic scheduler picks the next
//! expansion obligation, branch alternatives are tried in order with
//! chronological backtracking, and per-seed iterative deepening on the
//! tree depth finds shallow structures first while keeping refutations
//! sound: a seed counts as refuted only when its space was exhausted
//! without any depth-capped alternative.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::analysis::{self, AnalysisError};
use crate::ast::{Arity, Program, Signed};
use crate::forest::NodeId;
use crate::oracle::{GroundAtom, OpenInterpretation};
use crate::validate::{validate_folp, Diagnostic};

use super::branches::{apply_branch, build_branches, Branches, Task};
use super::{
    check_blocked, init_completion_at, is_redundant, is_saturated, paper_redundancy_k,
    BlockingMode, CompletionStructure, Seed, Status,
};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("program is not a valid forest logic program: {0:?}")]
    InvalidProgram(Vec<Diagnostic>),
    #[error("predicate {0} is not unary")]
    NotUnary(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("structure is not clash-free")]
    NotClashFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    Full,
    Simple,
}

/// Which redundancy threshold to use; the two published variants differ
/// by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KVariant {
    Rule9,
    Appendix,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub mode: Mode,
    pub k_variant: KVariant,
    /// Overrides the computed redundancy threshold when set.
    pub redundancy_k: Option<u128>,
    /// Maximum tree depth explored; deepening stops here.
    pub depth_cap: usize,
    /// Reserved for reproducibility bookkeeping; the fixed choice order
    /// does not consume randomness.
    pub seed: u64,
    pub emit_trace: bool,
    /// Budget on branch applications before giving up with unknown.
    pub max_steps: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: Mode::Auto,
            k_variant: KVariant::Rule9,
            redundancy_k: None,
            depth_cap: 50,
            seed: 0,
            emit_trace: false,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat { model: OpenInterpretation, structure: CompletionStructure },
    Unsat,
    Unknown { reason: String },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }
}

enum Step {
    Complete(Vec<(NodeId, NodeId)>),
    Task(Task),
    RedundantNode,
}

fn parent_saturated(cs: &CompletionStructure, program: &Program, x: &NodeId) -> bool {
    match x.parent() {
        None => true,
        Some(p) => is_saturated(cs, program, &p),
    }
}

/// Unary predicate names to consider at a node: the program inventory
/// plus any extra entries seeded into the content.
fn unary_scan_list(cs: &CompletionStructure, program: &Program, x: &NodeId) -> Vec<String> {
    let mut list: Vec<String> = program.upreds().to_vec();
    for sp in cs.node_content(x).members() {
        if !list.contains(&sp.pred) {
            list.push(sp.pred);
        }
    }
    list
}

fn derive_task(cs: &CompletionStructure, program: &Program, x: &NodeId) -> Option<Task> {
    let c = cs.node_content(x);
    let preds = unary_scan_list(cs, program, x);

    for p in &preds {
        if c.status(&Signed::pos(p)) == Some(Status::Unexpanded) {
            return Some(Task::ExpandUnaryPos { x: x.clone(), pred: p.clone() });
        }
    }
    let succ = cs.ef.succ_ef(x).unwrap_or_default();
    for y in &succ {
        let a = cs.arc_content(x, y);
        for f in program.bpreds() {
            if a.status(&Signed::pos(f)) == Some(Status::Unexpanded) {
                return Some(Task::ExpandBinaryPos {
                    x: x.clone(),
                    y: y.clone(),
                    pred: f.clone(),
                });
            }
        }
    }
    for y in &succ {
        let a = cs.arc_content(x, y);
        for f in program.bpreds() {
            if a.status(&Signed::neg(f)) == Some(Status::Unexpanded) {
                return Some(Task::ExpandBinaryNeg {
                    x: x.clone(),
                    y: y.clone(),
                    pred: f.clone(),
                });
            }
        }
    }
    // All positives here and all arc members are expanded now; offer any
    // undecided unary predicate for choice before negative expansion.
    for p in program.upreds() {
        if !c.decided(p) {
            return Some(Task::ChooseUnary { x: x.clone(), pred: p.clone() });
        }
    }
    for p in &preds {
        if c.status(&Signed::neg(p)) == Some(Status::Unexpanded) {
            return Some(Task::ExpandUnaryNeg { x: x.clone(), pred: p.clone() });
        }
    }
    for y in &succ {
        let a = cs.arc_content(x, y);
        for f in program.bpreds() {
            if !a.decided(f) {
                return Some(Task::ChooseBinary {
                    x: x.clone(),
                    y: y.clone(),
                    pred: f.clone(),
                });
            }
        }
    }
    None
}

fn next_step(
    cs: &CompletionStructure,
    program: &Program,
    blocking: BlockingMode,
    redundancy_k: u128,
) -> Step {
    let nodes: Vec<NodeId> = cs.ef.nodes().cloned().collect();
    let mut blocked = Vec::new();
    for x in &nodes {
        if !x.is_root() && !parent_saturated(cs, program, x) {
            continue;
        }
        if is_saturated(cs, program, x) {
            if blocking == BlockingMode::Full && is_redundant(cs, x, redundancy_k) {
                return Step::RedundantNode;
            }
            continue;
        }
        if let Some(y) = check_blocked(cs, program, x, blocking) {
            blocked.push((y, x.clone()));
            continue;
        }
        let task = derive_task(cs, program, x)
            .expect("an unsaturated unblocked node has an applicable expansion");
        debug_assert!(
            !matches!(task, Task::ExpandUnaryNeg { .. })
                || program.upreds().iter().all(|p| cs.node_content(x).decided(p)),
            "negative expansion scheduled before the node was decided"
        );
        return Step::Task(task);
    }
    Step::Complete(blocked)
}

enum RunOutcome {
    Sat(Box<CompletionStructure>),
    Exhausted { capped: bool },
    Budget,
}

struct Frame {
    snapshot: CompletionStructure,
    branches: Branches,
    anchor: NodeId,
    desc: String,
    tried: usize,
    /// Choice points defer their remaining polarity while the tried
    /// branch failed only under the depth cap: committing against a
    /// literal whose justification space was cut would steer the search
    /// into degenerate shallow structures.
    is_choice: bool,
    cap_mark: u64,
}

#[allow(clippy::too_many_arguments)]
fn run_dfs(
    program: &Program,
    pred: &str,
    seed: &Seed,
    blocking: BlockingMode,
    redundancy_k: u128,
    depth_cap: usize,
    steps: &mut u64,
    max_steps: u64,
    rank: usize,
    defer_choices: bool,
    trace: Option<&mut Vec<String>>,
) -> RunOutcome {
    let mut trace = trace;
    let mut cs = init_completion_at(pred, program, seed);
    let mut frames: Vec<Frame> = Vec::new();
    let mut caps = super::branches::CapTracker::default();

    loop {
        match next_step(&cs, program, blocking, redundancy_k) {
            Step::Complete(blocked) => {
                cs.bl = blocked.into_iter().collect();
                debug_assert!(!cs.is_contradictory());
                debug_assert!(!cs.g.has_cycle());
                debug_assert!(tree_arcs_positively_labeled(&cs));
                return RunOutcome::Sat(Box::new(cs));
            }
            step => {
                let failed_now = matches!(step, Step::RedundantNode);
                if let Step::Task(task) = step {
                    let branches = build_branches(&cs, program, &task, depth_cap, &mut caps);
                    frames.push(Frame {
                        snapshot: cs.clone(),
                        branches,
                        anchor: task.anchor().clone(),
                        desc: task.describe(),
                        tried: 0,
                        is_choice: task.is_choice(),
                        cap_mark: caps.events,
                    });
                } else if !failed_now {
                    unreachable!();
                }
                // Advance to the next live branch, backtracking through
                // exhausted frames.
                let mut progressed = false;
                while let Some(frame) = frames.last_mut() {
                    *steps += 1;
                    if *steps > max_steps {
                        return RunOutcome::Budget;
                    }
                    if defer_choices
                        && frame.is_choice
                        && frame.tried > 0
                        && caps.events > frame.cap_mark
                    {
                        // The polarity already tried failed under the
                        // depth cap; defer the rest of this choice to a
                        // deeper round.
                        frames.pop();
                        continue;
                    }
                    match frame.branches.next() {
                        None => {
                            frames.pop();
                        }
                        Some(branch) => {
                            frame.tried += 1;
                            let mut candidate = frame.snapshot.clone();
                            match apply_branch(&mut candidate, &frame.anchor, &branch) {
                                Ok(()) => {
                                    debug_assert!(
                                        candidate
                                            .ef
                                            .nodes()
                                            .all(|n| candidate.ef.children(n).count() <= rank),
                                        "tree arity exceeded the program rank"
                                    );
                                    if let Some(t) = trace.as_deref_mut() {
                                        t.push(format!(
                                            "STEP {} {} alternative {}",
                                            steps, frame.desc, frame.tried
                                        ));
                                    }
                                    cs = candidate;
                                    progressed = true;
                                    break;
                                }
                                Err(_) => continue,
                            }
                        }
                    }
                }
                if !progressed {
                    return RunOutcome::Exhausted { capped: caps.events > 0 };
                }
            }
        }
    }
}

fn tree_arcs_positively_labeled(cs: &CompletionStructure) -> bool {
    cs.ef.arcs().iter().all(|(x, y)| {
        if !cs.ef.is_tree_arc(x, y) {
            return true;
        }
        !cs.arc_content(x, y).positives().is_empty()
    })
}

/// Reads the open interpretation off a complete clash-free structure:
/// blocked nodes take over the positive content of their blocking node
/// together with mirrored arcs to the blocking node's successors.
pub fn extract_model(cs: &CompletionStructure) -> Result<OpenInterpretation, SolveError> {
    if cs.is_contradictory() || cs.g.has_cycle() {
        return Err(SolveError::NotClashFree);
    }
    let blocking_of = |x: &NodeId| -> Option<&NodeId> {
        cs.bl.iter().find(|(_, b)| b == x).map(|(y, _)| y)
    };
    let mut atoms: BTreeSet<GroundAtom> = BTreeSet::new();
    let universe: Vec<String> = cs.ef.nodes().map(|n| n.to_string()).collect();

    for x in cs.ef.nodes() {
        let source = blocking_of(x).unwrap_or(x);
        for p in cs.node_content(source).positives() {
            atoms.insert(GroundAtom::unary(p, x.to_string()));
        }
    }
    for (u, v) in cs.ef.arcs() {
        for f in cs.arc_content(&u, &v).positives() {
            atoms.insert(GroundAtom::binary(f, u.to_string(), v.to_string()));
        }
    }
    for (y, x) in &cs.bl {
        for z in cs.ef.succ_ef(y).unwrap_or_default() {
            for f in cs.arc_content(y, &z).positives() {
                atoms.insert(GroundAtom::binary(f, x.to_string(), z.to_string()));
            }
        }
    }
    Ok(OpenInterpretation { universe, atoms })
}

pub fn solve(
    program: &Program,
    pred: &str,
    config: &SearchConfig,
) -> Result<Verdict, SolveError> {
    Ok(solve_with_trace(program, pred, config)?.0)
}

/// Like [`solve`], also returning the trace lines collected when
/// `emit_trace` is on.
pub fn solve_with_trace(
    program: &Program,
    pred: &str,
    config: &SearchConfig,
) -> Result<(Verdict, Vec<String>), SolveError> {
    let diags = validate_folp(program);
    if !diags.is_empty() {
        return Err(SolveError::InvalidProgram(diags));
    }
    if program.arity_of(pred) == Some(Arity::Binary) {
        return Err(SolveError::NotUnary(pred.to_string()));
    }
    let program = analysis::eliminate_constraints(program)?;
    let blocking = match config.mode {
        Mode::Full => BlockingMode::Full,
        Mode::Simple => BlockingMode::Simple,
        Mode::Auto => {
            if analysis::is_simple(&program) {
                BlockingMode::Simple
            } else {
                BlockingMode::Full
            }
        }
    };
    let extra = match config.k_variant {
        KVariant::Rule9 => 2,
        KVariant::Appendix => 3,
    };
    let redundancy_k = config
        .redundancy_k
        .unwrap_or_else(|| paper_redundancy_k(program.upreds().len(), extra));
    let rank = analysis::rank(&program);

    let mut seeds: Vec<Seed> =
        program.constants().iter().map(|c| Seed::Constant(c.clone())).collect();
    seeds.push(Seed::Anonymous(super::anonymous_root_name(&program)));

    let mut steps: u64 = 0;
    let mut trace: Vec<String> = Vec::new();
    let mut undetermined = false;

    for seed in &seeds {
        for cap in 0..=config.depth_cap {
            // All rounds but the last defer choice points whose tried
            // polarity was depth-pruned; the final round is a classic
            // exhaustive search at the cap, which keeps the procedure
            // complete up to the configured depth.
            let defer_choices = cap < config.depth_cap;
            let outcome = run_dfs(
                &program,
                pred,
                seed,
                blocking,
                redundancy_k,
                cap,
                &mut steps,
                config.max_steps,
                rank.max(1),
                defer_choices,
                config.emit_trace.then_some(&mut trace),
            );
            match outcome {
                RunOutcome::Sat(cs) => {
                    let model = extract_model(&cs)?;
                    return Ok((Verdict::Sat { model, structure: *cs }, trace));
                }
                RunOutcome::Budget => {
                    return Ok((
                        Verdict::Unknown {
                            reason: format!(
                                "step budget of {} exhausted",
                                config.max_steps
                            ),
                        },
                        trace,
                    ));
                }
                RunOutcome::Exhausted { capped } => {
                    if !capped {
                        break;
                    }
                    if cap == config.depth_cap {
                        undetermined = true;
                    }
                }
            }
        }
    }

    if undetermined {
        Ok((
            Verdict::Unknown {
                reason: format!(
                    "search pruned at depth cap {}; no structure found",
                    config.depth_cap
                ),
            },
            trace,
        ))
    } else {
        Ok((Verdict::Unsat, trace))
    }
}

/// Convenience used by tests and the bounded checker: the verdict only.
pub fn solve_default(program: &Program, pred: &str) -> Result<Verdict, SolveError> {
    solve(program, pred, &SearchConfig::default())
}
