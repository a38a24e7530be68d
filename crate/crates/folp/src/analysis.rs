//! Structural measures and fragment analysis: rule degree, program rank,
//! constraint elimination, and the marked positive predicate dependency
//! graph used to recognize the simple fragment.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::ast::{Arity, BinaryRule, Program, Rule, Signed, UnaryRule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("predicate {0} is not unary")]
    NotUnary(String),
    #[error("fresh constraint predicate {0} collides with an existing predicate")]
    FreshNameCollision(String),
}

/// Number of successor slots of a unary rule; 0 for every other rule form.
pub fn degree_rule(rule: &Rule) -> usize {
    match rule {
        Rule::Unary(r) => r.body.degree(),
        _ => 0,
    }
}

/// Maximum degree over the definite rules with head predicate `pred`.
pub fn degree_pred(pred: &str, program: &Program) -> Result<usize, AnalysisError> {
    match program.arity_of(pred) {
        Some(Arity::Binary) => return Err(AnalysisError::NotUnary(pred.to_string())),
        _ => {}
    }
    Ok(program
        .rules_for(pred)
        .iter()
        .map(|&i| degree_rule(&program.rules[i]))
        .max()
        .unwrap_or(0))
}

/// Sum of the degrees of all unary predicates; bounds the arity of the
/// trees the reasoner can ever build.
pub fn rank(program: &Program) -> usize {
    program
        .upreds()
        .iter()
        .map(|p| degree_pred(p, program).unwrap_or(0))
        .sum()
}

/// Replaces every constraint `:- body` by `c(x) :- not c(x), body` over a
/// fresh predicate, leaving non-constraint rules untouched.
pub fn eliminate_constraints(program: &Program) -> Result<Program, AnalysisError> {
    if !program.has_constraints() {
        return Ok(program.clone());
    }
    let mut counter = 0usize;
    let mut out = Vec::with_capacity(program.rules.len());
    for rule in &program.rules {
        match rule {
            Rule::ConstraintUnary { term, body } => {
                counter += 1;
                let fresh = format!("__constr{counter}");
                if program.arity_of(&fresh).is_some() {
                    return Err(AnalysisError::FreshNameCollision(fresh));
                }
                let mut body = body.clone();
                body.beta.insert(0, Signed::neg(&fresh));
                out.push(Rule::Unary(UnaryRule {
                    head_pred: fresh,
                    head_term: term.clone(),
                    body,
                }));
            }
            Rule::ConstraintBinary { terms, body } => {
                counter += 1;
                let fresh = format!("__constr{counter}");
                if program.arity_of(&fresh).is_some() {
                    return Err(AnalysisError::FreshNameCollision(fresh));
                }
                let mut body = body.clone();
                body.gamma.insert(0, Signed::neg(&fresh));
                out.push(Rule::Binary(BinaryRule {
                    head_pred: fresh,
                    head_terms: terms.clone(),
                    body,
                }));
            }
            other => out.push(other.clone()),
        }
    }
    Ok(Program::new(out))
}

/// The marked positive predicate dependency graph. Vertices are the
/// non-free predicates; an arc `(p, q)` records a positive body literal
/// with predicate `q` in a rule with head predicate `p`, marked when `q`
/// occurs in a successor-content position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkedGraph {
    pub vertices: BTreeSet<String>,
    /// Arc -> marked flag (true if any occurrence is marked).
    pub arcs: BTreeMap<(String, String), bool>,
}

impl MarkedGraph {
    fn add_arc(&mut self, from: &str, to: &str, marked: bool) {
        let e = self.arcs.entry((from.to_string(), to.to_string())).or_insert(false);
        *e = *e || marked;
    }

    /// Strongly connected components, keyed vertex -> component id.
    fn sccs(&self) -> BTreeMap<&str, usize> {
        // Tarjan, iterative over the small vertex set.
        let verts: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let index_of: BTreeMap<&str, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for (p, q) in self.arcs.keys() {
            if let (Some(&a), Some(&b)) = (index_of.get(p.as_str()), index_of.get(q.as_str())) {
                succs[a].push(b);
            }
        }
        let n = verts.len();
        let mut comp = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut idx = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next_index = 0usize;
        let mut next_comp = 0usize;

        for root in 0..n {
            if idx[root] != usize::MAX {
                continue;
            }
            let mut work: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (v, ref mut ei)) = work.last_mut() {
                if *ei == 0 {
                    idx[v] = next_index;
                    low[v] = next_index;
                    next_index += 1;
                    stack.push(v);
                    on_stack[v] = true;
                }
                if *ei < succs[v].len() {
                    let w = succs[v][*ei];
                    *ei += 1;
                    if idx[w] == usize::MAX {
                        work.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(idx[w]);
                    }
                } else {
                    if low[v] == idx[v] {
                        while let Some(w) = stack.pop() {
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                    work.pop();
                    if let Some(&mut (u, _)) = work.last_mut() {
                        low[u] = low[u].min(low[v]);
                    }
                }
            }
        }
        verts.iter().map(|v| (*v, comp[index_of[v]])).collect()
    }

    /// True iff some directed cycle traverses a marked arc; equivalently,
    /// some marked arc has both endpoints in one strongly connected
    /// component.
    pub fn has_marked_cycle(&self) -> bool {
        let comp = self.sccs();
        self.arcs.iter().any(|((p, q), &marked)| {
            marked && comp.get(p.as_str()) == comp.get(q.as_str())
        })
    }
}

/// Builds the marked dependency graph of a program. Only non-free
/// predicates appear; arcs into free predicates are dropped with them.
pub fn marked_dep_graph(program: &Program) -> MarkedGraph {
    let mut g = MarkedGraph::default();
    for pred in program.upreds().iter().chain(program.bpreds()) {
        if !program.is_free(pred) {
            g.vertices.insert(pred.clone());
        }
    }
    let vertex = |g: &MarkedGraph, name: &str| g.vertices.contains(name);
    for rule in &program.rules {
        match rule {
            Rule::Unary(r) => {
                if !vertex(&g, &r.head_pred) {
                    continue;
                }
                for l in r.body.beta.iter().filter(|l| !l.negated) {
                    if vertex(&g, &l.pred) {
                        g.add_arc(&r.head_pred, &l.pred, false);
                    }
                }
                for s in &r.body.successors {
                    for l in s.gamma.iter().filter(|l| !l.negated) {
                        if vertex(&g, &l.pred) {
                            g.add_arc(&r.head_pred, &l.pred, false);
                        }
                    }
                    for l in s.delta.iter().filter(|l| !l.negated) {
                        if vertex(&g, &l.pred) {
                            g.add_arc(&r.head_pred, &l.pred, true);
                        }
                    }
                }
            }
            Rule::Binary(r) => {
                if !vertex(&g, &r.head_pred) {
                    continue;
                }
                for l in r.body.beta.iter().chain(&r.body.gamma).filter(|l| !l.negated) {
                    if vertex(&g, &l.pred) {
                        g.add_arc(&r.head_pred, &l.pred, false);
                    }
                }
                for l in r.body.delta.iter().filter(|l| !l.negated) {
                    if vertex(&g, &l.pred) {
                        g.add_arc(&r.head_pred, &l.pred, true);
                    }
                }
            }
            _ => {}
        }
    }
    g
}

/// A program is simple when its marked dependency graph has no cycle
/// through a marked arc; the reasoner may then use anywhere blocking.
pub fn is_simple(program: &Program) -> bool {
    !marked_dep_graph(program).has_marked_cycle()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_program;

    const CYCLE_SRC: &str = "\
p(X) :- q(X), f(X,Y), not p(Y).
q(X) :- p(X).
f(X,Y) :- g(X,Y), q(Y).
";

    #[test]
    fn marked_graph_matches_expected_arcs() {
        let p = parse_program(CYCLE_SRC).unwrap();
        let g = marked_dep_graph(&p);
        let arcs: Vec<((String, String), bool)> =
            g.arcs.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let expect = |a: &str, b: &str, m: bool| {
            assert_eq!(
                g.arcs.get(&(a.to_string(), b.to_string())),
                Some(&m),
                "arc ({a},{b}) in {arcs:?}"
            );
        };
        expect("p", "q", false);
        expect("q", "p", false);
        expect("p", "f", false);
        expect("f", "q", true);
        expect("f", "g", false);
        assert_eq!(g.arcs.len(), 5);
    }

    #[test]
    fn marked_cycle_detected_and_removed() {
        let p = parse_program(CYCLE_SRC).unwrap();
        assert!(!is_simple(&p));
        // Dropping the binary rule breaks the marked cycle.
        let without_last: String =
            CYCLE_SRC.lines().take(2).collect::<Vec<_>>().join("\n");
        let p2 = parse_program(&without_last).unwrap();
        assert!(is_simple(&p2));
    }

    #[test]
    fn empty_program_is_simple() {
        let p = Program::new(vec![]);
        assert!(is_simple(&p));
        assert_eq!(rank(&p), 0);
    }

    #[test]
    fn simple_iff_no_marked_arc_within_scc() {
        // Equivalent formulation checked directly on the cycle example.
        let p = parse_program(CYCLE_SRC).unwrap();
        let g = marked_dep_graph(&p);
        assert!(g.has_marked_cycle());
    }
}
