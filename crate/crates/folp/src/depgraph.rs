//! The atom dependency graph maintained during tableau expansion: vertices
//! are positive ground atoms, arcs record which atom was used to justify
//! which. Cycle detection and node-to-node connection queries drive the
//! clash and blocking checks.

use std::collections::{BTreeMap, BTreeSet};

use crate::forest::NodeId;

/// A positive ground atom over forest nodes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Unary { pred: String, node: NodeId },
    Binary { pred: String, from: NodeId, to: NodeId },
}

impl Atom {
    pub fn unary(pred: impl Into<String>, node: NodeId) -> Self {
        Atom::Unary { pred: pred.into(), node }
    }

    pub fn binary(pred: impl Into<String>, from: NodeId, to: NodeId) -> Self {
        Atom::Binary { pred: pred.into(), from, to }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DepGraph {
    vertices: BTreeSet<Atom>,
    succs: BTreeMap<Atom, BTreeSet<Atom>>,
}

impl DepGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, a: Atom) {
        self.vertices.insert(a);
    }

    pub fn contains_vertex(&self, a: &Atom) -> bool {
        self.vertices.contains(a)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Atom> {
        self.vertices.iter()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc_count(&self) -> usize {
        self.succs.values().map(BTreeSet::len).sum()
    }

    /// Adds an arc, inserting missing endpoints. Returns false if the arc
    /// was already present.
    pub fn add_arc(&mut self, from: Atom, to: Atom) -> bool {
        self.vertices.insert(from.clone());
        self.vertices.insert(to.clone());
        self.succs.entry(from).or_default().insert(to)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&Atom, &Atom)> {
        self.succs.iter().flat_map(|(a, bs)| bs.iter().map(move |b| (a, b)))
    }

    /// True when a directed path of length >= 1 leads from `from` to `to`.
    pub fn reaches(&self, from: &Atom, to: &Atom) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&Atom> = match self.succs.get(from) {
            Some(s) => s.iter().collect(),
            None => return false,
        };
        while let Some(a) = stack.pop() {
            if a == to {
                return true;
            }
            if seen.insert(a.clone()) {
                if let Some(next) = self.succs.get(a) {
                    stack.extend(next.iter());
                }
            }
        }
        false
    }

    /// True when adding arc (from, to) would close a directed cycle.
    pub fn would_cycle(&self, from: &Atom, to: &Atom) -> bool {
        from == to || self.reaches(to, from)
    }

    pub fn has_cycle(&self) -> bool {
        // Vertices are all positive atoms, so any directed cycle counts.
        let mut state: BTreeMap<&Atom, u8> = BTreeMap::new();
        for v in &self.vertices {
            if state.get(v).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut stack: Vec<(&Atom, bool)> = vec![(v, false)];
            while let Some((a, done)) = stack.pop() {
                if done {
                    state.insert(a, 2);
                    continue;
                }
                match state.get(a).copied().unwrap_or(0) {
                    1 => return true,
                    2 => continue,
                    _ => {}
                }
                state.insert(a, 1);
                stack.push((a, true));
                if let Some(next) = self.succs.get(a) {
                    for b in next {
                        match state.get(b).copied().unwrap_or(0) {
                            0 => stack.push((b, false)),
                            1 => return true,
                            _ => {}
                        }
                    }
                }
            }
        }
        false
    }

    /// Unary atoms whose node is `x`.
    fn unary_atoms_at<'a>(&'a self, x: &'a NodeId) -> impl Iterator<Item = &'a Atom> {
        self.vertices.iter().filter(move |a| matches!(a, Atom::Unary { node, .. } if node == x))
    }

    /// Predicate pairs `(p, q)` with a path from `p(y)` to `q(x)`, where
    /// `q` is not free per the supplied test. The connection must be an
    /// actual path, so `p(y)` to itself does not qualify.
    pub fn connpr(
        &self,
        y: &NodeId,
        x: &NodeId,
        is_free: impl Fn(&str) -> bool,
    ) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for start in self.unary_atoms_at(y) {
            // One reachability sweep per source atom.
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&Atom> = match self.succs.get(start) {
                Some(s) => s.iter().collect(),
                None => continue,
            };
            while let Some(a) = stack.pop() {
                if !seen.insert(a.clone()) {
                    continue;
                }
                if let Atom::Unary { pred, node } = a {
                    if node == x && !is_free(pred) {
                        if let Atom::Unary { pred: p, .. } = start {
                            out.insert((p.clone(), pred.clone()));
                        }
                    }
                }
                if let Some(next) = self.succs.get(a) {
                    stack.extend(next.iter());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(name: &str) -> NodeId {
        NodeId::root(name)
    }

    #[test]
    fn two_cycle_detected() {
        let mut g = DepGraph::new();
        g.add_arc(Atom::unary("a", n("x")), Atom::unary("b", n("x")));
        g.add_arc(Atom::unary("b", n("x")), Atom::unary("a", n("x")));
        assert!(g.has_cycle());
    }

    #[test]
    fn empty_graph_is_acyclic() {
        assert!(!DepGraph::new().has_cycle());
    }

    #[test]
    fn connpr_finds_direct_dependency() {
        let mut g = DepGraph::new();
        let y = n("j");
        let x = NodeId::root("j").child(1);
        g.add_arc(Atom::unary("happy", y.clone()), Atom::unary("happy", x.clone()));
        let conn = g.connpr(&y, &x, |_| false);
        assert!(conn.contains(&("happy".to_string(), "happy".to_string())));
    }

    #[test]
    fn connpr_empty_without_arcs() {
        let mut g = DepGraph::new();
        let x = n("x");
        g.add_vertex(Atom::unary("p", x.clone()));
        assert!(g.connpr(&x, &x, |_| false).is_empty());
    }

    #[test]
    fn would_cycle_matches_post_insertion_check() {
        let mut g = DepGraph::new();
        let a = Atom::unary("a", n("x"));
        let b = Atom::unary("b", n("x"));
        let c = Atom::unary("c", n("x"));
        g.add_arc(a.clone(), b.clone());
        g.add_arc(b.clone(), c.clone());
        assert!(g.would_cycle(&c, &a));
        assert!(g.would_cycle(&a, &a));
        assert!(!g.would_cycle(&a, &c));
    }
}
