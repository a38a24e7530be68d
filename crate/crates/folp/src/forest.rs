//! Node addressing and extended forests.
//!
//! A node is a root name followed by a sequence of positive integers; `y`
//! is a tree successor of `x` exactly when `y = x.n`. An extended forest
//! adds arcs from arbitrary nodes back to tree roots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("{0} is not an ancestor of {1}")]
    NotAncestor(String, String),
    #[error("extra arc target {0} is not a root")]
    TargetNotRoot(String),
}

/// Address of a forest node: a root constant plus a path of child indexes.
/// Printed with dot separators (`j.1.11`), so trees may have more than
/// nine children per node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub root: String,
    pub path: Vec<u32>,
}

impl NodeId {
    pub fn root(name: impl Into<String>) -> Self {
        NodeId { root: name.into(), path: Vec::new() }
    }

    pub fn is_root(&self) -> bool {
        self.path.is_empty()
    }

    pub fn child(&self, n: u32) -> Self {
        let mut path = self.path.clone();
        path.push(n);
        NodeId { root: self.root.clone(), path }
    }

    pub fn parent(&self) -> Option<NodeId> {
        if self.path.is_empty() {
            None
        } else {
            Some(NodeId { root: self.root.clone(), path: self.path[..self.path.len() - 1].to_vec() })
        }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.root)?;
        for n in &self.path {
            write!(f, ".{n}")?;
        }
        Ok(())
    }
}

/// Prefix order on nodes of one tree; reflexive.
pub fn is_ancestor(x: &NodeId, y: &NodeId) -> bool {
    x.root == y.root && x.path.len() <= y.path.len() && y.path[..x.path.len()] == x.path[..]
}

/// All nodes `z` with `x <= z <= y`, in order; errors unless `x` is a
/// prefix of `y`.
pub fn path_between(x: &NodeId, y: &NodeId) -> Result<Vec<NodeId>, ForestError> {
    if !is_ancestor(x, y) {
        return Err(ForestError::NotAncestor(x.to_string(), y.to_string()));
    }
    let mut out = Vec::with_capacity(y.path.len() - x.path.len() + 1);
    for k in x.path.len()..=y.path.len() {
        out.push(NodeId { root: y.root.clone(), path: y.path[..k].to_vec() });
    }
    Ok(out)
}

/// Trees rooted at named constants plus extra arcs pointing back to roots.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtendedForest {
    trees: BTreeMap<String, BTreeSet<NodeId>>,
    /// Extra arcs (node, target root name).
    es: BTreeSet<(NodeId, String)>,
}

impl ExtendedForest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tree(&mut self, root: impl Into<String>) {
        let root = root.into();
        self.trees.entry(root.clone()).or_insert_with(|| {
            let mut s = BTreeSet::new();
            s.insert(NodeId::root(root));
            s
        });
    }

    pub fn roots(&self) -> impl Iterator<Item = &String> {
        self.trees.keys()
    }

    pub fn contains(&self, x: &NodeId) -> bool {
        self.trees.get(&x.root).map_or(false, |t| t.contains(x))
    }

    /// All nodes, ordered by root name then path.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.trees.values().flatten()
    }

    pub fn node_count(&self) -> usize {
        self.trees.values().map(BTreeSet::len).sum()
    }

    /// Adds a fresh child of `x` with the smallest unused index and
    /// returns it.
    pub fn add_child(&mut self, x: &NodeId) -> Result<NodeId, ForestError> {
        if !self.contains(x) {
            return Err(ForestError::UnknownNode(x.to_string()));
        }
        let next = self.children(x).map(|c| *c.path.last().unwrap()).max().unwrap_or(0) + 1;
        let child = x.child(next);
        self.trees.get_mut(&x.root).unwrap().insert(child.clone());
        Ok(child)
    }

    pub fn add_es(&mut self, from: &NodeId, target_root: &str) -> Result<(), ForestError> {
        if !self.contains(from) {
            return Err(ForestError::UnknownNode(from.to_string()));
        }
        if !self.trees.contains_key(target_root) {
            return Err(ForestError::TargetNotRoot(target_root.to_string()));
        }
        self.es.insert((from.clone(), target_root.to_string()));
        Ok(())
    }

    pub fn has_es(&self, from: &NodeId, target_root: &str) -> bool {
        self.es.contains(&(from.clone(), target_root.to_string()))
    }

    /// Tree children of `x`, in index order.
    pub fn children<'a>(&'a self, x: &'a NodeId) -> impl Iterator<Item = &'a NodeId> {
        self.trees
            .get(&x.root)
            .into_iter()
            .flatten()
            .filter(move |y| y.path.len() == x.path.len() + 1 && is_ancestor(x, y))
    }

    /// Extra-arc targets of `x`, as root nodes, in name order.
    pub fn es_targets(&self, x: &NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let x = x.clone();
        self.es
            .iter()
            .filter(move |(from, _)| *from == x)
            .map(|(_, root)| NodeId::root(root.clone()))
    }

    /// Tree children followed by extra-arc targets.
    pub fn succ_ef(&self, x: &NodeId) -> Result<Vec<NodeId>, ForestError> {
        if !self.contains(x) {
            return Err(ForestError::UnknownNode(x.to_string()));
        }
        let mut out: Vec<NodeId> = self.children(x).cloned().collect();
        out.extend(self.es_targets(x));
        Ok(out)
    }

    /// All arcs, tree arcs first (parent, child), then extra arcs.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for tree in self.trees.values() {
            for y in tree {
                if let Some(x) = y.parent() {
                    out.push((x, y.clone()));
                }
            }
        }
        for (from, root) in &self.es {
            out.push((from.clone(), NodeId::root(root.clone())));
        }
        out
    }

    pub fn is_tree_arc(&self, x: &NodeId, y: &NodeId) -> bool {
        y.parent().as_ref() == Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(root: &str, path: &[u32]) -> NodeId {
        NodeId { root: root.into(), path: path.to_vec() }
    }

    /// Two trees with back arcs, as in the usual picture: roots a and b,
    /// arcs (b,a), (b2,a), (a12,b).
    fn sample() -> ExtendedForest {
        let mut ef = ExtendedForest::new();
        ef.add_tree("a");
        ef.add_tree("b");
        let a = NodeId::root("a");
        let b = NodeId::root("b");
        let a1 = ef.add_child(&a).unwrap();
        ef.add_child(&a1).unwrap(); // a11
        let a12 = ef.add_child(&a1).unwrap();
        ef.add_child(&b).unwrap(); // b1
        let b2 = ef.add_child(&b).unwrap();
        ef.add_child(&b).unwrap(); // b3
        ef.add_child(&b2).unwrap(); // b21
        ef.add_es(&b, "a").unwrap();
        ef.add_es(&b2, "a").unwrap();
        ef.add_es(&a12, "b").unwrap();
        ef
    }

    #[test]
    fn succ_combines_children_and_extra_arcs() {
        let ef = sample();
        let b2 = node("b", &[2]);
        let succ = ef.succ_ef(&b2).unwrap();
        assert_eq!(succ, vec![node("b", &[2, 1]), NodeId::root("a")]);
    }

    #[test]
    fn fresh_root_has_no_successors() {
        let mut ef = ExtendedForest::new();
        ef.add_tree("c");
        assert!(ef.succ_ef(&NodeId::root("c")).unwrap().is_empty());
    }

    #[test]
    fn unknown_node_errors() {
        let ef = sample();
        assert!(ef.succ_ef(&node("a", &[9])).is_err());
    }

    #[test]
    fn ancestor_and_path() {
        let j = NodeId::root("j");
        let j1 = j.child(1);
        let j11 = j1.child(1);
        assert!(is_ancestor(&j, &j11));
        assert!(is_ancestor(&j, &j));
        assert!(!is_ancestor(&j1, &j.child(2)));
        assert_eq!(path_between(&j, &j11).unwrap(), vec![j.clone(), j1.clone(), j11.clone()]);
        assert!(path_between(&j1, &j.child(2)).is_err());
    }

    #[test]
    fn child_indexes_grow_past_nine() {
        let mut ef = ExtendedForest::new();
        ef.add_tree("r");
        let r = NodeId::root("r");
        for _ in 0..11 {
            ef.add_child(&r).unwrap();
        }
        let last = ef.children(&r).last().unwrap().clone();
        assert_eq!(last.to_string(), "r.11");
    }
}
