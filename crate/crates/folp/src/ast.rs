//! Abstract syntax for forest logic programs.
//!
//! Rules come in six shapes: free rules, unary rules, binary rules and the
//! two constraint forms obtained by dropping the head of a unary or binary
//! rule. A unary rule relates a root term to an ordered list of successor
//! terms, each successor carrying a set of binary predicates on the
//! connecting arc and a set of unary predicates on the successor itself.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A term is a constant (lowercase) or a variable (uppercase).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Term::Const(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(n) | Term::Var(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arity {
    Unary,
    Binary,
}

/// A predicate name together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Predicate {
    pub name: String,
    pub arity: Arity,
}

impl Predicate {
    pub fn unary(name: impl Into<String>) -> Self {
        Predicate { name: name.into(), arity: Arity::Unary }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Predicate { name: name.into(), arity: Arity::Binary }
    }
}

/// A possibly negated predicate symbol, as found in rule bodies and in the
/// contents of completion-structure nodes and arcs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signed {
    pub pred: String,
    pub negated: bool,
}

impl Signed {
    pub fn pos(pred: impl Into<String>) -> Self {
        Signed { pred: pred.into(), negated: false }
    }

    pub fn neg(pred: impl Into<String>) -> Self {
        Signed { pred: pred.into(), negated: true }
    }

    /// The opposite polarity of the same predicate.
    pub fn flipped(&self) -> Self {
        Signed { pred: self.pred.clone(), negated: !self.negated }
    }
}

impl fmt::Display for Signed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "not {}", self.pred)
        } else {
            f.write_str(&self.pred)
        }
    }
}

/// One successor slot of a unary rule body: the successor term, the binary
/// literals on the arc from the root to it, and the unary literals on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Successor {
    pub term: Term,
    pub gamma: Vec<Signed>,
    pub delta: Vec<Signed>,
}

/// Body of a unary rule (or of a constraint with the same tree shape).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnaryBody {
    /// Unary literals over the root term.
    pub beta: Vec<Signed>,
    /// Ordered successor slots.
    pub successors: Vec<Successor>,
    /// Inequalities between successor positions, normalized `i < j`.
    pub psi: BTreeSet<(usize, usize)>,
}

impl UnaryBody {
    pub fn degree(&self) -> usize {
        self.successors.len()
    }
}

/// Body of a binary rule (or of a binary-shaped constraint).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BinaryBody {
    /// Unary literals over the first head term.
    pub beta: Vec<Signed>,
    /// Binary literals over the head term pair.
    pub gamma: Vec<Signed>,
    /// Unary literals over the second head term.
    pub delta: Vec<Signed>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnaryRule {
    pub head_pred: String,
    pub head_term: Term,
    pub body: UnaryBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRule {
    pub head_pred: String,
    pub head_terms: (Term, Term),
    pub body: BinaryBody,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `a(s) v not a(s).`
    FreeUnary { pred: String, term: Term },
    /// `f(s,t) v not f(s,t).`
    FreeBinary { pred: String, terms: (Term, Term) },
    Unary(UnaryRule),
    Binary(BinaryRule),
    /// Constraint whose body has the shape of a unary-rule body rooted at `term`.
    ConstraintUnary { term: Term, body: UnaryBody },
    /// Constraint whose body has the shape of a binary-rule body over `terms`.
    ConstraintBinary { terms: (Term, Term), body: BinaryBody },
}

impl Rule {
    pub fn is_constraint(&self) -> bool {
        matches!(self, Rule::ConstraintUnary { .. } | Rule::ConstraintBinary { .. })
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Rule::FreeUnary { .. } | Rule::FreeBinary { .. })
    }

    /// Head predicate name for definite rules, if any.
    pub fn head_pred(&self) -> Option<&str> {
        match self {
            Rule::Unary(r) => Some(&r.head_pred),
            Rule::Binary(r) => Some(&r.head_pred),
            _ => None,
        }
    }
}

/// A program together with the derived indexes the reasoner needs: the
/// constants, the unary/binary predicate inventories in first-occurrence
/// order, the free predicates, and the definite rules grouped by head
/// predicate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    constants: Vec<String>,
    constant_set: BTreeSet<String>,
    upreds: Vec<String>,
    bpreds: Vec<String>,
    free_preds: BTreeSet<String>,
    /// Free rules whose terms are constants license only the matching
    /// ground atoms; keyed by predicate name.
    ground_free_unary: BTreeSet<(String, String)>,
    ground_free_binary: BTreeSet<(String, String, String)>,
    rules_for: BTreeMap<String, Vec<usize>>,
    arities: BTreeMap<String, Arity>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        let mut p = Program {
            rules,
            constants: Vec::new(),
            constant_set: BTreeSet::new(),
            upreds: Vec::new(),
            bpreds: Vec::new(),
            free_preds: BTreeSet::new(),
            ground_free_unary: BTreeSet::new(),
            ground_free_binary: BTreeSet::new(),
            rules_for: BTreeMap::new(),
            arities: BTreeMap::new(),
        };
        p.reindex();
        p
    }

    fn note_term(&mut self, t: &Term) {
        if let Term::Const(c) = t {
            if self.constant_set.insert(c.clone()) {
                self.constants.push(c.clone());
            }
        }
    }

    fn note_pred(&mut self, name: &str, arity: Arity) {
        if self.arities.insert(name.to_string(), arity).is_none() {
            match arity {
                Arity::Unary => self.upreds.push(name.to_string()),
                Arity::Binary => self.bpreds.push(name.to_string()),
            }
        }
    }

    fn note_unary_body(&mut self, body: &UnaryBody) {
        let beta = body.beta.clone();
        let successors = body.successors.clone();
        for l in &beta {
            self.note_pred(&l.pred, Arity::Unary);
        }
        for s in &successors {
            self.note_term(&s.term);
            for l in &s.gamma {
                self.note_pred(&l.pred, Arity::Binary);
            }
            for l in &s.delta {
                self.note_pred(&l.pred, Arity::Unary);
            }
        }
    }

    fn note_binary_body(&mut self, body: &BinaryBody) {
        let body = body.clone();
        for l in &body.beta {
            self.note_pred(&l.pred, Arity::Unary);
        }
        for l in &body.gamma {
            self.note_pred(&l.pred, Arity::Binary);
        }
        for l in &body.delta {
            self.note_pred(&l.pred, Arity::Unary);
        }
    }

    fn reindex(&mut self) {
        self.constants.clear();
        self.constant_set.clear();
        self.upreds.clear();
        self.bpreds.clear();
        self.free_preds.clear();
        self.ground_free_unary.clear();
        self.ground_free_binary.clear();
        self.rules_for.clear();
        self.arities.clear();

        for i in 0..self.rules.len() {
            let rule = self.rules[i].clone();
            match &rule {
                Rule::FreeUnary { pred, term } => {
                    self.note_pred(pred, Arity::Unary);
                    self.note_term(term);
                    match term {
                        Term::Var(_) => {
                            self.free_preds.insert(pred.clone());
                        }
                        Term::Const(c) => {
                            self.ground_free_unary.insert((pred.clone(), c.clone()));
                        }
                    }
                }
                Rule::FreeBinary { pred, terms } => {
                    self.note_pred(pred, Arity::Binary);
                    self.note_term(&terms.0);
                    self.note_term(&terms.1);
                    match (&terms.0, &terms.1) {
                        (Term::Var(_), Term::Var(_)) => {
                            self.free_preds.insert(pred.clone());
                        }
                        (Term::Const(a), Term::Const(b)) => {
                            self.ground_free_binary.insert((
                                pred.clone(),
                                a.clone(),
                                b.clone(),
                            ));
                        }
                        // Mixed free rules license no blanket freedom; the
                        // engine treats them as unmatched (they justify
                        // nothing beyond what grounding allows, checked at
                        // expansion time via exact-term match).
                        _ => {}
                    }
                }
                Rule::Unary(r) => {
                    self.note_pred(&r.head_pred, Arity::Unary);
                    self.note_term(&r.head_term);
                    self.note_unary_body(&r.body);
                    self.rules_for.entry(r.head_pred.clone()).or_default().push(i);
                }
                Rule::Binary(r) => {
                    self.note_pred(&r.head_pred, Arity::Binary);
                    self.note_term(&r.head_terms.0);
                    self.note_term(&r.head_terms.1);
                    self.note_binary_body(&r.body);
                    self.rules_for.entry(r.head_pred.clone()).or_default().push(i);
                }
                Rule::ConstraintUnary { term, body } => {
                    self.note_term(term);
                    self.note_unary_body(body);
                }
                Rule::ConstraintBinary { terms, body } => {
                    self.note_term(&terms.0);
                    self.note_term(&terms.1);
                    self.note_binary_body(body);
                }
            }
        }
    }

    /// Constants in first-occurrence order.
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constant_set.contains(name)
    }

    /// Unary predicate names in first-occurrence order.
    pub fn upreds(&self) -> &[String] {
        &self.upreds
    }

    /// Binary predicate names in first-occurrence order.
    pub fn bpreds(&self) -> &[String] {
        &self.bpreds
    }

    pub fn arity_of(&self, pred: &str) -> Option<Arity> {
        self.arities.get(pred).copied()
    }

    /// Predicates declared free by a free rule over variables.
    pub fn is_free(&self, pred: &str) -> bool {
        self.free_preds.contains(pred)
    }

    /// True when a ground free rule licenses the unary atom `pred(c)`.
    pub fn has_ground_free_unary(&self, pred: &str, c: &str) -> bool {
        self.ground_free_unary.contains(&(pred.to_string(), c.to_string()))
    }

    /// True when a ground free rule licenses the binary atom `pred(a,b)`.
    pub fn has_ground_free_binary(&self, pred: &str, a: &str, b: &str) -> bool {
        self.ground_free_binary
            .contains(&(pred.to_string(), a.to_string(), b.to_string()))
    }

    /// Indexes of the definite (non-free, non-constraint) rules whose head
    /// predicate is `pred`.
    pub fn rules_for(&self, pred: &str) -> &[usize] {
        self.rules_for.get(pred).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn has_constraints(&self) -> bool {
        self.rules.iter().any(Rule::is_constraint)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Term {
        Term::Var(n.to_string())
    }

    fn cst(n: &str) -> Term {
        Term::Const(n.to_string())
    }

    #[test]
    fn signed_flip_is_involutive() {
        let s = Signed::pos("happy");
        assert_eq!(s.flipped().flipped(), s);
        assert!(s.flipped().negated);
    }

    #[test]
    fn program_indexes_constants_and_preds() {
        let rules = vec![
            Rule::Unary(UnaryRule {
                head_pred: "happy".into(),
                head_term: var("X"),
                body: UnaryBody {
                    beta: vec![],
                    successors: vec![Successor {
                        term: var("Y"),
                        gamma: vec![Signed::pos("sees")],
                        delta: vec![Signed::pos("happy")],
                    }],
                    psi: BTreeSet::new(),
                },
            }),
            Rule::FreeBinary { pred: "sees".into(), terms: (var("X"), var("Y")) },
            Rule::Unary(UnaryRule {
                head_pred: "unhappy".into(),
                head_term: cst("j"),
                body: UnaryBody {
                    beta: vec![Signed::pos("hungry")],
                    successors: vec![],
                    psi: BTreeSet::new(),
                },
            }),
        ];
        let p = Program::new(rules);
        assert_eq!(p.constants(), ["j"]);
        assert_eq!(p.upreds(), ["happy", "unhappy", "hungry"]);
        assert_eq!(p.bpreds(), ["sees"]);
        assert!(p.is_free("sees"));
        assert!(!p.is_free("happy"));
        assert_eq!(p.rules_for("happy").len(), 1);
        assert_eq!(p.rules_for("sees").len(), 0);
    }

    #[test]
    fn ground_free_rules_are_not_blanket_free() {
        let p = Program::new(vec![Rule::FreeUnary { pred: "p".into(), term: cst("a") }]);
        assert!(!p.is_free("p"));
        assert!(p.has_ground_free_unary("p", "a"));
        assert!(!p.has_ground_free_unary("p", "b"));
    }
}
