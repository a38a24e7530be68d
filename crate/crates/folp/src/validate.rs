//! Well-formedness checks for forest logic programs.
//!
//! A program is accepted when every rule is tree shaped: bodies only
//! mention the root term and its successor terms, every variable successor
//! is connected to the root by at least one positive binary literal, no
//! binary literal set mentions equality, and all variable terms within one
//! rule are pairwise distinct.

use std::collections::BTreeSet;
use std::fmt;

use crate::ast::{Arity, Program, Rule, Signed, Term, UnaryBody};

/// One validation finding, naming the offending rule by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule_index: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}: {}", self.rule_index + 1, self.message)
    }
}

fn check_distinct_vars(terms: &[&Term], out: &mut Vec<String>) {
    let mut seen = BTreeSet::new();
    for t in terms {
        if let Term::Var(v) = t {
            if !seen.insert(v.clone()) {
                out.push(format!("repeated variable term {v}"));
            }
        }
    }
}

fn check_unary_body(root: &Term, body: &UnaryBody, out: &mut Vec<String>) {
    let mut terms: Vec<&Term> = vec![root];
    for s in &body.successors {
        terms.push(&s.term);
    }
    check_distinct_vars(&terms, out);

    for (m, s) in body.successors.iter().enumerate() {
        if s.term.is_var() && !s.gamma.iter().any(|l| !l.negated) {
            out.push(format!(
                "gamma+ empty for variable successor {} (position {})",
                s.term,
                m + 1
            ));
        }
    }
    for &(i, j) in &body.psi {
        let k = body.successors.len();
        if i >= k || j >= k || i == j {
            out.push(format!("inequality references invalid successor positions {i},{j}"));
        }
    }
}

fn check_arities(program: &Program, literals: &[(Signed, Arity)], out: &mut Vec<String>) {
    for (l, want) in literals {
        if let Some(have) = program.arity_of(&l.pred) {
            if have != *want {
                out.push(format!("predicate {} used with mixed arity", l.pred));
            }
        }
    }
}

/// Checks every rule; an empty result means the program is a valid forest
/// logic program.
pub fn validate_folp(program: &Program) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    for (i, rule) in program.rules.iter().enumerate() {
        let mut msgs = Vec::new();
        match rule {
            Rule::FreeUnary { .. } => {}
            Rule::FreeBinary { terms, .. } => {
                check_distinct_vars(&[&terms.0, &terms.1], &mut msgs);
            }
            Rule::Unary(r) => {
                check_unary_body(&r.head_term, &r.body, &mut msgs);
                let mut lits: Vec<(Signed, Arity)> =
                    r.body.beta.iter().map(|l| (l.clone(), Arity::Unary)).collect();
                for s in &r.body.successors {
                    lits.extend(s.gamma.iter().map(|l| (l.clone(), Arity::Binary)));
                    lits.extend(s.delta.iter().map(|l| (l.clone(), Arity::Unary)));
                }
                check_arities(program, &lits, &mut msgs);
            }
            Rule::Binary(r) => {
                check_distinct_vars(&[&r.head_terms.0, &r.head_terms.1], &mut msgs);
                if r.head_terms.1.is_var() && !r.body.gamma.iter().any(|l| !l.negated) {
                    msgs.push("gamma+ empty for variable successor".into());
                }
            }
            Rule::ConstraintUnary { term, body } => {
                check_unary_body(term, body, &mut msgs);
            }
            Rule::ConstraintBinary { terms, body } => {
                check_distinct_vars(&[&terms.0, &terms.1], &mut msgs);
                if terms.1.is_var() && !body.gamma.iter().any(|l| !l.negated) {
                    msgs.push("gamma+ empty for variable successor".into());
                }
            }
        }
        diags.extend(msgs.into_iter().map(|message| Diagnostic { rule_index: i, message }));
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Successor, UnaryRule};
    use std::collections::BTreeSet;

    fn var(n: &str) -> Term {
        Term::Var(n.to_string())
    }

    #[test]
    fn negative_only_successor_is_rejected() {
        // a(X) :- not f(X,Y).
        let p = Program::new(vec![Rule::Unary(UnaryRule {
            head_pred: "a".into(),
            head_term: var("X"),
            body: UnaryBody {
                beta: vec![],
                successors: vec![Successor {
                    term: var("Y"),
                    gamma: vec![Signed::neg("f")],
                    delta: vec![],
                }],
                psi: BTreeSet::new(),
            },
        })]);
        let diags = validate_folp(&p);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("gamma+ empty"));
    }

    #[test]
    fn repeated_variable_is_rejected() {
        // f(X,X) :- g(X,X).
        let p = Program::new(vec![Rule::Binary(crate::ast::BinaryRule {
            head_pred: "f".into(),
            head_terms: (var("X"), var("X")),
            body: crate::ast::BinaryBody {
                beta: vec![],
                gamma: vec![Signed::pos("g")],
                delta: vec![],
            },
        })]);
        let diags = validate_folp(&p);
        assert!(diags.iter().any(|d| d.message.contains("repeated variable")));
    }

    #[test]
    fn constant_successor_without_connector_is_fine() {
        // p(X) :- q(a).
        let p = Program::new(vec![Rule::Unary(UnaryRule {
            head_pred: "p".into(),
            head_term: var("X"),
            body: UnaryBody {
                beta: vec![],
                successors: vec![Successor {
                    term: Term::Const("a".into()),
                    gamma: vec![],
                    delta: vec![Signed::pos("q")],
                }],
                psi: BTreeSet::new(),
            },
        })]);
        assert!(validate_folp(&p).is_empty());
    }
}
