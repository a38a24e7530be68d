//! Translation of a description logic knowledge base into a rule program.
//!
//! Every axiom becomes a constraint, every closure member a small family
//! of rules defining a predicate named after the (canonicalized)
//! expression. Concept and role names are kept verbatim; complex
//! expressions are mangled into identifiers.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ast::{
    BinaryBody, Program, Rule, Signed, Successor, Term, UnaryBody, UnaryRule,
};

use super::{ClosEntry, Concept, DlKnowledgeBase};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("role {0} in a number restriction is not simple")]
    NonSimpleRole(String),
    #[error("number restriction bound {0} exceeds the configured cap {1}")]
    NumberTooLarge(u32, u32),
    #[error("knowledge base declares transitive roles, so it is not in the restricted fragment")]
    NotTransitivityFree,
}

/// Counting bounds expand into quadratically many inequalities, so they
/// are capped; raise the cap through [`translate_with_cap`] if needed.
pub const DEFAULT_NUMBER_CAP: u32 = 8;

/// Identifier for the predicate standing for a concept expression.
pub fn concept_pred_name(c: &Concept) -> String {
    fn enc(c: &Concept, out: &mut String) {
        match c {
            Concept::Atomic(n) => out.push_str(n),
            Concept::Nominal(o) => {
                out.push_str("nom__");
                out.push_str(o);
            }
            Concept::Not(d) => {
                out.push_str("neg__");
                enc(d, out);
            }
            Concept::And(a, b) => {
                out.push_str("and__");
                enc(a, out);
                out.push_str("__");
                enc(b, out);
            }
            Concept::Or(a, b) => {
                out.push_str("or__");
                enc(a, out);
                out.push_str("__");
                enc(b, out);
            }
            Concept::Exists(r, d) => {
                out.push_str("some__");
                out.push_str(r);
                out.push_str("__");
                enc(d, out);
            }
            Concept::Forall(r, d) => {
                out.push_str("all__");
                out.push_str(r);
                out.push_str("__");
                enc(d, out);
            }
            Concept::AtLeast(n, r, d) => {
                out.push_str(&format!("min{n}__{r}__"));
                enc(d, out);
            }
            Concept::AtMost(n, r, d) => {
                out.push_str(&format!("max{n}__{r}__"));
                enc(d, out);
            }
        }
    }
    let c = c.canonical();
    if let Concept::Atomic(n) = &c {
        return n.clone();
    }
    let mut out = String::new();
    enc(&c, &mut out);
    out
}

fn var(n: &str) -> Term {
    Term::Var(n.to_string())
}

fn unary_rule(head: &str, head_term: Term, beta: Vec<Signed>, succ: Vec<Successor>) -> Rule {
    Rule::Unary(UnaryRule {
        head_pred: head.to_string(),
        head_term,
        body: UnaryBody { beta, successors: succ, psi: BTreeSet::new() },
    })
}

pub fn translate(kb: &DlKnowledgeBase) -> Result<Program, TranslateError> {
    translate_with_cap(kb, DEFAULT_NUMBER_CAP, true)
}

/// Translation without the transitive-role rules; only defined for
/// knowledge bases free of transitivity axioms, and its output is always
/// a simple program.
pub fn translate_simple(kb: &DlKnowledgeBase) -> Result<Program, TranslateError> {
    if !kb.transitive.is_empty() {
        return Err(TranslateError::NotTransitivityFree);
    }
    translate_with_cap(kb, DEFAULT_NUMBER_CAP, false)
}

pub fn translate_with_cap(
    kb: &DlKnowledgeBase,
    number_cap: u32,
    with_transitivity: bool,
) -> Result<Program, TranslateError> {
    let clos = super::closure(kb);
    let mut rules = Vec::new();

    // One constraint per terminological axiom.
    for (c, d) in &kb.terminological {
        rules.push(Rule::ConstraintUnary {
            term: var("X"),
            body: UnaryBody {
                beta: vec![
                    Signed::pos(concept_pred_name(c)),
                    Signed::neg(concept_pred_name(d)),
                ],
                successors: vec![],
                psi: BTreeSet::new(),
            },
        });
    }
    // One constraint per role axiom.
    for (r, s) in &kb.role_axioms {
        rules.push(Rule::ConstraintBinary {
            terms: (var("X"), var("Y")),
            body: BinaryBody {
                beta: vec![],
                gamma: vec![Signed::pos(r), Signed::neg(s)],
                delta: vec![],
            },
        });
    }

    for entry in &clos {
        match entry {
            ClosEntry::Role(r) => {
                rules.push(Rule::FreeBinary { pred: r.clone(), terms: (var("X"), var("Y")) });
            }
            ClosEntry::Concept(c) => {
                let name = concept_pred_name(c);
                match c {
                    Concept::Atomic(_) => {
                        rules.push(Rule::FreeUnary { pred: name, term: var("X") });
                    }
                    Concept::Nominal(o) => {
                        rules.push(unary_rule(&name, Term::Const(o.clone()), vec![], vec![]));
                    }
                    Concept::Not(e) => {
                        rules.push(unary_rule(
                            &name,
                            var("X"),
                            vec![Signed::neg(concept_pred_name(e))],
                            vec![],
                        ));
                    }
                    Concept::And(e, f) => {
                        rules.push(unary_rule(
                            &name,
                            var("X"),
                            vec![
                                Signed::pos(concept_pred_name(e)),
                                Signed::pos(concept_pred_name(f)),
                            ],
                            vec![],
                        ));
                    }
                    Concept::Or(e, f) => {
                        for part in [e, f] {
                            rules.push(unary_rule(
                                &name,
                                var("X"),
                                vec![Signed::pos(concept_pred_name(part))],
                                vec![],
                            ));
                        }
                    }
                    Concept::Exists(q, e) => {
                        rules.push(unary_rule(
                            &name,
                            var("X"),
                            vec![],
                            vec![Successor {
                                term: var("Y"),
                                gamma: vec![Signed::pos(q)],
                                delta: vec![Signed::pos(concept_pred_name(e))],
                            }],
                        ));
                        if with_transitivity {
                            for s in kb.subroles_of(q) {
                                if s != *q && kb.transitive.contains(&s) {
                                    let sub = Concept::exists(&s, (**e).clone());
                                    rules.push(unary_rule(
                                        &name,
                                        var("X"),
                                        vec![Signed::pos(concept_pred_name(&sub))],
                                        vec![],
                                    ));
                                }
                            }
                            if kb.transitive.contains(q) {
                                // Recursive propagation along the transitive role.
                                rules.push(unary_rule(
                                    &name,
                                    var("X"),
                                    vec![],
                                    vec![Successor {
                                        term: var("Y"),
                                        gamma: vec![Signed::pos(q)],
                                        delta: vec![Signed::pos(&name)],
                                    }],
                                ));
                            }
                        }
                    }
                    Concept::Forall(r, e) => {
                        let compl = Concept::exists(r, Concept::not((**e).clone()));
                        rules.push(unary_rule(
                            &name,
                            var("X"),
                            vec![Signed::neg(concept_pred_name(&compl))],
                            vec![],
                        ));
                    }
                    Concept::AtMost(n, q, e) => {
                        if !kb.is_simple_role(q) {
                            return Err(TranslateError::NonSimpleRole(q.clone()));
                        }
                        let above = Concept::at_least(n + 1, q, (**e).clone());
                        rules.push(unary_rule(
                            &name,
                            var("X"),
                            vec![Signed::neg(concept_pred_name(&above))],
                            vec![],
                        ));
                    }
                    Concept::AtLeast(n, q, e) => {
                        if !kb.is_simple_role(q) {
                            return Err(TranslateError::NonSimpleRole(q.clone()));
                        }
                        if *n > number_cap {
                            return Err(TranslateError::NumberTooLarge(*n, number_cap));
                        }
                        let filler = concept_pred_name(e);
                        let mut succ = Vec::new();
                        let mut psi = BTreeSet::new();
                        for i in 0..*n {
                            succ.push(Successor {
                                term: var(&format!("Y{}", i + 1)),
                                gamma: vec![Signed::pos(q)],
                                delta: vec![Signed::pos(&filler)],
                            });
                        }
                        for i in 0..*n as usize {
                            for j in i + 1..*n as usize {
                                psi.insert((i, j));
                            }
                        }
                        rules.push(Rule::Unary(UnaryRule {
                            head_pred: name,
                            head_term: var("X"),
                            body: UnaryBody { beta: vec![], successors: succ, psi },
                        }));
                    }
                }
            }
        }
    }

    Ok(Program::new(rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::is_simple;
    use crate::validate::validate_folp;

    fn family_kb() -> DlKnowledgeBase {
        DlKnowledgeBase {
            terminological: vec![
                (
                    Concept::atomic("Father"),
                    Concept::and(
                        Concept::exists("child", Concept::atomic("Human")),
                        Concept::not(Concept::atomic("Female")),
                    ),
                ),
                (
                    Concept::nominal("john"),
                    Concept::at_most(2, "child", Concept::atomic("Human")),
                ),
            ],
            role_axioms: vec![],
            transitive: BTreeSet::new(),
        }
    }

    #[test]
    fn family_translation_has_expected_structure() {
        let p = translate(&family_kb()).unwrap();
        assert!(validate_folp(&p).is_empty());
        assert!(is_simple(&p));

        // Constraint for the first axiom.
        let rhs = Concept::and(
            Concept::exists("child", Concept::atomic("Human")),
            Concept::not(Concept::atomic("Female")),
        );
        let rhs_name = concept_pred_name(&rhs);
        assert!(p.rules.iter().any(|r| matches!(
            r,
            Rule::ConstraintUnary { body, .. }
                if body.beta == vec![Signed::pos("Father"), Signed::neg(&rhs_name)]
        )));

        // Nominal fact.
        assert!(p.rules.iter().any(|r| matches!(
            r,
            Rule::Unary(u)
                if u.head_pred == concept_pred_name(&Concept::nominal("john"))
                    && u.head_term == Term::Const("john".into())
                    && u.body.beta.is_empty()
                    && u.body.successors.is_empty()
        )));

        // Counting rule with three successors and three inequalities.
        let min3 = concept_pred_name(&Concept::at_least(3, "child", Concept::atomic("Human")));
        let counting = p
            .rules
            .iter()
            .find_map(|r| match r {
                Rule::Unary(u) if u.head_pred == min3 => Some(u),
                _ => None,
            })
            .expect("counting rule present");
        assert_eq!(counting.body.successors.len(), 3);
        assert_eq!(counting.body.psi.len(), 3);
    }

    #[test]
    fn transitive_role_adds_recursive_rule() {
        let mut kb = DlKnowledgeBase::default();
        kb.terminological.push((
            Concept::atomic("C"),
            Concept::exists("q", Concept::atomic("E")),
        ));
        kb.transitive.insert("q".into());
        let p = translate(&kb).unwrap();
        let name = concept_pred_name(&Concept::exists("q", Concept::atomic("E")));
        // Both the base rule and the propagation rule define the exists
        // predicate.
        let defs: Vec<_> = p
            .rules
            .iter()
            .filter_map(|r| match r {
                Rule::Unary(u) if u.head_pred == name => Some(u),
                _ => None,
            })
            .collect();
        assert_eq!(defs.len(), 2);
        assert!(defs.iter().any(|u| u
            .body
            .successors
            .iter()
            .any(|s| s.delta.contains(&Signed::pos(&name)))));
        assert!(translate_simple(&kb).is_err());
    }

    #[test]
    fn non_simple_role_in_counting_is_rejected() {
        let mut kb = DlKnowledgeBase::default();
        kb.transitive.insert("r".into());
        kb.terminological.push((
            Concept::atomic("C"),
            Concept::at_least(2, "r", Concept::atomic("D")),
        ));
        assert_eq!(translate(&kb), Err(TranslateError::NonSimpleRole("r".into())));
    }

    #[test]
    fn empty_kb_translates_to_empty_simple_program() {
        let p = translate_simple(&DlKnowledgeBase::default()).unwrap();
        assert!(p.rules.is_empty());
        assert!(is_simple(&p));
    }

    #[test]
    fn canonicalization_merges_equal_concepts() {
        let a = Concept::and(Concept::atomic("A"), Concept::atomic("B"));
        let b = Concept::and(Concept::atomic("B"), Concept::atomic("A"));
        assert_eq!(concept_pred_name(&a), concept_pred_name(&b));
    }
}
