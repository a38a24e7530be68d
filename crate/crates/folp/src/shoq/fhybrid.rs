//! Hybrid knowledge bases: a terminological component plus a rule
//! program whose atoms may mention concept and role names. Satisfiability
//! is decided by translating the terminology into rules; an independent
//! bounded checker enumerates small interpretation triples directly.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ast::{Program, Rule, Signed, Term, UnaryBody, UnaryRule};
use crate::engine::{solve, SearchConfig, SolveError, Verdict};
use crate::oracle::{
    ground, search_ground, GroundAtom, GroundHead, GroundProgram, OracleError,
};

use super::translate::{concept_pred_name, translate_with_cap, TranslateError};
use super::{satisfies, Concept, DlError, DlKnowledgeBase, Interpretation};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FHybridKB {
    pub sigma: DlKnowledgeBase,
    pub program: Program,
}

#[derive(Debug, Error)]
pub enum FHybridError {
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error("bounded check limit exceeded: {0} candidate bits")]
    ScaleExceeded(usize),
}

/// Evaluates the ground program against a terminological interpretation:
/// rules whose head description-logic literal already holds are dropped,
/// rules with a failing body description-logic literal are dropped, and
/// the remaining rules lose their description-logic literals. A definite
/// rule whose head literal fails keeps its (stripped) body as a
/// constraint.
pub fn project(gp: &GroundProgram, sigma: &DlKnowledgeBase, interp: &Interpretation) -> GroundProgram {
    let concept_names = sigma.concept_names();
    let role_names = sigma.role_names();
    let is_dl = |a: &GroundAtom| -> bool {
        match a.args.len() {
            1 => concept_names.contains(&a.pred),
            _ => role_names.contains(&a.pred),
        }
    };
    let holds = |a: &GroundAtom| -> bool {
        match a.args.len() {
            1 => interp.concept_ext(&a.pred).contains(&a.args[0]),
            _ => interp
                .role_ext(&a.pred)
                .contains(&(a.args[0].clone(), a.args[1].clone())),
        }
    };

    let mut out = GroundProgram::default();
    'rules: for r in &gp.rules {
        let mut head = r.head.clone();
        match &r.head {
            GroundHead::Atom(h) if is_dl(h) => {
                if holds(h) {
                    continue 'rules;
                }
                head = GroundHead::None;
            }
            GroundHead::Free(h) if is_dl(h) => {
                // One of the two head literals always agrees with the
                // interpretation.
                continue 'rules;
            }
            _ => {}
        }
        let mut body_pos = Vec::new();
        for a in &r.body_pos {
            if is_dl(a) {
                if !holds(a) {
                    continue 'rules;
                }
            } else {
                body_pos.push(a.clone());
            }
        }
        let mut body_neg = Vec::new();
        for a in &r.body_neg {
            if is_dl(a) {
                if holds(a) {
                    continue 'rules;
                }
            } else {
                body_neg.push(a.clone());
            }
        }
        out.rules.push(crate::oracle::GroundRule { head, body_pos, body_neg });
    }
    for a in &gp.atoms {
        if !is_dl(a) {
            out.atoms.insert(a.clone());
        }
    }
    out
}

/// Satisfiability of `pred` w.r.t. the hybrid knowledge base, via the
/// translation of the terminological part.
pub fn fhybrid_sat(
    kb: &FHybridKB,
    pred: &str,
    config: &SearchConfig,
) -> Result<Verdict, FHybridError> {
    let combined = combined_program(kb, None)?;
    Ok(solve(&combined, pred, config)?)
}

/// Concept satisfiability: a fresh predicate is defined by the concept
/// and checked.
pub fn concept_sat(
    kb: &FHybridKB,
    concept: &Concept,
    config: &SearchConfig,
) -> Result<Verdict, FHybridError> {
    let combined = combined_program(kb, Some(concept))?;
    Ok(solve(&combined, "__query", config)?)
}

fn combined_program(
    kb: &FHybridKB,
    query: Option<&Concept>,
) -> Result<Program, FHybridError> {
    let mut sigma = kb.sigma.clone();
    if let Some(c) = query {
        // Seeding the closure with the query concept generates its rule
        // family; the tautological axiom adds nothing else.
        sigma.terminological.push((c.clone(), c.clone()));
    }
    let translated = translate_with_cap(&sigma, super::translate::DEFAULT_NUMBER_CAP, true)?;
    let mut rules = translated.rules;
    rules.extend(kb.program.rules.iter().cloned());
    if let Some(c) = query {
        rules.push(Rule::Unary(UnaryRule {
            head_pred: "__query".into(),
            head_term: Term::Var("X".into()),
            body: UnaryBody {
                beta: vec![Signed::pos(concept_pred_name(c))],
                successors: vec![],
                psi: Default::default(),
            },
        }));
    }
    Ok(Program::new(rules))
}

/// A model of a hybrid knowledge base found by the bounded checker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelTriple {
    pub universe: Vec<String>,
    pub interp: Interpretation,
    pub answer_set: BTreeSet<GroundAtom>,
}

/// Enumerates small universes and interpretations, checking the axioms
/// directly and the projected program through the ground oracle; returns
/// the first triple whose answer set contains an atom over `pred`.
pub fn fhybrid_bounded_check(
    kb: &FHybridKB,
    pred: &str,
    max_domain: usize,
    bit_limit: usize,
) -> Result<Option<ModelTriple>, FHybridError> {
    let mut base: Vec<String> = kb.program.constants().to_vec();
    for o in kb.sigma.individuals() {
        if !base.contains(&o) {
            base.push(o);
        }
    }
    let concept_names: Vec<String> = kb.sigma.concept_names().into_iter().collect();
    let role_names: Vec<String> = kb.sigma.role_names().into_iter().collect();

    let mut fresh = 1usize;
    let mut universe = base.clone();
    while universe.len() < 1 {
        universe.push(format!("x{fresh}"));
        fresh += 1;
    }

    while universe.len() <= max_domain.max(1) {
        let n = universe.len();
        let bits = concept_names.len() * n + role_names.len() * n * n;
        if bits > bit_limit {
            return Err(FHybridError::ScaleExceeded(bits));
        }
        if let Some(t) = check_universe(kb, pred, &universe, &concept_names, &role_names)? {
            return Ok(Some(t));
        }
        let name = loop {
            let cand = format!("x{fresh}");
            fresh += 1;
            if !universe.contains(&cand) {
                break cand;
            }
        };
        universe.push(name);
    }
    Ok(None)
}

fn check_universe(
    kb: &FHybridKB,
    pred: &str,
    universe: &[String],
    concept_names: &[String],
    role_names: &[String],
) -> Result<Option<ModelTriple>, FHybridError> {
    let n = universe.len();
    let concept_bits = concept_names.len() * n;
    let role_bits = role_names.len() * n * n;
    let total_bits = concept_bits + role_bits;
    let gp = ground(&kb.program, universe)?;

    for mask in 0u64..(1u64 << total_bits) {
        let mut interp = Interpretation::default();
        interp.domain = universe.iter().cloned().collect();
        for (ci, cname) in concept_names.iter().enumerate() {
            let mut ext = BTreeSet::new();
            for (ei, e) in universe.iter().enumerate() {
                if mask & (1 << (ci * n + ei)) != 0 {
                    ext.insert(e.clone());
                }
            }
            interp.concepts.insert(cname.clone(), ext);
        }
        for (ri, rname) in role_names.iter().enumerate() {
            let mut ext = BTreeSet::new();
            for (ai, a) in universe.iter().enumerate() {
                for (bi, b) in universe.iter().enumerate() {
                    let bit = concept_bits + ri * n * n + ai * n + bi;
                    if mask & (1 << bit) != 0 {
                        ext.insert((a.clone(), b.clone()));
                    }
                }
            }
            interp.roles.insert(rname.clone(), ext);
        }
        if !satisfies(&kb.sigma, &interp)? {
            continue;
        }
        let projected = project(&gp, &kb.sigma, &interp);
        if let Some(m) = search_ground(&projected, Some(pred)) {
            return Ok(Some(ModelTriple {
                universe: universe.to_vec(),
                interp,
                answer_set: m,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_dl, parse_program};

    fn family_kb() -> FHybridKB {
        let sigma = parse_dl(
            "Father <= exists child.Human and not Female\n{john} <= atmost 2 child.Human\n",
        )
        .unwrap();
        let program = parse_program("unhappy(X) :- not Father(X).\n").unwrap();
        FHybridKB { sigma, program }
    }

    #[test]
    fn projection_of_the_witness_interpretation() {
        let kb = family_kb();
        let universe = vec!["john".to_string(), "x".to_string()];
        let gp = ground(&kb.program, &universe).unwrap();
        let mut interp = Interpretation::default();
        interp.domain = universe.iter().cloned().collect();
        interp
            .concepts
            .insert("Father".into(), ["x".to_string()].into_iter().collect());
        interp.concepts.insert("Female".into(), BTreeSet::new());
        interp.concepts.insert("Human".into(), interp.domain.clone());
        interp.roles.insert(
            "child".into(),
            [("x".to_string(), "john".to_string())].into_iter().collect(),
        );
        let projected = project(&gp, &kb.sigma, &interp);
        // Only the named individual's rule survives, stripped to a fact.
        assert_eq!(projected.rules.len(), 1);
        assert_eq!(
            projected.rules[0].head,
            GroundHead::Atom(GroundAtom::unary("unhappy", "john"))
        );
        assert!(projected.rules[0].body_pos.is_empty());
        assert!(projected.rules[0].body_neg.is_empty());
        let m = search_ground(&projected, Some("unhappy")).unwrap();
        assert_eq!(m, [GroundAtom::unary("unhappy", "john")].into_iter().collect());
    }

    #[test]
    fn projection_without_dl_literals_is_identity() {
        let p = parse_program("a(X) :- not b(X).\n").unwrap();
        let gp = ground(&p, &["x1".to_string()]).unwrap();
        let projected = project(&gp, &DlKnowledgeBase::default(), &Interpretation::default());
        assert_eq!(projected, gp);
    }

    #[test]
    fn hybrid_satisfiability_via_translation() {
        let kb = family_kb();
        let v = fhybrid_sat(&kb, "unhappy", &SearchConfig::default()).unwrap();
        assert!(v.is_sat());
    }

    #[test]
    fn concept_satisfiability_of_the_lhs() {
        let kb = family_kb();
        let v = concept_sat(&kb, &Concept::atomic("Father"), &SearchConfig::default()).unwrap();
        assert!(v.is_sat());
    }

    #[test]
    fn empty_sigma_reduces_to_plain_satisfiability() {
        let kb = FHybridKB {
            sigma: DlKnowledgeBase::default(),
            program: parse_program("fail(X) :- not pass(X).\npass(john).\n").unwrap(),
        };
        let v = fhybrid_sat(&kb, "fail", &SearchConfig::default()).unwrap();
        assert!(v.is_sat());
    }

    #[test]
    fn bounded_check_finds_the_named_witness() {
        let kb = family_kb();
        let triple = fhybrid_bounded_check(&kb, "unhappy", 2, 24).unwrap().unwrap();
        assert_eq!(
            triple.answer_set,
            [GroundAtom::unary("unhappy", "john")].into_iter().collect()
        );
    }
}
