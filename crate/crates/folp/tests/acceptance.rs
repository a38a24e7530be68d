//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use folp::analysis::is_simple;
use folp::ast::{Program, Rule, Signed, Term};
use folp::engine::{solve, solve_default, SearchConfig, Verdict};
use folp::oracle::{bounded_sat, is_answer_set, GroundAtom};
use folp::shoq::{
    concept_pred_name, fhybrid_bounded_check, fhybrid_sat, translate, Concept, FHybridKB,
};
use folp::textio::{parse_dl, parse_program};
use folp::validate::validate_folp;

fn sample(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

fn program(name: &str) -> Program {
    let p = parse_program(&sample(name)).unwrap_or_else(|e| panic!("parse {name}: {e}"));
    assert!(validate_folp(&p).is_empty(), "{name} should validate");
    p
}

fn atom1(pred: &str, a: &str) -> GroundAtom {
    GroundAtom::unary(pred, a)
}

fn atom2(pred: &str, a: &str, b: &str) -> GroundAtom {
    GroundAtom::binary(pred, a, b)
}

#[test]
fn criterion_1_golden_happy_model() {
    let p = program("happy.folp");
    let started = Instant::now();
    let verdict = solve_default(&p, "happy").unwrap();
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "satisfiability took {elapsed:?}");

    let Verdict::Sat { model, .. } = verdict else { panic!("happy should be satisfiable") };
    assert_eq!(model.universe, ["j", "j.1", "j.1.1", "j.1.2"]);

    let expected: BTreeSet<GroundAtom> = [
        atom1("happy", "j"),
        atom1("happy", "j.1"),
        atom1("happy", "j.1.1"),
        atom1("happy", "j.1.2"),
        atom2("friend", "j", "j.1"),
        atom2("sees", "j", "j.1"),
        atom2("friend", "j.1", "j.1.1"),
        atom2("sees", "j.1", "j.1.1"),
        atom2("friend", "j.1", "j.1.2"),
        atom2("friend", "j.1.1", "j.1.1"),
        atom2("sees", "j.1.1", "j.1.1"),
        atom2("friend", "j.1.1", "j.1.2"),
        atom2("friend", "j.1.2", "j.1.1"),
        atom2("sees", "j.1.2", "j.1.1"),
        atom2("friend", "j.1.2", "j.1.2"),
    ]
    .into_iter()
    .collect();
    assert_eq!(model.atoms, expected, "model must match the published answer set");
    assert_eq!(is_answer_set(&p, &model.universe, &model.atoms), Ok(true));
    println!("ACCEPTANCE 1 golden happy model: PASS ({elapsed:?})");
}

#[test]
fn criterion_2_golden_open_domain_failure() {
    let p = program("pass-fail.folp");
    let Verdict::Sat { model, .. } = solve_default(&p, "fail").unwrap() else {
        panic!("fail should be satisfiable in an open domain")
    };
    assert_eq!(model.universe.len(), 2, "one extra universe element");

    let hit = bounded_sat(&p, "fail", 1).unwrap().expect("oracle finds the witness");
    let expected: BTreeSet<GroundAtom> =
        [atom1("pass", "john"), atom1("fail", "x1")].into_iter().collect();
    assert_eq!(hit.atoms, expected);
    assert_eq!(bounded_sat(&p, "fail", 0).unwrap(), None, "closed domain has no witness");
    println!("ACCEPTANCE 2 golden open-domain failure: PASS");
}

#[test]
fn criterion_3_golden_constant_guard() {
    let p = program("pq-constant.folp");
    assert_eq!(solve_default(&p, "q").unwrap(), Verdict::Unsat);
    assert!(solve_default(&p, "p").unwrap().is_sat());
    assert_eq!(bounded_sat(&p, "q", 2).unwrap(), None);
    assert!(bounded_sat(&p, "p", 2).unwrap().is_some());
    // And the named individual never satisfies p.
    if let Verdict::Sat { model, .. } = solve_default(&p, "p").unwrap() {
        assert!(!model.atoms.contains(&atom1("p", "a")));
    }
    println!("ACCEPTANCE 3 golden constant guard: PASS");
}

#[test]
fn criterion_4_golden_inconsistent_choice() {
    let p = program("choice-inconsistent.folp");
    assert_eq!(solve_default(&p, "a").unwrap(), Verdict::Unsat);
    println!("ACCEPTANCE 4 golden inconsistent choice: PASS");
}

#[test]
fn criterion_5_simple_classification() {
    let p = program("marked-cycle.folp");
    assert!(!is_simple(&p), "the cycle through a successor literal is marked");
    let without_last: Vec<Rule> = p
        .rules
        .iter()
        .filter(|r| r.head_pred() != Some("f"))
        .cloned()
        .collect();
    let p2 = Program::new(without_last);
    assert!(is_simple(&p2));
    println!("ACCEPTANCE 5 simple classification: PASS");
}

#[test]
fn criterion_6_translation_goldens() {
    let kb = parse_dl(&sample("father.dl")).unwrap();
    let p = translate(&kb).unwrap();
    assert!(validate_folp(&p).is_empty());
    assert!(is_simple(&p), "transitivity-free translation is simple");

    let rhs = Concept::and(
        Concept::exists("child", Concept::atomic("Human")),
        Concept::not(Concept::atomic("Female")),
    );
    let rhs_name = concept_pred_name(&rhs);

    // Axiom constraint for the first inclusion.
    assert!(p.rules.iter().any(|r| matches!(
        r,
        Rule::ConstraintUnary { body, .. }
            if body.beta == vec![Signed::pos("Father"), Signed::neg(&rhs_name)]
    )));

    // Conjunction, existential and negation rule families.
    let exists_name = concept_pred_name(&Concept::exists("child", Concept::atomic("Human")));
    let neg_name = concept_pred_name(&Concept::not(Concept::atomic("Female")));
    let has_unary_rule = |head: &str, test: &dyn Fn(&folp::ast::UnaryRule) -> bool| {
        p.rules.iter().any(|r| matches!(r, Rule::Unary(u) if u.head_pred == head && test(u)))
    };
    assert!(has_unary_rule(&rhs_name, &|u| {
        let want: BTreeSet<Signed> =
            [Signed::pos(&exists_name), Signed::pos(&neg_name)].into_iter().collect();
        u.body.beta.iter().cloned().collect::<BTreeSet<_>>() == want
    }));
    assert!(has_unary_rule(&exists_name, &|u| {
        u.body.successors.len() == 1
            && u.body.successors[0].gamma == vec![Signed::pos("child")]
            && u.body.successors[0].delta == vec![Signed::pos("Human")]
    }));
    assert!(has_unary_rule(&neg_name, &|u| u.body.beta == vec![Signed::neg("Female")]));

    // Nominal fact.
    let nominal = concept_pred_name(&Concept::nominal("john"));
    assert!(has_unary_rule(&nominal, &|u| {
        u.head_term == Term::Const("john".into())
            && u.body.beta.is_empty()
            && u.body.successors.is_empty()
    }));

    // Counting rule: three successors, exactly three pairwise inequalities.
    let min3 = concept_pred_name(&Concept::at_least(3, "child", Concept::atomic("Human")));
    assert!(has_unary_rule(&min3, &|u| {
        u.body.successors.len() == 3 && u.body.psi.len() == 3
    }));
    println!("ACCEPTANCE 6 translation goldens: PASS");
}

#[test]
fn criterion_7_fhybrid_golden() {
    let kb = FHybridKB {
        sigma: parse_dl(&sample("father.dl")).unwrap(),
        program: program("unhappy-rules.folp"),
    };
    let verdict = fhybrid_sat(&kb, "unhappy", &SearchConfig::default()).unwrap();
    assert!(verdict.is_sat(), "unhappy is satisfiable via translation");

    let triple = fhybrid_bounded_check(&kb, "unhappy", 2, 24)
        .unwrap()
        .expect("bounded checker finds a model triple");
    assert_eq!(
        triple.answer_set,
        [atom1("unhappy", "john")].into_iter().collect::<BTreeSet<_>>(),
        "projection reduces to the single named fact"
    );
    println!("ACCEPTANCE 7 hybrid golden: PASS");
}

#[test]
fn criterion_10_determinism_of_solving() {
    // Byte-level CLI determinism is covered in the CLI crate; here the
    // verdicts and models must be identical across repeated runs.
    for name in ["happy.folp", "pass-fail.folp", "pq-constant.folp"] {
        let p = program(name);
        let pred = p.upreds()[0].clone();
        let cfg = SearchConfig::default();
        let a = solve(&p, &pred, &cfg).unwrap();
        let b = solve(&p, &pred, &cfg).unwrap();
        assert_eq!(a, b, "{name}/{pred}");
    }
    println!("ACCEPTANCE 10 deterministic solving: PASS");
}

#[test]
fn corpus_programs_all_validate() {
    for name in [
        "happy.folp",
        "happy-constraints.folp",
        "happy-constants.folp",
        "happy-local.folp",
        "pass-fail.folp",
        "pq-constant.folp",
        "marked-cycle.folp",
        "choice-inconsistent.folp",
        "unhappy-rules.folp",
    ] {
        let _ = program(name);
    }
    println!("corpus validation: PASS");
}

#[test]
fn extracted_happy_variants_are_satisfiable() {
    // The constraint and fact variants of the corpus behave as expected.
    let constrained = program("happy-constraints.folp");
    assert!(solve_default(&constrained, "unhappy").unwrap().is_sat());
    let with_fact = program("happy-constants.folp");
    let Verdict::Sat { model, .. } = solve_default(&with_fact, "happy").unwrap() else {
        panic!("happy should be satisfiable alongside the hungry individual")
    };
    assert!(
        model.atoms.contains(&atom1("unhappy", "j")),
        "the named individual stays unhappy: {:?}",
        model.atoms
    );
    assert_eq!(
        is_answer_set(&with_fact, &model.universe, &model.atoms),
        Ok(true)
    );
}
