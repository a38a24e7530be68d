//! Shared helpers for the integration suites: a seeded generator of
//! valid tree-shaped programs.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use folp::ast::{
    BinaryBody, BinaryRule, Program, Rule, Signed, Successor, Term, UnaryBody, UnaryRule,
};

const UNARY: [&str; 3] = ["a", "b", "c"];
const BINARY: [&str; 2] = ["f", "g"];
const CONSTANT: &str = "n0";

pub struct Shape {
    pub upreds: Vec<&'static str>,
    pub bpreds: Vec<&'static str>,
    pub with_constant: bool,
}

pub fn signed(rng: &mut ChaCha8Rng, pool: &[&str]) -> Signed {
    let pred = pool[rng.gen_range(0..pool.len())];
    if rng.gen_bool(0.5) {
        Signed::neg(pred)
    } else {
        Signed::pos(pred)
    }
}

pub fn lits(rng: &mut ChaCha8Rng, pool: &[&str], max: usize) -> Vec<Signed> {
    let n = rng.gen_range(0..=max);
    let mut out: Vec<Signed> = Vec::new();
    for _ in 0..n {
        let s = signed(rng, pool);
        if !out.iter().any(|o| o.pred == s.pred) {
            out.push(s);
        }
    }
    out
}

pub fn head_term(rng: &mut ChaCha8Rng, shape: &Shape) -> Term {
    if shape.with_constant && rng.gen_bool(0.25) {
        Term::Const(CONSTANT.into())
    } else {
        Term::Var("X".into())
    }
}

pub fn successor(rng: &mut ChaCha8Rng, shape: &Shape, index: usize) -> Successor {
    let term = if shape.with_constant && rng.gen_bool(0.2) {
        Term::Const(CONSTANT.into())
    } else {
        Term::Var(format!("Y{index}"))
    };
    let mut gamma = lits(rng, &shape.bpreds, 2);
    if term.is_var() && !gamma.iter().any(|l| !l.negated) {
        gamma.insert(0, Signed::pos(shape.bpreds[rng.gen_range(0..shape.bpreds.len())]));
        gamma.dedup_by(|a, b| a.pred == b.pred);
    }
    let mut delta = lits(rng, &shape.upreds, 1);
    if gamma.is_empty() && delta.is_empty() {
        // An entirely silent successor has no surface form.
        delta.push(signed(rng, &shape.upreds));
    }
    Successor { term, gamma, delta }
}

pub fn random_rule(rng: &mut ChaCha8Rng, shape: &Shape) -> Rule {
    let roll: f64 = rng.gen();
    if roll < 0.15 {
        return Rule::FreeUnary {
            pred: shape.upreds[rng.gen_range(0..shape.upreds.len())].into(),
            term: Term::Var("X".into()),
        };
    }
    if roll < 0.25 && !shape.bpreds.is_empty() {
        return Rule::FreeBinary {
            pred: shape.bpreds[rng.gen_range(0..shape.bpreds.len())].into(),
            terms: (Term::Var("X".into()), Term::Var("Y".into())),
        };
    }
    if roll < 0.35 && shape.with_constant {
        // Ground fact.
        return Rule::Unary(UnaryRule {
            head_pred: shape.upreds[rng.gen_range(0..shape.upreds.len())].into(),
            head_term: Term::Const(CONSTANT.into()),
            body: UnaryBody::default(),
        });
    }
    if roll < 0.45 {
        // Constraint over the root.
        let mut beta = lits(rng, &shape.upreds, 2);
        if beta.is_empty() {
            beta.push(Signed::pos(shape.upreds[0]));
        }
        return Rule::ConstraintUnary {
            term: head_term(rng, shape),
            body: UnaryBody { beta, successors: vec![], psi: BTreeSet::new() },
        };
    }
    if roll < 0.62 && !shape.bpreds.is_empty() {
        // Binary rule.
        let mut gamma = lits(rng, &shape.bpreds, 2);
        if !gamma.iter().any(|l| !l.negated) {
            gamma.insert(0, Signed::pos(shape.bpreds[rng.gen_range(0..shape.bpreds.len())]));
            gamma.dedup_by(|a, b| a.pred == b.pred);
        }
        return Rule::Binary(BinaryRule {
            head_pred: shape.bpreds[rng.gen_range(0..shape.bpreds.len())].into(),
            head_terms: (Term::Var("X".into()), Term::Var("Y".into())),
            body: BinaryBody {
                beta: lits(rng, &shape.upreds, 1),
                gamma,
                delta: lits(rng, &shape.upreds, 1),
            },
        });
    }
    // Unary rule with up to two successors.
    let head = head_term(rng, shape);
    let succ_count = if shape.bpreds.is_empty() { 0 } else { rng.gen_range(0..=2) };
    let mut successors: Vec<Successor> = Vec::new();
    for i in 0..succ_count {
        let mut s = successor(rng, shape, i + 1);
        // Constant successors that repeat the head term or an earlier
        // slot have no distinct surface form; keep those on variables.
        let clashes = s.term.is_const()
            && (s.term == head || successors.iter().any(|t| t.term == s.term));
        if clashes {
            s.term = Term::Var(format!("Y{}", i + 1));
            if !s.gamma.iter().any(|l| !l.negated) {
                s.gamma.insert(
                    0,
                    Signed::pos(shape.bpreds[rng.gen_range(0..shape.bpreds.len())]),
                );
            }
        }
        successors.push(s);
    }
    let mut psi = BTreeSet::new();
    if successors.len() == 2
        && successors.iter().all(|s| s.term.is_var())
        && rng.gen_bool(0.3)
    {
        psi.insert((0, 1));
    }
    Rule::Unary(UnaryRule {
        head_pred: shape.upreds[rng.gen_range(0..shape.upreds.len())].into(),
        head_term: head,
        body: UnaryBody { beta: lits(rng, &shape.upreds, 2), successors, psi },
    })
}

pub fn random_program(rng: &mut ChaCha8Rng) -> Program {
    let shape = Shape {
        upreds: UNARY[..rng.gen_range(1..=3)].to_vec(),
        bpreds: BINARY[..rng.gen_range(0..=2)].to_vec(),
        with_constant: rng.gen_bool(0.5),
    };
    let n = rng.gen_range(1..=5);
    let rules: Vec<Rule> = (0..n).map(|_| random_rule(rng, &shape)).collect();
    Program::new(rules)
}

