//! Ground semantics at desk scale: grounding, reducts, least models,
//! answer-set checking, and a brute-force bounded search for open answer
//! sets. This module is deliberately independent of the tableau engine so
//! the two can be checked against each other.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::ast::{Program, Rule, Signed, Term};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("universe is missing program constant {0}")]
    MissingConstant(String),
    #[error("oracle scale exceeded: {0} ground atoms over limit {1}")]
    ScaleExceeded(usize, usize),
}

/// A variable-free atom over universe elements.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn unary(pred: impl Into<String>, a: impl Into<String>) -> Self {
        GroundAtom { pred: pred.into(), args: vec![a.into()] }
    }

    pub fn binary(
        pred: impl Into<String>,
        a: impl Into<String>,
        b: impl Into<String>,
    ) -> Self {
        GroundAtom { pred: pred.into(), args: vec![a.into(), b.into()] }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pred, self.args.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundHead {
    /// Single-atom head of a definite rule.
    Atom(GroundAtom),
    /// Head of a ground free rule (the atom may be freely included).
    Free(GroundAtom),
    /// Constraint.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundRule {
    pub head: GroundHead,
    pub body_pos: Vec<GroundAtom>,
    pub body_neg: Vec<GroundAtom>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
    pub atoms: BTreeSet<GroundAtom>,
}

/// A universe together with a set of ground atoms over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenInterpretation {
    pub universe: Vec<String>,
    pub atoms: BTreeSet<GroundAtom>,
}

fn subst(term: &Term, env: &BTreeMap<String, String>) -> String {
    match term {
        Term::Const(c) => c.clone(),
        Term::Var(v) => env[v].clone(),
    }
}

fn rule_vars(rule: &Rule) -> Vec<String> {
    let mut vars = Vec::new();
    let mut push = |t: &Term| {
        if let Term::Var(v) = t {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    };
    match rule {
        Rule::FreeUnary { term, .. } => push(term),
        Rule::FreeBinary { terms, .. } => {
            push(&terms.0);
            push(&terms.1);
        }
        Rule::Unary(r) => {
            push(&r.head_term);
            for s in &r.body.successors {
                push(&s.term);
            }
        }
        Rule::Binary(r) => {
            push(&r.head_terms.0);
            push(&r.head_terms.1);
        }
        Rule::ConstraintUnary { term, body } => {
            push(term);
            for s in &body.successors {
                push(&s.term);
            }
        }
        Rule::ConstraintBinary { terms, .. } => {
            push(&terms.0);
            push(&terms.1);
        }
    }
    vars
}

fn split(lits: &[Signed], mk: impl Fn(&Signed) -> GroundAtom, pos: &mut Vec<GroundAtom>, neg: &mut Vec<GroundAtom>) {
    for l in lits {
        let a = mk(l);
        if l.negated {
            neg.push(a);
        } else {
            pos.push(a);
        }
    }
}

fn instantiate(rule: &Rule, env: &BTreeMap<String, String>) -> Option<GroundRule> {
    match rule {
        Rule::FreeUnary { pred, term } => Some(GroundRule {
            head: GroundHead::Free(GroundAtom::unary(pred, subst(term, env))),
            body_pos: vec![],
            body_neg: vec![],
        }),
        Rule::FreeBinary { pred, terms } => Some(GroundRule {
            head: GroundHead::Free(GroundAtom::binary(
                pred,
                subst(&terms.0, env),
                subst(&terms.1, env),
            )),
            body_pos: vec![],
            body_neg: vec![],
        }),
        Rule::Unary(r) => {
            let root = subst(&r.head_term, env);
            let succ: Vec<String> =
                r.body.successors.iter().map(|s| subst(&s.term, env)).collect();
            // Instances whose inequalities fail are dropped; the others
            // have their inequalities erased.
            for &(i, j) in &r.body.psi {
                if succ[i] == succ[j] {
                    return None;
                }
            }
            let mut body_pos = Vec::new();
            let mut body_neg = Vec::new();
            split(&r.body.beta, |l| GroundAtom::unary(&l.pred, &root), &mut body_pos, &mut body_neg);
            for (m, s) in r.body.successors.iter().enumerate() {
                split(
                    &s.gamma,
                    |l| GroundAtom::binary(&l.pred, &root, &succ[m]),
                    &mut body_pos,
                    &mut body_neg,
                );
                split(
                    &s.delta,
                    |l| GroundAtom::unary(&l.pred, &succ[m]),
                    &mut body_pos,
                    &mut body_neg,
                );
            }
            Some(GroundRule {
                head: GroundHead::Atom(GroundAtom::unary(&r.head_pred, &root)),
                body_pos,
                body_neg,
            })
        }
        Rule::Binary(r) => {
            let s = subst(&r.head_terms.0, env);
            let t = subst(&r.head_terms.1, env);
            let mut body_pos = Vec::new();
            let mut body_neg = Vec::new();
            split(&r.body.beta, |l| GroundAtom::unary(&l.pred, &s), &mut body_pos, &mut body_neg);
            split(&r.body.gamma, |l| GroundAtom::binary(&l.pred, &s, &t), &mut body_pos, &mut body_neg);
            split(&r.body.delta, |l| GroundAtom::unary(&l.pred, &t), &mut body_pos, &mut body_neg);
            Some(GroundRule {
                head: GroundHead::Atom(GroundAtom::binary(&r.head_pred, &s, &t)),
                body_pos,
                body_neg,
            })
        }
        Rule::ConstraintUnary { term, body } => {
            let root = subst(term, env);
            let succ: Vec<String> = body.successors.iter().map(|s| subst(&s.term, env)).collect();
            for &(i, j) in &body.psi {
                if succ[i] == succ[j] {
                    return None;
                }
            }
            let mut body_pos = Vec::new();
            let mut body_neg = Vec::new();
            split(&body.beta, |l| GroundAtom::unary(&l.pred, &root), &mut body_pos, &mut body_neg);
            for (m, s) in body.successors.iter().enumerate() {
                split(
                    &s.gamma,
                    |l| GroundAtom::binary(&l.pred, &root, &succ[m]),
                    &mut body_pos,
                    &mut body_neg,
                );
                split(
                    &s.delta,
                    |l| GroundAtom::unary(&l.pred, &succ[m]),
                    &mut body_pos,
                    &mut body_neg,
                );
            }
            Some(GroundRule { head: GroundHead::None, body_pos, body_neg })
        }
        Rule::ConstraintBinary { terms, body } => {
            let s = subst(&terms.0, env);
            let t = subst(&terms.1, env);
            let mut body_pos = Vec::new();
            let mut body_neg = Vec::new();
            split(&body.beta, |l| GroundAtom::unary(&l.pred, &s), &mut body_pos, &mut body_neg);
            split(&body.gamma, |l| GroundAtom::binary(&l.pred, &s, &t), &mut body_pos, &mut body_neg);
            split(&body.delta, |l| GroundAtom::unary(&l.pred, &t), &mut body_pos, &mut body_neg);
            Some(GroundRule { head: GroundHead::None, body_pos, body_neg })
        }
    }
}

/// Substitutes every variable by every universe element.
pub fn ground(program: &Program, universe: &[String]) -> Result<GroundProgram, OracleError> {
    for c in program.constants() {
        if !universe.contains(c) {
            return Err(OracleError::MissingConstant(c.clone()));
        }
    }
    let mut gp = GroundProgram::default();
    for rule in &program.rules {
        let vars = rule_vars(rule);
        if !vars.is_empty() && universe.is_empty() {
            continue;
        }
        let mut env: BTreeMap<String, String> = BTreeMap::new();
        let mut idx = vec![0usize; vars.len()];
        'assignments: loop {
            for (k, v) in vars.iter().enumerate() {
                env.insert(v.clone(), universe[idx[k]].clone());
            }
            if let Some(gr) = instantiate(rule, &env) {
                match &gr.head {
                    GroundHead::Atom(a) | GroundHead::Free(a) => {
                        gp.atoms.insert(a.clone());
                    }
                    GroundHead::None => {}
                }
                for a in gr.body_pos.iter().chain(&gr.body_neg) {
                    gp.atoms.insert(a.clone());
                }
                gp.rules.push(gr);
            }
            // Advance the assignment counter.
            let mut k = 0;
            loop {
                if k == vars.len() {
                    break 'assignments;
                }
                idx[k] += 1;
                if idx[k] < universe.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    Ok(gp)
}

/// The reduct w.r.t. interpretation `i`: rules whose negative body holds
/// are kept positive; free rules survive exactly when their atom is in
/// `i`, as facts.
pub fn gl_reduct(gp: &GroundProgram, i: &BTreeSet<GroundAtom>) -> GroundProgram {
    let mut out = GroundProgram { rules: Vec::new(), atoms: gp.atoms.clone() };
    for r in &gp.rules {
        if r.body_neg.iter().any(|a| i.contains(a)) {
            continue;
        }
        match &r.head {
            GroundHead::Free(a) => {
                if i.contains(a) {
                    out.rules.push(GroundRule {
                        head: GroundHead::Atom(a.clone()),
                        body_pos: vec![],
                        body_neg: vec![],
                    });
                }
            }
            _ => out.rules.push(GroundRule {
                head: r.head.clone(),
                body_pos: r.body_pos.clone(),
                body_neg: vec![],
            }),
        }
    }
    out
}

/// Bottom-up fixpoint of a positive program; constraints are ignored
/// here and checked separately.
pub fn least_model(gp: &GroundProgram) -> BTreeSet<GroundAtom> {
    let mut model = BTreeSet::new();
    loop {
        let mut changed = false;
        for r in &gp.rules {
            if let GroundHead::Atom(h) = &r.head {
                if !model.contains(h) && r.body_pos.iter().all(|a| model.contains(a)) {
                    model.insert(h.clone());
                    changed = true;
                }
            }
        }
        if !changed {
            return model;
        }
    }
}

fn violates_constraints(gp: &GroundProgram, m: &BTreeSet<GroundAtom>) -> bool {
    gp.rules.iter().any(|r| {
        matches!(r.head, GroundHead::None) && r.body_pos.iter().all(|a| m.contains(a))
    })
}

fn is_answer_set_ground(gp: &GroundProgram, m: &BTreeSet<GroundAtom>) -> bool {
    if !m.iter().all(|a| gp.atoms.contains(a)) {
        return false;
    }
    let reduct = gl_reduct(gp, m);
    if violates_constraints(&reduct, m) {
        return false;
    }
    least_model(&reduct) == *m
}

/// Open answer-set test: `m` must be the least model of the reduct of the
/// grounding over `universe`, and violate no constraint.
pub fn is_answer_set(
    program: &Program,
    universe: &[String],
    m: &BTreeSet<GroundAtom>,
) -> Result<bool, OracleError> {
    let gp = ground(program, universe)?;
    Ok(is_answer_set_ground(&gp, m))
}

/// Reference implementation used by the tests: an interpretation is an
/// answer set when it is a model of its reduct and no proper subset is.
pub fn is_answer_set_by_minimality(
    program: &Program,
    universe: &[String],
    m: &BTreeSet<GroundAtom>,
) -> Result<bool, OracleError> {
    let gp = ground(program, universe)?;
    if !m.iter().all(|a| gp.atoms.contains(a)) {
        return Ok(false);
    }
    let reduct = gl_reduct(&gp, m);
    fn is_model(gp: &GroundProgram, m: &BTreeSet<GroundAtom>) -> bool {
        gp.rules.iter().all(|r| match &r.head {
            GroundHead::Atom(h) => {
                !r.body_pos.iter().all(|a| m.contains(a)) || m.contains(h)
            }
            GroundHead::None => !r.body_pos.iter().all(|a| m.contains(a)),
            GroundHead::Free(_) => true,
        })
    }
    if !is_model(&reduct, m) {
        return Ok(false);
    }
    // Enumerate proper subsets of m.
    let atoms: Vec<&GroundAtom> = m.iter().collect();
    let n = atoms.len();
    for mask in 0..(1u64 << n) {
        if mask == (1u64 << n) - 1 {
            continue;
        }
        let sub: BTreeSet<GroundAtom> = atoms
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << *k) != 0)
            .map(|(_, a)| (*a).clone())
            .collect();
        if is_model(&reduct, &sub) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Maximum number of ground atoms the bounded search will handle.
    pub atom_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { atom_limit: 24 }
    }
}

/// Names for anonymous universe elements: x1, x2, ... skipping program
/// constants.
pub fn anonymous_names(program: &Program, count: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < count {
        let name = format!("x{k}");
        if !program.has_constant(&name) {
            out.push(name);
        }
        k += 1;
    }
    out
}

/// Searches universes of growing size for an open answer set containing
/// an atom over `pred`, returning the first hit in enumeration order.
pub fn bounded_sat(
    program: &Program,
    pred: &str,
    max_extra: usize,
) -> Result<Option<OpenInterpretation>, OracleError> {
    bounded_sat_with(program, pred, max_extra, OracleConfig::default())
}

pub fn bounded_sat_with(
    program: &Program,
    pred: &str,
    max_extra: usize,
    config: OracleConfig,
) -> Result<Option<OpenInterpretation>, OracleError> {
    let extras = anonymous_names(program, max_extra);
    {
        // Desk-scale guard, evaluated against the largest universe tried.
        let mut universe: Vec<String> = program.constants().to_vec();
        universe.extend(extras.iter().cloned());
        if universe.is_empty() {
            universe.push("x1".to_string());
        }
        let gp = ground(program, &universe)?;
        if gp.atoms.len() > config.atom_limit {
            return Err(OracleError::ScaleExceeded(gp.atoms.len(), config.atom_limit));
        }
    }
    for j in 0..=max_extra {
        let mut universe: Vec<String> = program.constants().to_vec();
        universe.extend(extras[..j].iter().cloned());
        if universe.is_empty() {
            // A universe is non-empty; a constant-free program still
            // needs at least one element.
            continue;
        }
        if let Some(m) = search_universe(program, &universe, Some(pred))? {
            return Ok(Some(OpenInterpretation { universe, atoms: m }));
        }
    }
    Ok(None)
}

/// Enumerates interpretations over the grounding of `program` w.r.t.
/// `universe` and returns the first answer set (containing an atom over
/// `required_pred`, when given).
fn search_universe(
    program: &Program,
    universe: &[String],
    required_pred: Option<&str>,
) -> Result<Option<BTreeSet<GroundAtom>>, OracleError> {
    let gp = ground(program, universe)?;
    Ok(search_ground(&gp, required_pred))
}

/// Subset search over the atom inventory with two sound prunes: atoms
/// with no defining rule are forced out, and fully decided violated
/// constraints cut the branch.
pub fn search_ground(
    gp: &GroundProgram,
    required_pred: Option<&str>,
) -> Option<BTreeSet<GroundAtom>> {
    let atoms: Vec<GroundAtom> = gp.atoms.iter().cloned().collect();
    let index: BTreeMap<&GroundAtom, usize> =
        atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let n = atoms.len();

    let mut definable = vec![false; n];
    for r in &gp.rules {
        match &r.head {
            GroundHead::Atom(h) | GroundHead::Free(h) => definable[index[h]] = true,
            GroundHead::None => {}
        }
    }

    // Indexed rules for the partial-constraint cut.
    struct IdxRule {
        head: Option<usize>,
        is_free: bool,
        pos: Vec<usize>,
        neg: Vec<usize>,
    }
    let rules: Vec<IdxRule> = gp
        .rules
        .iter()
        .map(|r| IdxRule {
            head: match &r.head {
                GroundHead::Atom(h) | GroundHead::Free(h) => Some(index[h]),
                GroundHead::None => None,
            },
            is_free: matches!(r.head, GroundHead::Free(_)),
            pos: r.body_pos.iter().map(|a| index[a]).collect(),
            neg: r.body_neg.iter().map(|a| index[a]).collect(),
        })
        .collect();

    // 0 undecided, 1 in, 2 out.
    let mut state = vec![0u8; n];
    for (i, d) in definable.iter().enumerate() {
        if !d {
            state[i] = 2;
        }
    }
    for r in &rules {
        // Facts force their head in.
        if !r.is_free && r.pos.is_empty() && r.neg.is_empty() {
            if let Some(h) = r.head {
                if state[h] == 2 {
                    return None;
                }
                state[h] = 1;
            }
        }
    }

    fn cut(rules: &[IdxRule], state: &[u8]) -> bool {
        for r in rules {
            if r.is_free {
                continue;
            }
            let body_decided_true = r.pos.iter().all(|&a| state[a] == 1)
                && r.neg.iter().all(|&a| state[a] == 2);
            if !body_decided_true {
                continue;
            }
            match r.head {
                None => return true,
                Some(h) if state[h] == 2 => return true,
                _ => {}
            }
        }
        false
    }

    fn rec(
        gp: &GroundProgram,
        atoms: &[GroundAtom],
        rules: &[IdxRule],
        state: &mut [u8],
        pos: usize,
        required_pred: Option<&str>,
    ) -> Option<BTreeSet<GroundAtom>> {
        if cut(rules, state) {
            return None;
        }
        let Some(next) = (pos..state.len()).find(|&i| state[i] == 0) else {
            let m: BTreeSet<GroundAtom> = state
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == 1)
                .map(|(i, _)| atoms[i].clone())
                .collect();
            if let Some(p) = required_pred {
                if !m.iter().any(|a| a.pred == p) {
                    return None;
                }
            }
            if is_answer_set_ground(gp, &m) {
                return Some(m);
            }
            return None;
        };
        for val in [1u8, 2u8] {
            state[next] = val;
            if let Some(m) = rec(gp, atoms, rules, state, next + 1, required_pred) {
                state[next] = 0;
                return Some(m);
            }
        }
        state[next] = 0;
        None
    }

    rec(gp, &atoms, &rules, &mut state, 0, required_pred)
}

/// The bounded-model reduction: the base program plus fresh elements and
/// one ground constraint demanding that `pred` holds at one of the named
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkProgram {
    pub base: Program,
    pub extra_constants: Vec<String>,
    pub pred: String,
    /// The added ground constraint, as negated atoms.
    pub constraint: Vec<GroundAtom>,
}

impl PkProgram {
    /// The Herbrand universe of the extended program.
    pub fn herbrand(&self) -> Vec<String> {
        let mut u = self.base.constants().to_vec();
        u.extend(self.extra_constants.iter().cloned());
        u
    }

    pub fn constraint_text(&self) -> String {
        let lits: Vec<String> =
            self.constraint.iter().map(|a| format!("not {a}")).collect();
        format!(":- {}.", lits.join(", "))
    }
}

/// Builds the k-th bounded-model program for `pred`.
pub fn build_pk(program: &Program, k: usize, pred: &str) -> PkProgram {
    assert!(k >= 1, "bounded-model index starts at 1");
    let extras = anonymous_names(program, k);
    let mut constraint: Vec<GroundAtom> =
        extras.iter().map(|x| GroundAtom::unary(pred, x)).collect();
    for c in program.constants() {
        constraint.push(GroundAtom::unary(pred, c));
    }
    PkProgram {
        base: program.clone(),
        extra_constants: extras,
        pred: pred.to_string(),
        constraint,
    }
}

/// Answer-set existence for the extended program over its Herbrand
/// universe; agreement with `bounded_sat` is what the added constraint
/// is for.
pub fn pk_answer_set_exists(
    pk: &PkProgram,
    config: OracleConfig,
) -> Result<Option<BTreeSet<GroundAtom>>, OracleError> {
    let universe = pk.herbrand();
    let mut gp = ground(&pk.base, &universe)?;
    if gp.atoms.len() > config.atom_limit {
        return Err(OracleError::ScaleExceeded(gp.atoms.len(), config.atom_limit));
    }
    for a in &pk.constraint {
        gp.atoms.insert(a.clone());
    }
    gp.rules.push(GroundRule {
        head: GroundHead::None,
        body_pos: vec![],
        body_neg: pk.constraint.clone(),
    });
    Ok(search_ground(&gp, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_program;

    const PASS_FAIL: &str = "fail(X) :- not pass(X).\npass(john).\n";

    fn u(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grounding_counts_instances() {
        let p = parse_program(PASS_FAIL).unwrap();
        let gp = ground(&p, &u(&["john", "x"])).unwrap();
        // Two instances of the first rule plus the fact.
        assert_eq!(gp.rules.len(), 3);
    }

    #[test]
    fn grounding_without_variables_is_identity_sized() {
        let p = parse_program("pass(john).\n").unwrap();
        let gp = ground(&p, &u(&["john"])).unwrap();
        assert_eq!(gp.rules.len(), 1);
    }

    #[test]
    fn inequality_instances_are_dropped() {
        let p = parse_program("happy(X) :- friend(X,Y), friend(X,Z), Y != Z.\n").unwrap();
        let gp = ground(&p, &u(&["a", "b"])).unwrap();
        // 2 choices for X times 2 valid (Y,Z) pairs.
        assert_eq!(gp.rules.len(), 4);
        assert!(gp
            .rules
            .iter()
            .all(|r| matches!(&r.head, GroundHead::Atom(_))));
    }

    #[test]
    fn reduct_drops_blocked_rules_and_keeps_survivors() {
        let p = parse_program(PASS_FAIL).unwrap();
        let gp = ground(&p, &u(&["john", "x"])).unwrap();
        let i: BTreeSet<GroundAtom> =
            [GroundAtom::unary("pass", "john"), GroundAtom::unary("fail", "x")]
                .into_iter()
                .collect();
        let r = gl_reduct(&gp, &i);
        assert_eq!(r.rules.len(), 2);
        assert!(r.rules.iter().all(|r| r.body_neg.is_empty()));
        let lm = least_model(&r);
        assert_eq!(lm, i);
    }

    #[test]
    fn free_rule_reduct_is_membership_conditional() {
        let p = parse_program("p(c) v not p(c).\n").unwrap();
        let gp = ground(&p, &u(&["c"])).unwrap();
        let empty = BTreeSet::new();
        assert!(gl_reduct(&gp, &empty).rules.is_empty());
        let with: BTreeSet<GroundAtom> = [GroundAtom::unary("p", "c")].into_iter().collect();
        assert_eq!(gl_reduct(&gp, &with).rules.len(), 1);
    }

    #[test]
    fn positive_program_reduct_is_identity() {
        let p = parse_program("a(c).\nb(X) :- a(X).\n").unwrap();
        let gp = ground(&p, &u(&["c"])).unwrap();
        let r = gl_reduct(&gp, &BTreeSet::new());
        assert_eq!(r.rules.len(), gp.rules.len());
    }

    #[test]
    fn answer_set_check_on_the_open_witness() {
        let p = parse_program(PASS_FAIL).unwrap();
        let m: BTreeSet<GroundAtom> =
            [GroundAtom::unary("pass", "john"), GroundAtom::unary("fail", "x")]
                .into_iter()
                .collect();
        assert_eq!(is_answer_set(&p, &u(&["john", "x"]), &m), Ok(true));
        assert_eq!(is_answer_set_by_minimality(&p, &u(&["john", "x"]), &m), Ok(true));
    }

    #[test]
    fn non_minimal_candidate_is_rejected() {
        // With the free atom in, the definite rule forces the second atom.
        let p = parse_program("q(a) :- p(a), not q(a).\np(X) v not p(X).\n").unwrap();
        let m: BTreeSet<GroundAtom> = [GroundAtom::unary("p", "a")].into_iter().collect();
        assert_eq!(is_answer_set(&p, &u(&["a"]), &m), Ok(false));
    }

    #[test]
    fn empty_interpretation_is_answer_set_without_facts() {
        let p = parse_program("fail(X) :- not pass(X).\n").unwrap();
        // pass(x) not in M means fail(x) must be in: empty fails.
        assert_eq!(is_answer_set(&p, &u(&["x1"]), &BTreeSet::new()), Ok(false));
        let p2 = parse_program("a(X) :- b(X).\n").unwrap();
        assert_eq!(is_answer_set(&p2, &u(&["x1"]), &BTreeSet::new()), Ok(true));
    }

    #[test]
    fn bounded_search_finds_open_witness_with_one_extra() {
        let p = parse_program(PASS_FAIL).unwrap();
        let hit = bounded_sat(&p, "fail", 1).unwrap().expect("found");
        assert_eq!(hit.universe, u(&["john", "x1"]));
        let expect: BTreeSet<GroundAtom> =
            [GroundAtom::unary("pass", "john"), GroundAtom::unary("fail", "x1")]
                .into_iter()
                .collect();
        assert_eq!(hit.atoms, expect);
    }

    #[test]
    fn bounded_search_respects_zero_extras() {
        let p = parse_program(PASS_FAIL).unwrap();
        assert_eq!(bounded_sat(&p, "fail", 0).unwrap(), None);
    }

    #[test]
    fn constant_guarded_predicate_is_bounded_unsat() {
        let p = parse_program("q(a) :- p(a), not q(a).\np(X) v not p(X).\n").unwrap();
        assert_eq!(bounded_sat(&p, "q", 2).unwrap(), None);
        assert!(bounded_sat(&p, "p", 2).unwrap().is_some());
    }

    #[test]
    fn scale_guard_trips() {
        let p = parse_program("f(X,Y) v not f(X,Y).\ng(X,Y) v not g(X,Y).\n").unwrap();
        let err = bounded_sat_with(&p, "f", 4, OracleConfig { atom_limit: 10 }).unwrap_err();
        assert!(matches!(err, OracleError::ScaleExceeded(_, _)));
    }

    #[test]
    fn pk_constraint_matches_schema() {
        let p = parse_program(PASS_FAIL).unwrap();
        let pk = build_pk(&p, 1, "fail");
        assert_eq!(pk.constraint_text(), ":- not fail(x1), not fail(john).");
    }

    #[test]
    fn pk_agrees_with_bounded_search() {
        let p = parse_program(PASS_FAIL).unwrap();
        let pk = build_pk(&p, 1, "fail");
        let found = pk_answer_set_exists(&pk, OracleConfig::default()).unwrap();
        assert!(found.is_some());
        assert!(bounded_sat(&p, "fail", 1).unwrap().is_some());
        // And the k-free direction: no answer set of the base program over
        // its Herbrand universe satisfies the predicate.
        let p0 = build_pk(&p, 1, "fail");
        let m = pk_answer_set_exists(&p0, OracleConfig::default()).unwrap().unwrap();
        assert!(m.iter().any(|a| a.pred == "fail"));
    }

    #[test]
    fn pk_without_constants_ranges_over_fresh_elements_only() {
        let p = parse_program("a(X) :- not b(X).\n").unwrap();
        let pk = build_pk(&p, 2, "a");
        assert_eq!(pk.constraint_text(), ":- not a(x1), not a(x2).");
    }
}
