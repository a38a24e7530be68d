//! Description logic knowledge bases: concept expressions with nominals,
//! qualified number restrictions and transitive roles, their finite-model
//! evaluation, and the subexpression closure that seeds the translation
//! into rule programs.

mod fhybrid;
mod translate;

pub use fhybrid::{
    concept_sat, fhybrid_bounded_check, fhybrid_sat, project, FHybridError, FHybridKB,
    ModelTriple,
};
pub use translate::{concept_pred_name, translate, translate_simple, TranslateError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Atomic(String),
    Nominal(String),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(String, Box<Concept>),
    Forall(String, Box<Concept>),
    AtLeast(u32, String, Box<Concept>),
    AtMost(u32, String, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: &str) -> Self {
        Concept::Atomic(name.into())
    }

    pub fn nominal(name: &str) -> Self {
        Concept::Nominal(name.into())
    }

    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: &str, c: Concept) -> Self {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn forall(role: &str, c: Concept) -> Self {
        Concept::Forall(role.into(), Box::new(c))
    }

    pub fn at_least(n: u32, role: &str, c: Concept) -> Self {
        Concept::AtLeast(n, role.into(), Box::new(c))
    }

    pub fn at_most(n: u32, role: &str, c: Concept) -> Self {
        Concept::AtMost(n, role.into(), Box::new(c))
    }

    /// Canonical form: conjunction and disjunction operands ordered, so
    /// structurally equal concepts print (and translate) identically.
    pub fn canonical(&self) -> Concept {
        match self {
            Concept::Atomic(_) | Concept::Nominal(_) => self.clone(),
            Concept::Not(c) => Concept::not(c.canonical()),
            Concept::And(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                if a <= b { Concept::and(a, b) } else { Concept::and(b, a) }
            }
            Concept::Or(a, b) => {
                let (a, b) = (a.canonical(), b.canonical());
                if a <= b { Concept::or(a, b) } else { Concept::or(b, a) }
            }
            Concept::Exists(r, c) => Concept::exists(r, c.canonical()),
            Concept::Forall(r, c) => Concept::forall(r, c.canonical()),
            Concept::AtLeast(n, r, c) => Concept::at_least(*n, r, c.canonical()),
            Concept::AtMost(n, r, c) => Concept::at_most(*n, r, c.canonical()),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Concept::Atomic(_))
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Atomic(n) => f.write_str(n),
            Concept::Nominal(o) => write!(f, "{{{o}}}"),
            Concept::Not(c) => write!(f, "not {c}"),
            Concept::And(a, b) => write!(f, "({a} and {b})"),
            Concept::Or(a, b) => write!(f, "({a} or {b})"),
            Concept::Exists(r, c) => write!(f, "exists {r}.{c}"),
            Concept::Forall(r, c) => write!(f, "forall {r}.{c}"),
            Concept::AtLeast(n, r, c) => write!(f, "atleast {n} {r}.{c}"),
            Concept::AtMost(n, r, c) => write!(f, "atmost {n} {r}.{c}"),
        }
    }
}

/// A terminological knowledge base: concept inclusions, role inclusions,
/// and transitivity declarations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DlKnowledgeBase {
    pub terminological: Vec<(Concept, Concept)>,
    pub role_axioms: Vec<(String, String)>,
    pub transitive: BTreeSet<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DlError {
    #[error("individual {0} is not in the domain")]
    UnknownIndividual(String),
    #[error("role {0} in a number restriction is not simple")]
    NonSimpleRole(String),
}

impl DlKnowledgeBase {
    /// All role names mentioned anywhere in the knowledge base.
    pub fn role_names(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.transitive.iter().cloned().collect();
        for (r, s) in &self.role_axioms {
            out.insert(r.clone());
            out.insert(s.clone());
        }
        for (c, d) in &self.terminological {
            collect_roles(c, &mut out);
            collect_roles(d, &mut out);
        }
        out
    }

    /// Atomic concept names mentioned anywhere.
    pub fn concept_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (c, d) in &self.terminological {
            collect_concept_names(c, &mut out);
            collect_concept_names(d, &mut out);
        }
        out
    }

    pub fn individuals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (c, d) in &self.terminological {
            collect_individuals(c, &mut out);
            collect_individuals(d, &mut out);
        }
        out
    }

    /// `sub` is below `sup` in the reflexive transitive closure of the
    /// role hierarchy.
    pub fn subrole(&self, sub: &str, sup: &str) -> bool {
        if sub == sup {
            return true;
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![sub.to_string()];
        while let Some(r) = stack.pop() {
            if r == sup {
                return true;
            }
            if !seen.insert(r.clone()) {
                continue;
            }
            for (a, b) in &self.role_axioms {
                if *a == r {
                    stack.push(b.clone());
                }
            }
        }
        false
    }

    /// Subroles of `role` (reflexive).
    pub fn subroles_of(&self, role: &str) -> BTreeSet<String> {
        self.role_names()
            .into_iter()
            .filter(|r| self.subrole(r, role))
            .chain(std::iter::once(role.to_string()))
            .collect()
    }

    /// A role is simple when neither it nor any of its subroles is
    /// transitive.
    pub fn is_simple_role(&self, role: &str) -> bool {
        !self.subroles_of(role).iter().any(|r| self.transitive.contains(r))
    }
}

fn collect_roles(c: &Concept, out: &mut BTreeSet<String>) {
    match c {
        Concept::Atomic(_) | Concept::Nominal(_) => {}
        Concept::Not(d) => collect_roles(d, out),
        Concept::And(a, b) | Concept::Or(a, b) => {
            collect_roles(a, out);
            collect_roles(b, out);
        }
        Concept::Exists(r, d)
        | Concept::Forall(r, d)
        | Concept::AtLeast(_, r, d)
        | Concept::AtMost(_, r, d) => {
            out.insert(r.clone());
            collect_roles(d, out);
        }
    }
}

fn collect_concept_names(c: &Concept, out: &mut BTreeSet<String>) {
    match c {
        Concept::Atomic(n) => {
            out.insert(n.clone());
        }
        Concept::Nominal(_) => {}
        Concept::Not(d) => collect_concept_names(d, out),
        Concept::And(a, b) | Concept::Or(a, b) => {
            collect_concept_names(a, out);
            collect_concept_names(b, out);
        }
        Concept::Exists(_, d)
        | Concept::Forall(_, d)
        | Concept::AtLeast(_, _, d)
        | Concept::AtMost(_, _, d) => collect_concept_names(d, out),
    }
}

fn collect_individuals(c: &Concept, out: &mut BTreeSet<String>) {
    match c {
        Concept::Nominal(o) => {
            out.insert(o.clone());
        }
        Concept::Atomic(_) => {}
        Concept::Not(d) => collect_individuals(d, out),
        Concept::And(a, b) | Concept::Or(a, b) => {
            collect_individuals(a, out);
            collect_individuals(b, out);
        }
        Concept::Exists(_, d)
        | Concept::Forall(_, d)
        | Concept::AtLeast(_, _, d)
        | Concept::AtMost(_, _, d) => collect_individuals(d, out),
    }
}

/// A finite interpretation: a domain plus extensions for concept and role
/// names. Nominals denote themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub domain: BTreeSet<String>,
    pub concepts: BTreeMap<String, BTreeSet<String>>,
    pub roles: BTreeMap<String, BTreeSet<(String, String)>>,
}

impl Interpretation {
    pub fn concept_ext(&self, name: &str) -> BTreeSet<String> {
        self.concepts.get(name).cloned().unwrap_or_default()
    }

    pub fn role_ext(&self, name: &str) -> BTreeSet<(String, String)> {
        self.roles.get(name).cloned().unwrap_or_default()
    }
}

/// Evaluates a concept to its extension under the standard semantics.
pub fn eval_concept(
    c: &Concept,
    interp: &Interpretation,
) -> Result<BTreeSet<String>, DlError> {
    Ok(match c {
        Concept::Atomic(name) => interp.concept_ext(name),
        Concept::Nominal(o) => {
            if !interp.domain.contains(o) {
                return Err(DlError::UnknownIndividual(o.clone()));
            }
            std::iter::once(o.clone()).collect()
        }
        Concept::Not(d) => {
            let inner = eval_concept(d, interp)?;
            interp.domain.difference(&inner).cloned().collect()
        }
        Concept::And(a, b) => {
            let (ea, eb) = (eval_concept(a, interp)?, eval_concept(b, interp)?);
            ea.intersection(&eb).cloned().collect()
        }
        Concept::Or(a, b) => {
            let (ea, eb) = (eval_concept(a, interp)?, eval_concept(b, interp)?);
            ea.union(&eb).cloned().collect()
        }
        Concept::Exists(r, d) => {
            let ext = interp.role_ext(r);
            let filler = eval_concept(d, interp)?;
            interp
                .domain
                .iter()
                .filter(|x| ext.iter().any(|(a, b)| a == *x && filler.contains(b)))
                .cloned()
                .collect()
        }
        Concept::Forall(r, d) => {
            let ext = interp.role_ext(r);
            let filler = eval_concept(d, interp)?;
            interp
                .domain
                .iter()
                .filter(|x| ext.iter().all(|(a, b)| a != *x || filler.contains(b)))
                .cloned()
                .collect()
        }
        Concept::AtLeast(n, r, d) => {
            let ext = interp.role_ext(r);
            let filler = eval_concept(d, interp)?;
            interp
                .domain
                .iter()
                .filter(|x| {
                    ext.iter().filter(|(a, b)| a == *x && filler.contains(b)).count()
                        >= *n as usize
                })
                .cloned()
                .collect()
        }
        Concept::AtMost(n, r, d) => {
            let ext = interp.role_ext(r);
            let filler = eval_concept(d, interp)?;
            interp
                .domain
                .iter()
                .filter(|x| {
                    ext.iter().filter(|(a, b)| a == *x && filler.contains(b)).count()
                        <= *n as usize
                })
                .cloned()
                .collect()
        }
    })
}

/// True when the interpretation satisfies every axiom of the knowledge
/// base.
pub fn satisfies(kb: &DlKnowledgeBase, interp: &Interpretation) -> Result<bool, DlError> {
    for (c, d) in &kb.terminological {
        let (ec, ed) = (eval_concept(c, interp)?, eval_concept(d, interp)?);
        if !ec.is_subset(&ed) {
            return Ok(false);
        }
    }
    for (r, s) in &kb.role_axioms {
        if !interp.role_ext(r).is_subset(&interp.role_ext(s)) {
            return Ok(false);
        }
    }
    for r in &kb.transitive {
        let ext = interp.role_ext(r);
        for (a, b) in &ext {
            for (c, d) in &ext {
                if b == c && !ext.contains(&(a.clone(), d.clone())) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Closure entry: a concept expression or a role name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosEntry {
    Concept(Concept),
    Role(String),
}

/// The subexpression closure of a knowledge base: the smallest set
/// containing both sides of every axiom and closed under decomposition,
/// with the extra entries needed by the translation (existentials for
/// transitive subroles, the complemented filler of a value restriction,
/// the n+1 counting concept of an at-most restriction).
pub fn closure(kb: &DlKnowledgeBase) -> BTreeSet<ClosEntry> {
    let mut out: BTreeSet<ClosEntry> = BTreeSet::new();
    let mut work: Vec<ClosEntry> = Vec::new();
    for (c, d) in &kb.terminological {
        work.push(ClosEntry::Concept(c.canonical()));
        work.push(ClosEntry::Concept(d.canonical()));
    }
    for (r, s) in &kb.role_axioms {
        work.push(ClosEntry::Role(r.clone()));
        work.push(ClosEntry::Role(s.clone()));
    }
    for r in &kb.transitive {
        work.push(ClosEntry::Role(r.clone()));
    }
    while let Some(e) = work.pop() {
        if !out.insert(e.clone()) {
            continue;
        }
        let ClosEntry::Concept(c) = e else { continue };
        match c {
            Concept::Atomic(_) | Concept::Nominal(_) => {}
            Concept::Not(d) => work.push(ClosEntry::Concept(*d)),
            Concept::And(a, b) | Concept::Or(a, b) => {
                work.push(ClosEntry::Concept(*a));
                work.push(ClosEntry::Concept(*b));
            }
            Concept::Exists(r, d) => {
                work.push(ClosEntry::Role(r.clone()));
                work.push(ClosEntry::Concept((*d).clone()));
                for s in kb.subroles_of(&r) {
                    if s != r && kb.transitive.contains(&s) {
                        work.push(ClosEntry::Concept(Concept::exists(&s, (*d).clone())));
                    }
                }
            }
            Concept::Forall(r, d) => {
                work.push(ClosEntry::Concept(Concept::exists(&r, Concept::not(*d))));
            }
            Concept::AtMost(n, r, d) => {
                work.push(ClosEntry::Concept(Concept::at_least(n + 1, &r, *d)));
            }
            Concept::AtLeast(_, r, d) => {
                work.push(ClosEntry::Role(r.clone()));
                work.push(ClosEntry::Concept(*d));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two axioms: fathers have a human child and are not female; the
    /// named individual has at most two human children.
    pub(crate) fn family_kb() -> DlKnowledgeBase {
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

    fn witness_interp() -> Interpretation {
        let mut i = Interpretation::default();
        i.domain = ["john".to_string(), "x".to_string()].into_iter().collect();
        i.concepts.insert("Father".into(), ["x".to_string()].into_iter().collect());
        i.concepts.insert("Female".into(), BTreeSet::new());
        i.concepts.insert("Human".into(), i.domain.clone());
        i.roles.insert(
            "child".into(),
            [("x".to_string(), "john".to_string())].into_iter().collect(),
        );
        i
    }

    #[test]
    fn eval_matches_hand_computed_extensions() {
        let i = witness_interp();
        let father = eval_concept(&Concept::atomic("Father"), &i).unwrap();
        assert_eq!(father, ["x".to_string()].into_iter().collect());

        let not_female = eval_concept(&Concept::not(Concept::atomic("Female")), &i).unwrap();
        assert_eq!(not_female, i.domain);

        let at_most = eval_concept(
            &Concept::at_most(2, "child", Concept::atomic("Human")),
            &i,
        )
        .unwrap();
        assert!(at_most.contains("john"));
    }

    #[test]
    fn witness_is_a_model_of_the_kb() {
        assert_eq!(satisfies(&family_kb(), &witness_interp()), Ok(true));
    }

    #[test]
    fn unknown_individual_is_an_error() {
        let i = Interpretation::default();
        assert!(eval_concept(&Concept::nominal("ghost"), &i).is_err());
    }

    #[test]
    fn closure_contains_expected_members() {
        let clos = closure(&family_kb());
        let has = |c: Concept| clos.contains(&ClosEntry::Concept(c.canonical()));
        assert!(has(Concept::atomic("Father")));
        assert!(has(Concept::and(
            Concept::exists("child", Concept::atomic("Human")),
            Concept::not(Concept::atomic("Female")),
        )));
        assert!(has(Concept::exists("child", Concept::atomic("Human"))));
        assert!(has(Concept::not(Concept::atomic("Female"))));
        assert!(has(Concept::atomic("Female")));
        assert!(has(Concept::atomic("Human")));
        assert!(has(Concept::nominal("john")));
        assert!(has(Concept::at_most(2, "child", Concept::atomic("Human"))));
        assert!(has(Concept::at_least(3, "child", Concept::atomic("Human"))));
        assert!(clos.contains(&ClosEntry::Role("child".into())));
    }

    #[test]
    fn closure_is_a_fixpoint() {
        let kb = family_kb();
        let clos = closure(&kb);
        // Re-running closure over a knowledge base whose axioms mention
        // every member adds nothing.
        let mut kb2 = kb.clone();
        for e in &clos {
            if let ClosEntry::Concept(c) = e {
                kb2.terminological.push((c.clone(), c.clone()));
            }
        }
        assert_eq!(closure(&kb2), clos);
    }

    #[test]
    fn empty_kb_has_empty_closure() {
        assert!(closure(&DlKnowledgeBase::default()).is_empty());
    }

    #[test]
    fn value_restriction_adds_complemented_existential() {
        let kb = DlKnowledgeBase {
            terminological: vec![(
                Concept::atomic("C"),
                Concept::forall("r", Concept::atomic("D")),
            )],
            role_axioms: vec![],
            transitive: BTreeSet::new(),
        };
        let clos = closure(&kb);
        assert!(clos.contains(&ClosEntry::Concept(Concept::exists(
            "r",
            Concept::not(Concept::atomic("D"))
        ))));
    }

    #[test]
    fn simple_roles_respect_the_hierarchy() {
        let mut kb = DlKnowledgeBase::default();
        kb.role_axioms.push(("s".into(), "r".into()));
        kb.transitive.insert("s".into());
        assert!(!kb.is_simple_role("r"));
        assert!(!kb.is_simple_role("s"));
        kb.transitive.clear();
        assert!(kb.is_simple_role("r"));
    }
}
