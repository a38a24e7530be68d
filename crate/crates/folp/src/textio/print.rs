//! Pretty printer emitting the same grammar the parser reads.

use std::fmt::Write;

use crate::ast::{BinaryBody, Program, Rule, Signed, Term, UnaryBody};

fn push_lit(out: &mut String, first: &mut bool, text: &str) {
    if *first {
        *first = false;
    } else {
        out.push_str(", ");
    }
    out.push_str(text);
}

fn unary_lit(l: &Signed, t: &Term) -> String {
    if l.negated {
        format!("not {}({})", l.pred, t)
    } else {
        format!("{}({})", l.pred, t)
    }
}

fn binary_lit(l: &Signed, s: &Term, t: &Term) -> String {
    if l.negated {
        format!("not {}({},{})", l.pred, s, t)
    } else {
        format!("{}({},{})", l.pred, s, t)
    }
}

fn unary_body(out: &mut String, root: &Term, body: &UnaryBody) {
    let mut first = true;
    for l in &body.beta {
        push_lit(out, &mut first, &unary_lit(l, root));
    }
    for s in &body.successors {
        for l in &s.gamma {
            push_lit(out, &mut first, &binary_lit(l, root, &s.term));
        }
        for l in &s.delta {
            push_lit(out, &mut first, &unary_lit(l, &s.term));
        }
    }
    for &(i, j) in &body.psi {
        let a = &body.successors[i].term;
        let b = &body.successors[j].term;
        push_lit(out, &mut first, &format!("{a} != {b}"));
    }
}

fn binary_body(out: &mut String, s: &Term, t: &Term, body: &BinaryBody) {
    let mut first = true;
    for l in &body.beta {
        push_lit(out, &mut first, &unary_lit(l, s));
    }
    for l in &body.gamma {
        push_lit(out, &mut first, &binary_lit(l, s, t));
    }
    for l in &body.delta {
        push_lit(out, &mut first, &unary_lit(l, t));
    }
}

pub fn print_rule(rule: &Rule) -> String {
    let mut out = String::new();
    match rule {
        Rule::FreeUnary { pred, term } => {
            write!(out, "{pred}({term}) v not {pred}({term}).").unwrap();
        }
        Rule::FreeBinary { pred, terms } => {
            let (s, t) = terms;
            write!(out, "{pred}({s},{t}) v not {pred}({s},{t}).").unwrap();
        }
        Rule::Unary(r) => {
            write!(out, "{}({})", r.head_pred, r.head_term).unwrap();
            if r.body.beta.is_empty() && r.body.successors.is_empty() {
                out.push('.');
            } else {
                out.push_str(" :- ");
                unary_body(&mut out, &r.head_term, &r.body);
                out.push('.');
            }
        }
        Rule::Binary(r) => {
            let (s, t) = &r.head_terms;
            write!(out, "{}({},{})", r.head_pred, s, t).unwrap();
            if r.body.beta.is_empty() && r.body.gamma.is_empty() && r.body.delta.is_empty() {
                out.push('.');
            } else {
                out.push_str(" :- ");
                binary_body(&mut out, s, t, &r.body);
                out.push('.');
            }
        }
        Rule::ConstraintUnary { term, body } => {
            out.push_str(":- ");
            unary_body(&mut out, term, body);
            out.push('.');
        }
        Rule::ConstraintBinary { terms, body } => {
            out.push_str(":- ");
            binary_body(&mut out, &terms.0, &terms.1, body);
            out.push('.');
        }
    }
    out
}

/// One rule per line, in program order.
pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for rule in &program.rules {
        out.push_str(&print_rule(rule));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_program;

    #[test]
    fn print_then_parse_is_identity_on_ast() {
        let src = "\
happy(X) :- sees(X,Y), friend(X,Y), happy(Y).
happy(X) :- friend(X,Y), friend(X,Z), Y != Z.
sees(X,Y) v not sees(X,Y).
c(X) :- not c(X), happy(X), unhappy(X).
:- friend(X,Y), enemy(X,Y).
unhappy(j) :- hungry(j).
hungry(j).
";
        let p1 = parse_program(src).unwrap();
        let printed = print_program(&p1);
        let p2 = parse_program(&printed).unwrap();
        assert_eq!(p1, p2);
        // Printing is a fixpoint.
        assert_eq!(printed, print_program(&p2));
    }

    #[test]
    fn empty_program_prints_empty() {
        let p = Program::new(vec![]);
        assert_eq!(print_program(&p), "");
    }
}
