//! Parser for the rule-program surface syntax.
//!
//! ```text
//! happy(X) :- sees(X,Y), friend(X,Y), happy(Y).
//! sees(X,Y) v not sees(X,Y).
//! :- happy(X), unhappy(X).
//! unhappy(j) :- hungry(j).     % facts and constants
//! ```
//!
//! Constants start lowercase, variables uppercase; `%` starts a comment.
//! Predicate names may start with either case (description-logic concept
//! names keep their capitalization).

use std::collections::BTreeSet;

use crate::ast::{
    BinaryBody, BinaryRule, Program, Rule, Signed, Successor, Term, UnaryBody, UnaryRule,
};

use super::{ParseError, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    If,      // :-
    Or,      // v
    Not,     // not
    Neq,     // !=
    LParen,
    RParen,
    Comma,
    Dot,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Lexeme>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                '%' => break,
                c if c.is_whitespace() => {
                    i += 1;
                }
                '(' => {
                    out.push(Lexeme { tok: Tok::LParen, span: SourceSpan::point(line_no, col) });
                    i += 1;
                }
                ')' => {
                    out.push(Lexeme { tok: Tok::RParen, span: SourceSpan::point(line_no, col) });
                    i += 1;
                }
                ',' => {
                    out.push(Lexeme { tok: Tok::Comma, span: SourceSpan::point(line_no, col) });
                    i += 1;
                }
                '.' => {
                    out.push(Lexeme { tok: Tok::Dot, span: SourceSpan::point(line_no, col) });
                    i += 1;
                }
                ':' => {
                    if chars.get(i + 1) == Some(&'-') {
                        out.push(Lexeme {
                            tok: Tok::If,
                            span: SourceSpan { line: line_no, col_start: col, col_end: col + 1 },
                        });
                        i += 2;
                    } else {
                        return Err(ParseError::new(
                            SourceSpan::point(line_no, col),
                            "expected `:-`",
                        ));
                    }
                }
                '!' => {
                    if chars.get(i + 1) == Some(&'=') {
                        out.push(Lexeme {
                            tok: Tok::Neq,
                            span: SourceSpan { line: line_no, col_start: col, col_end: col + 1 },
                        });
                        i += 2;
                    } else {
                        return Err(ParseError::new(
                            SourceSpan::point(line_no, col),
                            "expected `!=`",
                        ));
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_alphanumeric() || chars[i] == '_')
                    {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let span =
                        SourceSpan { line: line_no, col_start: start + 1, col_end: i };
                    let tok = match word.as_str() {
                        "not" => Tok::Not,
                        "v" => Tok::Or,
                        _ => Tok::Ident(word),
                    };
                    out.push(Lexeme { tok, span });
                }
                other => {
                    return Err(ParseError::new(
                        SourceSpan::point(line_no, col),
                        format!("unexpected character `{other}`"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct RawAtom {
    pred: String,
    terms: Vec<Term>,
    span: SourceSpan,
}

#[derive(Debug, Clone)]
enum RawLit {
    Atom { negated: bool, atom: RawAtom },
    Neq { left: Term, right: Term, span: SourceSpan },
}

struct Parser {
    toks: Vec<Lexeme>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|l| l.span)
            .unwrap_or(SourceSpan::point(1, 1))
    }

    fn bump(&mut self) -> Option<Lexeme> {
        let l = self.toks.get(self.pos).cloned();
        self.pos += 1;
        l
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<SourceSpan, ParseError> {
        match self.bump() {
            Some(l) if l.tok == tok => Ok(l.span),
            Some(l) => Err(ParseError::new(l.span, format!("expected {what}"))),
            None => Err(ParseError::new(self.span(), format!("expected {what}, found end of input"))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Lexeme { tok: Tok::Ident(name), .. }) => {
                if name.chars().next().map_or(false, |c| c.is_uppercase()) {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::Const(name))
                }
            }
            Some(l) => Err(ParseError::new(l.span, "expected term")),
            None => Err(ParseError::new(self.span(), "expected term, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<RawAtom, ParseError> {
        let (pred, span) = match self.bump() {
            Some(Lexeme { tok: Tok::Ident(name), span }) => (name, span),
            Some(l) => return Err(ParseError::new(l.span, "expected predicate name")),
            None => {
                return Err(ParseError::new(self.span(), "expected atom, found end of input"))
            }
        };
        self.expect(Tok::LParen, "`(`")?;
        let mut terms = vec![self.term()?];
        if self.peek() == Some(&Tok::Comma) {
            self.bump();
            terms.push(self.term()?);
        }
        let close = self.expect(Tok::RParen, "`)`")?;
        if terms.len() > 2 {
            return Err(ParseError::new(span, "predicates take one or two arguments"));
        }
        Ok(RawAtom {
            pred,
            terms,
            span: SourceSpan { line: span.line, col_start: span.col_start, col_end: close.col_end },
        })
    }

    fn literal(&mut self) -> Result<RawLit, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            let l = self.bump().unwrap();
            let atom = self.atom()?;
            let _ = l;
            return Ok(RawLit::Atom { negated: true, atom });
        }
        // Either an atom or `term != term`; both start with an identifier,
        // so decide on the following token.
        let save = self.pos;
        if let Some(Tok::Ident(_)) = self.peek() {
            let after = self.toks.get(self.pos + 1).map(|l| &l.tok);
            if after == Some(&Tok::Neq) {
                let left = self.term()?;
                let span = self.expect(Tok::Neq, "`!=`")?;
                let right = self.term()?;
                return Ok(RawLit::Neq { left, right, span });
            }
        }
        self.pos = save;
        let atom = self.atom()?;
        Ok(RawLit::Atom { negated: false, atom })
    }

    fn body(&mut self) -> Result<Vec<RawLit>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.peek() == Some(&Tok::Comma) {
            self.bump();
            lits.push(self.literal()?);
        }
        Ok(lits)
    }
}

/// Builds the tree-shaped unary body rooted at `root` from flat literals.
fn shape_unary_body(
    root: &Term,
    lits: &[RawLit],
    span: SourceSpan,
) -> Result<UnaryBody, ParseError> {
    let mut body = UnaryBody::default();
    let slot_of = |body: &mut UnaryBody, t: &Term| -> usize {
        if let Some(i) = body.successors.iter().position(|s| s.term == *t) {
            i
        } else {
            body.successors.push(Successor { term: t.clone(), gamma: vec![], delta: vec![] });
            body.successors.len() - 1
        }
    };
    for lit in lits {
        match lit {
            RawLit::Atom { negated, atom } => {
                let signed = Signed { pred: atom.pred.clone(), negated: *negated };
                match atom.terms.len() {
                    1 => {
                        let t = &atom.terms[0];
                        if t == root {
                            if !body.beta.contains(&signed) {
                                body.beta.push(signed);
                            }
                        } else {
                            let m = slot_of(&mut body, t);
                            if !body.successors[m].delta.contains(&signed) {
                                body.successors[m].delta.push(signed);
                            }
                        }
                    }
                    2 => {
                        if atom.terms[0] != *root {
                            return Err(ParseError::new(
                                atom.span,
                                format!(
                                    "binary literal must start at the head term {root}",
                                ),
                            ));
                        }
                        let t = &atom.terms[1];
                        // Variables must be pairwise distinct, but a
                        // constant root may be its own successor.
                        if t == root && t.is_var() {
                            return Err(ParseError::new(
                                atom.span,
                                "binary literal may not loop on the head variable",
                            ));
                        }
                        let m = slot_of(&mut body, t);
                        if !body.successors[m].gamma.contains(&signed) {
                            body.successors[m].gamma.push(signed);
                        }
                    }
                    _ => unreachable!(),
                }
            }
            RawLit::Neq { .. } => {}
        }
    }
    // Inequalities resolve against the successor slots, creating slots for
    // otherwise unmentioned terms.
    for lit in lits {
        if let RawLit::Neq { left, right, span } = lit {
            if left == root || right == root {
                return Err(ParseError::new(
                    *span,
                    "inequality must relate successor terms",
                ));
            }
            let i = slot_of(&mut body, left);
            let j = slot_of(&mut body, right);
            if i == j {
                return Err(ParseError::new(*span, "inequality relates a term to itself"));
            }
            body.psi.insert((i.min(j), i.max(j)));
        }
    }
    let _ = span;
    Ok(body)
}

/// Builds a binary-rule body over the head pair `(s, t)`.
fn shape_binary_body(
    s: &Term,
    t: &Term,
    lits: &[RawLit],
) -> Result<BinaryBody, ParseError> {
    let mut body = BinaryBody::default();
    for lit in lits {
        match lit {
            RawLit::Atom { negated, atom } => {
                let signed = Signed { pred: atom.pred.clone(), negated: *negated };
                match atom.terms.len() {
                    1 => {
                        let u = &atom.terms[0];
                        if u == s {
                            if !body.beta.contains(&signed) {
                                body.beta.push(signed);
                            }
                        } else if u == t {
                            if !body.delta.contains(&signed) {
                                body.delta.push(signed);
                            }
                        } else {
                            return Err(ParseError::new(
                                atom.span,
                                "unary literal mentions a term outside the head pair",
                            ));
                        }
                    }
                    2 => {
                        if atom.terms[0] != *s || atom.terms[1] != *t {
                            return Err(ParseError::new(
                                atom.span,
                                "binary literal must match the head term pair",
                            ));
                        }
                        if !body.gamma.contains(&signed) {
                            body.gamma.push(signed);
                        }
                    }
                    _ => unreachable!(),
                }
            }
            RawLit::Neq { span, .. } => {
                return Err(ParseError::new(
                    *span,
                    "inequalities are not allowed in binary rule bodies",
                ));
            }
        }
    }
    Ok(body)
}

/// Decides whether a constraint body fits the binary-rule shape: exactly
/// two distinct terms, at least one binary literal, all binary literals
/// over the same ordered pair, and no inequalities.
fn constraint_shape(lits: &[RawLit]) -> Option<(Term, Term)> {
    let mut pair: Option<(Term, Term)> = None;
    for lit in lits {
        match lit {
            RawLit::Neq { .. } => return None,
            RawLit::Atom { atom, .. } if atom.terms.len() == 2 => {
                let p = (atom.terms[0].clone(), atom.terms[1].clone());
                if p.0 == p.1 {
                    return None;
                }
                match &pair {
                    None => pair = Some(p),
                    Some(q) if *q == p => {}
                    _ => return None,
                }
            }
            _ => {}
        }
    }
    let (s, t) = pair?;
    for lit in lits {
        if let RawLit::Atom { atom, .. } = lit {
            if atom.terms.len() == 1 && atom.terms[0] != s && atom.terms[0] != t {
                return None;
            }
        }
    }
    Some((s, t))
}

fn root_of_constraint(lits: &[RawLit], span: SourceSpan) -> Result<Term, ParseError> {
    let mut binary_roots = BTreeSet::new();
    for lit in lits {
        if let RawLit::Atom { atom, .. } = lit {
            if atom.terms.len() == 2 {
                binary_roots.insert(atom.terms[0].clone());
            }
        }
    }
    match binary_roots.len() {
        0 => {
            for lit in lits {
                if let RawLit::Atom { atom, .. } = lit {
                    return Ok(atom.terms[0].clone());
                }
            }
            Err(ParseError::new(span, "constraint body has no atoms"))
        }
        1 => Ok(binary_roots.into_iter().next().unwrap()),
        _ => Err(ParseError::new(span, "constraint body is not tree-shaped")),
    }
}

/// Parses a full program text.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut rules = Vec::new();

    while p.peek().is_some() {
        let start = p.span();
        if p.peek() == Some(&Tok::If) {
            // Constraint.
            p.bump();
            let lits = p.body()?;
            p.expect(Tok::Dot, "`.`")?;
            if let Some((s, t)) = constraint_shape(&lits) {
                let body = shape_binary_body(&s, &t, &lits)?;
                rules.push(Rule::ConstraintBinary { terms: (s, t), body });
            } else {
                let root = root_of_constraint(&lits, start)?;
                let body = shape_unary_body(&root, &lits, start)?;
                rules.push(Rule::ConstraintUnary { term: root, body });
            }
            continue;
        }

        let head = p.atom()?;
        match p.peek() {
            Some(Tok::Or) => {
                p.bump();
                p.expect(Tok::Not, "`not` after `v`")?;
                let other = p.atom()?;
                p.expect(Tok::Dot, "`.`")?;
                if head.pred != other.pred || head.terms != other.terms {
                    return Err(ParseError::new(
                        other.span,
                        "free rule must repeat the head atom under negation",
                    ));
                }
                match head.terms.len() {
                    1 => rules.push(Rule::FreeUnary {
                        pred: head.pred,
                        term: head.terms[0].clone(),
                    }),
                    _ => rules.push(Rule::FreeBinary {
                        pred: head.pred,
                        terms: (head.terms[0].clone(), head.terms[1].clone()),
                    }),
                }
            }
            Some(Tok::If) => {
                p.bump();
                let lits = p.body()?;
                p.expect(Tok::Dot, "`.`")?;
                rules.push(shape_rule(head, &lits)?);
            }
            Some(Tok::Dot) => {
                p.bump();
                rules.push(shape_rule(head, &[])?);
            }
            _ => {
                return Err(ParseError::new(p.span(), "expected `.`/`:-`/`v` after head"));
            }
        }
    }

    Ok(Program::new(rules))
}

fn shape_rule(head: RawAtom, lits: &[RawLit]) -> Result<Rule, ParseError> {
    if head.terms.len() == 1 {
        let root = head.terms[0].clone();
        let body = shape_unary_body(&root, lits, head.span)?;
        Ok(Rule::Unary(UnaryRule { head_pred: head.pred, head_term: root, body }))
    } else {
        let s = head.terms[0].clone();
        let t = head.terms[1].clone();
        let body = shape_binary_body(&s, &t, lits)?;
        Ok(Rule::Binary(BinaryRule { head_pred: head.pred, head_terms: (s, t), body }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_eleven_rule_program() {
        let src = "\
happy(X) :- sees(X,Y), friend(X,Y), happy(Y).
happy(X) :- sees(X,Y), enemy(X,Y), unhappy(Y).
unhappy(X) :- sees(X,Y), friend(X,Y), not happy(Y).
unhappy(X) :- sees(X,Y), enemy(X,Y), happy(Y).
happy(X) :- friend(X,Y), friend(X,Z), Y != Z.
sees(X,Y) v not sees(X,Y).
friend(X,Y) v not friend(X,Y).
enemy(X,Y) v not enemy(X,Y).
c(X) :- not c(X), happy(X), unhappy(X).
d(X,Y) :- not d(X,Y), friend(X,Y), enemy(X,Y).
unhappy(j) :- hungry(j).
";
        let p = parse_program(src).unwrap();
        assert_eq!(p.rules.len(), 11);
        assert_eq!(p.constants(), ["j"]);
        assert!(p.is_free("sees"));
        if let Rule::Unary(r) = &p.rules[4] {
            assert_eq!(r.body.successors.len(), 2);
            assert_eq!(r.body.psi.len(), 1);
        } else {
            panic!("rule 5 should be unary");
        }
    }

    #[test]
    fn trailing_comma_is_an_error_with_position() {
        let err = parse_program("p(X) :- q(X),\n").unwrap_err();
        assert_eq!(err.span.line, 1);
    }

    #[test]
    fn constraints_shape_by_body() {
        let p = parse_program(":- happy(X), unhappy(X).\n:- friend(X,Y), enemy(X,Y).\n").unwrap();
        assert!(matches!(p.rules[0], Rule::ConstraintUnary { .. }));
        assert!(matches!(p.rules[1], Rule::ConstraintBinary { .. }));
    }

    #[test]
    fn facts_parse_with_empty_bodies() {
        let p = parse_program("pass(john).\nfail(X) :- not pass(X).\n").unwrap();
        assert_eq!(p.rules.len(), 2);
        assert_eq!(p.constants(), ["john"]);
    }

    #[test]
    fn uppercase_predicates_are_accepted() {
        let p = parse_program("unhappy(X) :- not Father(X).\n").unwrap();
        if let Rule::Unary(r) = &p.rules[0] {
            assert_eq!(r.body.beta[0], Signed::neg("Father"));
        } else {
            panic!();
        }
    }
}
