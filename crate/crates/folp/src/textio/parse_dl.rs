//! Parser for the terminological surface syntax, one axiom per line:
//!
//! ```text
//! Father <= exists child.Human and not Female
//! {john} <= atmost 2 child.Human
//! s <= r
//! trans(r)
//! ```
//!
//! Concept names are capitalized, role names lowercase; `not` binds
//! tighter than `and`, which binds tighter than `or`, and the filler of a
//! quantifier is a single (possibly parenthesized) concept.

use crate::shoq::{Concept, DlKnowledgeBase};

use super::{ParseError, SourceSpan};

struct Lx<'a> {
    line: &'a [char],
    line_no: usize,
    pos: usize,
}

impl<'a> Lx<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.line.len() && self.line[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn span(&self) -> SourceSpan {
        SourceSpan::point(self.line_no, self.pos + 1)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.line.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.line.len()
            && (self.line[self.pos].is_alphanumeric() || self.line[self.pos] == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.line[start..self.pos].iter().collect())
        }
    }

    fn peek_word(&mut self) -> Option<String> {
        let save = self.pos;
        let w = self.word();
        self.pos = save;
        w
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        let w = self
            .word()
            .ok_or_else(|| ParseError::new(self.span(), "expected a number"))?;
        w.parse()
            .map_err(|_| ParseError::new(self.span(), format!("invalid number `{w}`")))
    }

    fn role(&mut self) -> Result<String, ParseError> {
        let w = self
            .word()
            .ok_or_else(|| ParseError::new(self.span(), "expected a role name"))?;
        if w.chars().next().map_or(false, |c| c.is_uppercase()) {
            return Err(ParseError::new(self.span(), "role names start lowercase"));
        }
        Ok(w)
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut out = self.conjunction()?;
        while self.peek_word().as_deref() == Some("or") {
            self.word();
            let rhs = self.conjunction()?;
            out = Concept::or(out, rhs);
        }
        Ok(out)
    }

    fn conjunction(&mut self) -> Result<Concept, ParseError> {
        let mut out = self.unary()?;
        while self.peek_word().as_deref() == Some("and") {
            self.word();
            let rhs = self.unary()?;
            out = Concept::and(out, rhs);
        }
        Ok(out)
    }

    fn quantified(&mut self, kind: &str) -> Result<Concept, ParseError> {
        let n = match kind {
            "atleast" | "atmost" => Some(self.number()?),
            _ => None,
        };
        let role = self.role()?;
        if !self.eat('.') {
            return Err(ParseError::new(self.span(), "expected `.` after the role"));
        }
        let filler = self.unary()?;
        Ok(match kind {
            "exists" => Concept::exists(&role, filler),
            "forall" => Concept::forall(&role, filler),
            "atleast" => Concept::at_least(n.unwrap(), &role, filler),
            _ => Concept::at_most(n.unwrap(), &role, filler),
        })
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        if self.eat('(') {
            let c = self.concept()?;
            if !self.eat(')') {
                return Err(ParseError::new(self.span(), "expected `)`"));
            }
            return Ok(c);
        }
        if self.eat('{') {
            let o = self
                .word()
                .ok_or_else(|| ParseError::new(self.span(), "expected an individual"))?;
            if !self.eat('}') {
                return Err(ParseError::new(self.span(), "expected `}`"));
            }
            return Ok(Concept::nominal(&o));
        }
        let w = self
            .word()
            .ok_or_else(|| ParseError::new(self.span(), "expected a concept"))?;
        match w.as_str() {
            "not" => Ok(Concept::not(self.unary()?)),
            "exists" | "forall" | "atleast" | "atmost" => self.quantified(&w),
            _ => {
                if w.chars().next().map_or(false, |c| c.is_uppercase()) {
                    Ok(Concept::atomic(&w))
                } else {
                    Err(ParseError::new(
                        self.span(),
                        format!("concept names are capitalized, found `{w}`"),
                    ))
                }
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.line.len()
    }
}

/// Parses a knowledge-base text: `C <= D` per line, `r <= s` for roles,
/// `trans(r)` for transitivity; `%` starts a comment.
pub fn parse_dl(text: &str) -> Result<DlKnowledgeBase, ParseError> {
    let mut kb = DlKnowledgeBase::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let stripped: String = match raw.find('%') {
            Some(i) => raw[..i].to_string(),
            None => raw.to_string(),
        };
        if stripped.trim().is_empty() {
            continue;
        }
        let chars: Vec<char> = stripped.chars().collect();
        let mut lx = Lx { line: &chars, line_no, pos: 0 };

        // trans(r)
        if lx.peek_word().as_deref() == Some("trans") {
            lx.word();
            if !lx.eat('(') {
                return Err(ParseError::new(lx.span(), "expected `(`"));
            }
            let r = lx.role()?;
            if !lx.eat(')') {
                return Err(ParseError::new(lx.span(), "expected `)`"));
            }
            if !lx.at_end() {
                return Err(ParseError::new(lx.span(), "trailing input after axiom"));
            }
            kb.transitive.insert(r);
            continue;
        }

        // Role axiom: lowercase <= lowercase.
        let lower_lhs = lx
            .peek_word()
            .map_or(false, |w| w.chars().next().map_or(false, |c| c.is_lowercase()));
        if lower_lhs {
            let r = lx.role()?;
            if !(lx.eat('<') && lx.eat('=')) {
                return Err(ParseError::new(lx.span(), "expected `<=`"));
            }
            let s = lx.role()?;
            if !lx.at_end() {
                return Err(ParseError::new(lx.span(), "trailing input after axiom"));
            }
            kb.role_axioms.push((r, s));
            continue;
        }

        let lhs = lx.concept()?;
        if !(lx.eat('<') && lx.eat('=')) {
            return Err(ParseError::new(lx.span(), "expected `<=`"));
        }
        let rhs = lx.concept()?;
        if !lx.at_end() {
            return Err(ParseError::new(lx.span(), "trailing input after axiom"));
        }
        kb.terminological.push((lhs, rhs));
    }
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_family_axioms() {
        let kb = parse_dl(
            "Father <= exists child.Human and not Female\n{john} <= atmost 2 child.Human\n",
        )
        .unwrap();
        assert_eq!(kb.terminological.len(), 2);
        assert_eq!(
            kb.terminological[0],
            (
                Concept::atomic("Father"),
                Concept::and(
                    Concept::exists("child", Concept::atomic("Human")),
                    Concept::not(Concept::atomic("Female")),
                ),
            )
        );
        assert_eq!(
            kb.terminological[1],
            (
                Concept::nominal("john"),
                Concept::at_most(2, "child", Concept::atomic("Human")),
            )
        );
    }

    #[test]
    fn parses_role_and_transitivity_axioms() {
        let kb = parse_dl("s <= r\ntrans(r)\n% comment line\n").unwrap();
        assert_eq!(kb.role_axioms, vec![("s".to_string(), "r".to_string())]);
        assert!(kb.transitive.contains("r"));
    }

    #[test]
    fn reports_errors_with_position() {
        let err = parse_dl("Father <= exists child Human\n").unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(parse_dl("Father <= bad\n").is_err());
    }

    #[test]
    fn precedence_groups_quantifier_before_and_or() {
        let kb = parse_dl("A <= exists r.B and C or D\n").unwrap();
        let (_, rhs) = &kb.terminological[0];
        assert_eq!(
            *rhs,
            Concept::or(
                Concept::and(
                    Concept::exists("r", Concept::atomic("B")),
                    Concept::atomic("C")
                ),
                Concept::atomic("D"),
            )
        );
    }
}
