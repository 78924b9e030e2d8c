//! Text format for formulas.
//!
//! ```text
//! formula := "(and" WS clause+ ")"
//! clause  := "(or" WS literal+ ")"
//! literal := atom | "(not" WS atom ")"
//! atom    := "A" INT | "(box" WS INT WS clause ")"
//! ```
//!
//! The printer emits single spaces and no trailing whitespace; it is the
//! [`std::fmt::Display`] impl of [`Formula`].

use crate::error::FormulaError;
use crate::formula::{Atom, Clause, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open(&'a str),
    Close,
    Word(&'a str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> FormulaError {
        FormulaError::Syntax { line: self.line, column: self.col, message: message.into() }
    }

    fn bump(&mut self, n: usize) {
        for ch in self.src[self.pos..self.pos + n].chars() {
            if ch == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        self.pos += n;
    }

    fn skip_ws(&mut self) -> bool {
        let rest = &self.src[self.pos..];
        let n = rest.len() - rest.trim_start_matches([' ', '\n', '\r', '\t']).len();
        self.bump(n);
        n > 0
    }

    fn word_len(s: &str) -> usize {
        s.find(|c: char| c.is_whitespace() || c == '(' || c == ')').unwrap_or(s.len())
    }

    /// Next token together with its (line, column).
    fn next(&mut self) -> Result<Option<(Tok<'a>, usize, usize)>, FormulaError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else { return Ok(None) };
        let tok = match c {
            '(' => {
                let n = Self::word_len(&rest[1..]);
                if n == 0 {
                    return Err(self.error("expected keyword after '('"));
                }
                let kw = &rest[1..1 + n];
                self.bump(1 + n);
                Tok::Open(kw)
            }
            ')' => {
                self.bump(1);
                Tok::Close
            }
            _ => {
                let n = Self::word_len(rest);
                let w = &rest[..n];
                self.bump(n);
                Tok::Word(w)
            }
        };
        Ok(Some((tok, line, col)))
    }

    fn peek(&mut self) -> Result<Option<(Tok<'a>, usize, usize)>, FormulaError> {
        let saved = (self.pos, self.line, self.col);
        let t = self.next();
        (self.pos, self.line, self.col) = saved;
        t
    }

    fn expect_ws(&mut self) -> Result<(), FormulaError> {
        if self.skip_ws() {
            Ok(())
        } else {
            Err(self.error("expected whitespace"))
        }
    }
}

fn at(line: usize, column: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax { line, column, message: message.into() }
}

fn parse_int(w: &str, line: usize, col: usize) -> Result<u32, FormulaError> {
    if w.is_empty() || !w.bytes().all(|b| b.is_ascii_digit()) {
        return Err(at(line, col, format!("expected a positive integer, found {w:?}")));
    }
    match w.parse::<u32>() {
        Ok(0) => Err(at(line, col, "index must be at least 1")),
        Ok(v) => Ok(v),
        Err(_) => Err(at(line, col, "integer too large")),
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

impl<'a> Parser<'a> {
    fn formula(&mut self) -> Result<Formula, FormulaError> {
        match self.lex.next()? {
            Some((Tok::Open("and"), ..)) => {}
            Some((_, l, c)) => return Err(at(l, c, "expected \"(and\"")),
            None => return Err(self.lex.error("empty input")),
        }
        self.lex.expect_ws()?;
        let mut clauses = Vec::new();
        loop {
            match self.lex.peek()? {
                Some((Tok::Close, ..)) => {
                    self.lex.next()?;
                    break;
                }
                Some((Tok::Open("or"), l, c)) => {
                    let clause = self.clause()?;
                    clauses.push((clause, l, c));
                }
                Some((_, l, c)) => return Err(at(l, c, "expected \"(or\" or \")\"")),
                None => return Err(self.lex.error("unexpected end of input")),
            }
        }
        if let Some((_, l, c)) = self.lex.next()? {
            return Err(at(l, c, "trailing input after formula"));
        }
        if clauses.is_empty() {
            return Err(FormulaError::EmptyFormula);
        }
        let mut seen = std::collections::HashSet::new();
        for (i, (cl, l, c)) in clauses.iter().enumerate() {
            if !seen.insert(cl) {
                return Err(at(*l, *c, format!("clause {} repeats an earlier clause", i + 1)));
            }
        }
        Formula::new(clauses.into_iter().map(|(c, ..)| c).collect())
    }

    fn clause(&mut self) -> Result<Clause, FormulaError> {
        let (line, col) = match self.lex.next()? {
            Some((Tok::Open("or"), l, c)) => (l, c),
            Some((_, l, c)) => return Err(at(l, c, "expected \"(or\"")),
            None => return Err(self.lex.error("unexpected end of input")),
        };
        self.lex.expect_ws()?;
        let mut lits = Vec::new();
        loop {
            match self.lex.peek()? {
                Some((Tok::Close, ..)) => {
                    self.lex.next()?;
                    break;
                }
                Some(_) => lits.push(self.literal()?),
                None => return Err(self.lex.error("unexpected end of input")),
            }
        }
        if lits.is_empty() {
            return Err(at(line, col, "empty clause"));
        }
        Clause::new(lits).map_err(|e| match e {
            FormulaError::RepeatedAtom(a) => at(line, col, format!("clause repeats atom {a}")),
            other => other,
        })
    }

    fn literal(&mut self) -> Result<Literal, FormulaError> {
        if let Some((Tok::Open("not"), ..)) = self.lex.peek()? {
            self.lex.next()?;
            self.lex.expect_ws()?;
            let atom = self.atom()?;
            match self.lex.next()? {
                Some((Tok::Close, ..)) => Ok(Literal::neg(atom)),
                Some((_, l, c)) => Err(at(l, c, "expected \")\" closing \"(not\"")),
                None => Err(self.lex.error("unexpected end of input")),
            }
        } else {
            Ok(Literal::pos(self.atom()?))
        }
    }

    fn atom(&mut self) -> Result<Atom, FormulaError> {
        match self.lex.next()? {
            Some((Tok::Word(w), l, c)) => match w.strip_prefix('A') {
                Some(num) => Ok(Atom::Prop(parse_int(num, l, c + 1)?)),
                None => Err(at(l, c, format!("expected atom, found {w:?}"))),
            },
            Some((Tok::Open("box"), ..)) => {
                self.lex.expect_ws()?;
                let index = match self.lex.next()? {
                    Some((Tok::Word(w), l, c)) => parse_int(w, l, c)?,
                    Some((_, l, c)) => return Err(at(l, c, "expected box index")),
                    None => return Err(self.lex.error("unexpected end of input")),
                };
                self.lex.expect_ws()?;
                let body = self.clause()?;
                match self.lex.next()? {
                    Some((Tok::Close, ..)) => Ok(Atom::boxed(index, body)),
                    Some((_, l, c)) => Err(at(l, c, "expected \")\" closing \"(box\"")),
                    None => Err(self.lex.error("unexpected end of input")),
                }
            }
            Some((_, l, c)) => Err(at(l, c, "expected atom")),
            None => Err(self.lex.error("unexpected end of input")),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    Parser { lex: Lexer::new(text) }.formula()
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The four-clause depth-2 formula used as the inference worked example,
    /// written in canonical order.
    pub(crate) const EXAMPLE_FORMULA: &str = "(and \
        (or (not A3) (box 1 (or (not A1) (not (box 1 (or A2))))) (box 1 (or (not A4) (not (box 1 (or A1)))))) \
        (or (not A1) (box 1 (or A3 (not (box 1 (or A2))))) (not (box 1 (or (box 1 (or (not A4))))))) \
        (or (not A4) (not (box 1 (or A2 (box 1 (or (not A1))))))) \
        (or A1 (not (box 1 (or (not (box 1 (or A4))))))))";

    /// Same formula with the box atoms of the first clause in the order they
    /// are usually written, which is not canonical.
    pub(crate) const EXAMPLE_AS_WRITTEN: &str = "(and \
        (or (not A3) (box 1 (or (not A4) (not (box 1 (or A1))))) (box 1 (or (not A1) (not (box 1 (or A2)))))) \
        (or (not A1) (box 1 (or A3 (not (box 1 (or A2))))) (not (box 1 (or (box 1 (or (not A4))))))) \
        (or (not A4) (not (box 1 (or A2 (box 1 (or (not A1))))))) \
        (or A1 (not (box 1 (or (not (box 1 (or A4))))))))";

    #[test]
    fn parses_simple_clause() {
        let f = parse_formula("(and (or A1 (not (box 1 (or A2)))))").unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.clauses()[0].len(), 2);
    }

    #[test]
    fn example_prints_back_verbatim() {
        let f = parse_formula(EXAMPLE_FORMULA).unwrap();
        assert_eq!(print_formula(&f), EXAMPLE_FORMULA);
        assert_eq!(f.len(), 4);
        let written = parse_formula(EXAMPLE_AS_WRITTEN).unwrap();
        assert_eq!(written, f);
        assert_eq!(print_formula(&written), EXAMPLE_FORMULA);
    }

    #[test]
    fn printing_canonicalizes() {
        let f = parse_formula("(and\n  (or (box 1 (or A2 A1))\n      (not A1)))").unwrap();
        assert_eq!(print_formula(&f), "(and (or (not A1) (box 1 (or A1 A2))))");
    }

    #[test]
    fn repeated_atom_is_reported() {
        let err = parse_formula("(and (or A1 A1))").unwrap_err();
        match err {
            FormulaError::Syntax { line, column, message } => {
                assert_eq!((line, column), (1, 6));
                assert!(message.contains("repeats atom A1"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        // signs are ignored when comparing atoms
        assert!(parse_formula("(and (or A1 (not A1)))").is_err());
    }

    #[test]
    fn repeated_clause_is_reported() {
        let err = parse_formula("(and (or A1 A2) (or A2 A1))").unwrap_err();
        assert!(matches!(err, FormulaError::Syntax { line: 1, column: 17, .. }), "{err}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_formula("(and\n (or A1 B2))").unwrap_err();
        assert_eq!(
            err,
            FormulaError::Syntax { line: 2, column: 9, message: "expected atom, found \"B2\"".into() }
        );
        assert!(parse_formula("(and)").is_err());
        assert!(parse_formula("(and (or))").is_err());
        assert!(parse_formula("(and (or A0))").is_err());
        assert!(parse_formula("(and (or A1)) x").is_err());
        assert!(parse_formula("(and (or A1)").is_err());
        assert!(parse_formula("(and(or A1))").is_err());
        assert!(parse_formula("(and (or (box 0 (or A1))))").is_err());
    }
}
