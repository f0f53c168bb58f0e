//! Concrete syntax: tokenizer, recursive-descent parser and printers.

mod lexer;
mod parser;
mod print;

use std::fmt;

pub use lexer::{tokenize, Tok, Token};
pub use parser::{pair, Parser, UnknownIdents, PAIR};

use crate::kernel::{Prop, Signature, Sort, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn whole<T>(
    src: &str,
    sig: &Signature,
    unknown: UnknownIdents,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(src, sig, unknown)?;
    let out = f(&mut p)?;
    p.expect_eof()?;
    Ok(out)
}

pub fn parse_term(src: &str, sig: &Signature, unknown: UnknownIdents) -> Result<Term, ParseError> {
    whole(src, sig, unknown, |p| p.term())
}

pub fn parse_prop(src: &str, sig: &Signature, unknown: UnknownIdents) -> Result<Prop, ParseError> {
    whole(src, sig, unknown, |p| p.prop())
}

pub fn parse_sort(src: &str) -> Result<Sort, ParseError> {
    whole(src, &Signature::new(), UnknownIdents::Constants, |p| {
        p.sort()
    })
}

/// `lhs = rhs`, with unknown identifiers read as variables.
pub fn parse_equation(src: &str, sig: &Signature) -> Result<(Term, Term), ParseError> {
    whole(src, sig, UnknownIdents::Variables, |p| p.equation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{NumeralMode, Var};

    fn sig() -> Signature {
        Signature::new()
    }

    #[test]
    fn first_order_vs_juxtaposition() {
        let s = sig();
        let t = parse_term("f(x)", &s, UnknownIdents::Variables).unwrap();
        assert_eq!(t.head().map(|h| &**h), Some("f"));
        let t = parse_term("f (x)", &s, UnknownIdents::Variables).unwrap();
        assert_eq!(t.head().map(|h| &**h), Some("@"));
    }

    #[test]
    fn arithmetic_precedence() {
        let s = sig();
        let t = parse_term("a + b * c", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(t.to_string(), "a + b * c");
        let t = parse_term("(a + b) * c", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(t.to_string(), "(a + b) * c");
    }

    #[test]
    fn peano_numerals() {
        let mut s = sig();
        s.numerals = NumeralMode::Peano {
            succ: "S".into(),
            zero: "0".into(),
        };
        let t = parse_term("2", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(t.to_string(), "S(S(0))");
    }

    #[test]
    fn de_bruijn_numerals() {
        let mut s = sig();
        s.numerals = NumeralMode::DeBruijn;
        let t = parse_term("3", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(t.to_string(), "1[comp(shift, shift)]");
    }

    #[test]
    fn quantifier_scope_and_binders() {
        let s = sig();
        let p = parse_prop(
            "forall x y. p(x) => exists z:i. q(z, y)",
            &s,
            UnknownIdents::Constants,
        )
        .unwrap();
        let Prop::Forall(x, _) = &p else {
            panic!("{p:?}")
        };
        assert_eq!(x, &Var::new("x", Sort::base("i")));
        assert!(p.free_vars().is_empty());
        assert_eq!(
            p.to_string(),
            "forall x. forall y. p(x) => exists z:i. q(z, y)"
        );
    }

    #[test]
    fn parenthesized_prop_backtracks_to_term() {
        let s = sig();
        let p = parse_prop("(a + b) = c", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(p.to_string(), "a + b = c");
        let p = parse_prop("(p \\/ q) /\\ r", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(p.to_string(), "(p \\/ q) /\\ r");
    }

    #[test]
    fn pair_sugar_and_membership() {
        let s = sig();
        let p = parse_prop("<x, y> in R", &s, UnknownIdents::Constants).unwrap();
        assert_eq!(p.to_string(), "upair(upair(x, y), upair(x, x)) in R");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_prop("p /\\ ", &sig(), UnknownIdents::Constants).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_term("f(a", &sig(), UnknownIdents::Constants).is_err());
    }

    #[test]
    fn sorts() {
        assert_eq!(
            parse_sort("i -> o -> i").unwrap().to_string(),
            "i -> o -> i"
        );
        assert_eq!(
            parse_sort("(i -> o) -> o").unwrap().to_string(),
            "(i -> o) -> o"
        );
        assert_eq!(
            parse_sort("'a -> 'a").unwrap(),
            Sort::arrow(Sort::var("a"), Sort::var("a"))
        );
    }
}
