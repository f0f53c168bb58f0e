//! The line-based theory format.
//!
//! ```text
//! theory <name>
//! sort <name>...
//! numerals plain | peano <succ> <zero> | debruijn
//! strategy freeze | onfly
//! const <name> : <sort>
//! fun <name>(<sort>, ...) : <sort>
//! pred <name>(<sort>, ...)        pred <name>
//! E <name>: <term> -> <term>
//! R <name>: <atom> -> <prop>
//! <name>: <lhs> -> <rhs>          class inferred from the shape
//! eta <name>
//! subset <name> <x1> ... <xn> <w>: <prop>
//! axiom <name>: <prop>
//! goal <name>: <prop>
//! ```
//!
//! `#` starts a comment; an indented line continues the previous one.
//! A theory may also be given inline as `{lhs -> rhs, ...}`.

use std::fmt::Write as _;

use super::{
    check_rule, check_statement, declare_term_unknowns, declare_unknowns, Theory, TheoryError,
};
use crate::kernel::{NumeralMode, Origin, Prop, Sort, SymbolKind, Term, Var};
use crate::rewrite::{RewriteRule, RuleBody, RuleClass, SideCondition};
use crate::syntax::{ParseError, Parser, Tok, UnknownIdents};

/// Parse a theory file, or an inline `{...}` rule list.
pub fn parse_theory_file(text: &str) -> Result<Theory, TheoryError> {
    let trimmed = text.trim();
    if let Some(inner) = trimmed.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        return parse_inline(inner);
    }
    let mut theory = Theory::new("anonymous");
    for (line, src) in logical_lines(text) {
        parse_line(&mut theory, &src, line).map_err(|e| relocate(e, line))?;
    }
    Ok(theory)
}

fn parse_inline(inner: &str) -> Result<Theory, TheoryError> {
    let mut theory = Theory::new("inline");
    for (k, src) in inner.split([',', ';']).enumerate() {
        if src.trim().is_empty() {
            continue;
        }
        let rule = parse_rule(&theory, &format!("r{}", k + 1), src.trim(), None, 1)?;
        add_rule(&mut theory, rule, 1)?;
    }
    Ok(theory)
}

/// Non-empty lines with `#` comments removed and indented continuations
/// joined, each with its 1-based starting line number.
pub fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let continued = line.starts_with([' ', '\t']);
        match out.last_mut() {
            Some((_, prev)) if continued => {
                prev.push(' ');
                prev.push_str(line.trim());
            }
            _ => out.push((i + 1, line.trim().to_string())),
        }
    }
    out
}

/// Keywords that start a declaration line.
pub const DECLARATION_KEYWORDS: &[&str] = &["sort", "const", "fun", "pred"];

/// Apply one declaration line (`sort`, `const`, `fun` or `pred`) to `theory`.
pub fn declare_line(theory: &mut Theory, src: &str, line: usize) -> Result<(), TheoryError> {
    let (keyword, _) = split_keyword(src);
    if !DECLARATION_KEYWORDS.contains(&keyword) {
        return Err(TheoryError::Parse(ParseError::new(
            line,
            1,
            "expected a declaration",
        )));
    }
    parse_line(theory, src, line).map_err(|e| relocate(e, line))
}

fn relocate(e: TheoryError, line: usize) -> TheoryError {
    match e {
        TheoryError::Parse(p) => TheoryError::Parse(ParseError::new(line, p.col, p.msg)),
        TheoryError::Sort { source, .. } => TheoryError::Sort { line, source },
        TheoryError::RuleClass { source, .. } => TheoryError::RuleClass { line, source },
        other => other,
    }
}

fn split_keyword(src: &str) -> (&str, &str) {
    match src.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, rest.trim()),
        None => (src, ""),
    }
}

/// `name: body`.
fn named(rest: &str, line: usize) -> Result<(&str, &str), TheoryError> {
    let (name, body) = rest
        .split_once(':')
        .ok_or_else(|| TheoryError::Parse(ParseError::new(line, 1, "expected `name: ...`")))?;
    Ok((name.trim(), body.trim()))
}

fn parse_line(theory: &mut Theory, src: &str, line: usize) -> Result<(), TheoryError> {
    let (keyword, rest) = split_keyword(src);
    match keyword {
        "theory" => theory.name = rest.to_string(),
        "sort" => rest
            .split_whitespace()
            .for_each(|s| theory.signature.add_sort(s)),
        "numerals" => theory.signature.numerals = parse_numerals(rest, line)?,
        "strategy" => {
            theory.strategy = rest
                .parse()
                .map_err(|e: String| TheoryError::Parse(ParseError::new(line, 1, e)))?
        }
        "const" | "fun" | "pred" => {
            let (name, kind) = parse_declaration(keyword, rest, theory)?;
            theory
                .signature
                .declare(&name, kind, Origin::User)
                .map_err(|source| TheoryError::Sort { line, source })?;
        }
        "E" | "R" if !rest.starts_with(':') => {
            let (name, body) = named(rest, line)?;
            let class = if keyword == "E" {
                RuleClass::E
            } else {
                RuleClass::R
            };
            let rule = parse_rule(theory, name, body, Some(class), line)?;
            add_rule(theory, rule, line)?;
        }
        "eta" => {
            let a = Var::new("a", Sort::var("?a"));
            theory.rules.push(RewriteRule::eta(rest, a));
        }
        "subset" => parse_subset(theory, rest, line)?,
        "axiom" | "goal" => {
            let (name, body) = named(rest, line)?;
            let mut p = Parser::new(body, &theory.signature, UnknownIdents::Constants)?;
            let prop = p.prop()?;
            p.expect_eof()?;
            declare_unknowns(&prop, &mut theory.signature);
            check_statement(&prop, &theory.signature, line)?;
            let list = if keyword == "axiom" {
                &mut theory.axioms
            } else {
                &mut theory.goals
            };
            list.push((name.to_string(), prop));
        }
        _ => {
            let (name, body) = named(src, line)?;
            let rule = parse_rule(theory, name, body, None, line)?;
            add_rule(theory, rule, line)?;
        }
    }
    Ok(())
}

fn parse_numerals(rest: &str, line: usize) -> Result<NumeralMode, TheoryError> {
    let words: Vec<&str> = rest.split_whitespace().collect();
    match words.as_slice() {
        ["plain"] => Ok(NumeralMode::Plain),
        ["debruijn"] => Ok(NumeralMode::DeBruijn),
        ["peano", succ, zero] => Ok(NumeralMode::Peano {
            succ: (*succ).into(),
            zero: (*zero).into(),
        }),
        _ => Err(TheoryError::Parse(ParseError::new(
            line,
            1,
            "expected plain, debruijn or peano <succ> <zero>",
        ))),
    }
}

fn parse_declaration(
    keyword: &str,
    rest: &str,
    theory: &Theory,
) -> Result<(String, SymbolKind), TheoryError> {
    let mut p = Parser::new(rest, &theory.signature, UnknownIdents::Constants)?;
    let name = p.symbol_name()?;
    let mut args = Vec::new();
    if p.eat(&Tok::LParen) && !p.eat(&Tok::RParen) {
        loop {
            args.push(p.sort()?);
            if p.eat(&Tok::RParen) {
                break;
            }
            p.expect(Tok::Comma)?;
        }
    }
    let kind = match keyword {
        "pred" => SymbolKind::Predicate(args),
        "const" => {
            p.expect(Tok::Colon)?;
            SymbolKind::Individual(p.sort()?)
        }
        _ => {
            p.expect(Tok::Colon)?;
            SymbolKind::Function {
                args,
                result: p.sort()?,
            }
        }
    };
    p.expect_eof()?;
    Ok((name, kind))
}

/// Parse `lhs -> rhs`. Without an explicit class, a left-hand side headed by a
/// predicate (or a bare proposition letter) makes an R-rule.
pub fn parse_rule(
    theory: &Theory,
    name: &str,
    src: &str,
    class: Option<RuleClass>,
    line: usize,
) -> Result<RewriteRule, TheoryError> {
    let sig = &theory.signature;
    let term_rule = || -> Result<(Term, Term), ParseError> {
        let mut p = Parser::new(src, sig, UnknownIdents::Variables)?;
        let lhs = p.term()?;
        p.expect(Tok::Arrow)?;
        let rhs = p.term()?;
        p.expect_eof()?;
        Ok((lhs, rhs))
    };
    let prop_rule = || -> Result<(crate::kernel::Atom, Prop), ParseError> {
        let mut p = Parser::new(src, sig, UnknownIdents::Variables)?;
        let lhs = p.atom()?;
        p.expect(Tok::Arrow)?;
        let rhs = p.prop()?;
        p.expect_eof()?;
        Ok((lhs, rhs))
    };
    let class = match class {
        Some(c) => c,
        None => match term_rule() {
            Ok((lhs, _)) if !looks_atomic(&lhs, theory) => RuleClass::E,
            _ => RuleClass::R,
        },
    };
    let classify = |source| TheoryError::RuleClass { line, source };
    match class {
        RuleClass::E => {
            let (lhs, rhs) = term_rule()?;
            RewriteRule::e(name, lhs, rhs).map_err(classify)
        }
        RuleClass::R => {
            let (lhs, rhs) = prop_rule()?;
            RewriteRule::r(name, lhs, rhs).map_err(classify)
        }
    }
}

fn looks_atomic(lhs: &Term, theory: &Theory) -> bool {
    match lhs {
        Term::Var(_) => true,
        Term::App(h, _) => theory.signature.get(h).is_some_and(|s| s.is_predicate()),
    }
}

fn add_rule(theory: &mut Theory, rule: RewriteRule, line: usize) -> Result<(), TheoryError> {
    match &rule.body {
        RuleBody::Term { lhs, rhs } => {
            declare_term_unknowns(lhs, &mut theory.signature);
            declare_term_unknowns(rhs, &mut theory.signature);
        }
        RuleBody::Prop { lhs, rhs } => {
            declare_unknowns(&Prop::Atom(lhs.clone()), &mut theory.signature);
            declare_unknowns(rhs, &mut theory.signature);
        }
    }
    check_rule(&rule, &theory.signature, line)?;
    theory.rules.push(rule);
    Ok(())
}

fn parse_subset(theory: &mut Theory, rest: &str, line: usize) -> Result<(), TheoryError> {
    let (head, body) = named(rest, line)?;
    let names: Vec<&str> = head.split_whitespace().collect();
    if names.len() < 2 {
        return Err(TheoryError::Parse(ParseError::new(
            line,
            1,
            "expected `subset <name> <params>... <w>: <prop>`",
        )));
    }
    let mut p = Parser::new(body, &theory.signature, UnknownIdents::Variables)?;
    let prop = p.prop()?;
    p.expect_eof()?;
    let var = |n: &str| Var::new(n, Sort::var(&format!("?{n}")));
    let params: Vec<Var> = names[1..names.len() - 1].iter().map(|n| var(n)).collect();
    let w = var(names[names.len() - 1]);
    theory.declare_subset_symbol(names[0], &params, &w, &prop, false)?;
    Ok(())
}

/// Print a theory in the file format; [`parse_theory_file`] reads it back.
pub fn serialize(theory: &Theory) -> String {
    let mut out = String::new();
    let sig = &theory.signature;
    let _ = writeln!(out, "theory {}", theory.name);
    let sorts: Vec<&str> = sig.sorts().map(|s| &**s).collect();
    if !sorts.is_empty() {
        let _ = writeln!(out, "sort {}", sorts.join(" "));
    }
    match &sig.numerals {
        NumeralMode::Plain => {}
        NumeralMode::Peano { succ, zero } => {
            let _ = writeln!(out, "numerals peano {succ} {zero}");
        }
        NumeralMode::DeBruijn => out.push_str("numerals debruijn\n"),
    }
    let _ = writeln!(out, "strategy {}", theory.strategy);
    let list = |sorts: &[Sort]| {
        sorts
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    for sym in sig
        .symbols()
        .filter(|s| s.origin == Origin::User && !is_implicit(&s.kind))
    {
        let _ = match &sym.kind {
            SymbolKind::Individual(s) => writeln!(out, "const {} : {s}", sym.name),
            SymbolKind::Function { args, result } => {
                writeln!(out, "fun {}({}) : {result}", sym.name, list(args))
            }
            SymbolKind::Predicate(args) if args.is_empty() => writeln!(out, "pred {}", sym.name),
            SymbolKind::Predicate(args) => writeln!(out, "pred {}({})", sym.name, list(args)),
        };
    }
    for rule in theory.rules.rules() {
        let _ = match rule.side {
            SideCondition::Eta => writeln!(out, "eta {}", rule.name),
            SideCondition::None => writeln!(out, "{rule}"),
        };
    }
    for (name, p) in &theory.axioms {
        let _ = writeln!(out, "axiom {name}: {p}");
    }
    for (name, p) in &theory.goals {
        let _ = writeln!(out, "goal {name}: {p}");
    }
    out
}

/// Declared on first use; the declaration is recreated when the theory is read back.
fn is_implicit(kind: &SymbolKind) -> bool {
    kind.is_implicit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::load_preset;

    #[test]
    fn presets_round_trip() {
        for name in [
            "arith",
            "integral-rings",
            "chain(2)",
            "hol-comb",
            "hol-sigma",
            "set",
            "set-cantor",
        ] {
            let t = load_preset(name).unwrap();
            let text = serialize(&t);
            let back = parse_theory_file(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(back, t, "{name}\n{text}");
        }
    }

    #[test]
    fn free_rhs_variable_is_rule_class_error() {
        let err = parse_theory_file("pred p(i)\npred q(i)\nR: p(x) -> q(y)\n").unwrap_err();
        assert!(
            matches!(err, TheoryError::RuleClass { line: 3, .. }),
            "{err}"
        );
    }

    #[test]
    fn inline_theory() {
        let t = parse_theory_file("{A -> A => B}").unwrap();
        assert_eq!(t.rules.rules().len(), 1);
        assert_eq!(t.rules.rules()[0].class(), RuleClass::R);
    }

    #[test]
    fn continuation_lines_join() {
        let t = parse_theory_file("pred p\naxiom a: p\n  \\/ ~p\n").unwrap();
        assert_eq!(t.axioms[0].1.to_string(), "p \\/ ~p");
    }

    #[test]
    fn parse_error_has_line() {
        let err = parse_theory_file("sort i\nconst a i\n").unwrap_err();
        assert!(
            matches!(err, TheoryError::Parse(ParseError { line: 2, .. })),
            "{err}"
        );
    }

    #[test]
    fn arithmetic_file_rules_are_inferred() {
        let src = "sort nat\nnumerals peano S 0\nconst 0 : nat\nfun S(nat) : nat\nfun +(nat, nat) : nat\n\
                   plus_zero: 0 + y -> y\nplus_succ: S(x) + y -> S(x + y)\n";
        let t = parse_theory_file(src).unwrap();
        assert!(t.rules.rules().iter().all(|r| r.class() == RuleClass::E));
    }
}
