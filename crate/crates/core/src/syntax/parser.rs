use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::kernel::{Atom, NumeralMode, Prop, Signature, Sort, SymbolKind, Term, Var, APPLY};
use crate::lambda_sigma;

/// What a bare identifier that is neither bound nor declared stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownIdents {
    /// Rule patterns, constraint and substitution files.
    Variables,
    /// Closed statements such as goals and axioms.
    Constants,
}

const KEYWORDS: &[&str] = &["forall", "exists", "in", "bot", "top"];

pub struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    unknown: UnknownIdents,
    scope: Vec<Var>,
    binder_counter: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sig: &'a Signature, unknown: UnknownIdents) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            sig,
            unknown,
            scope: Vec::new(),
            binder_counter: 0,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn token(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let t = self.token();
        ParseError::new(t.line, t.col, msg)
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            )))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected identifier, found {}", other.describe())))
            }
        }
    }

    /// Identifier or operator symbol usable as a declared name (`@`, `+`, `*`, `=`, numerals).
    pub fn symbol_name(&mut self) -> Result<String, ParseError> {
        let name = match self.peek().clone() {
            Tok::Ident(s) => s,
            Tok::Num(n) => n.to_string(),
            Tok::At => APPLY.to_string(),
            Tok::Plus => "+".into(),
            Tok::Star => "*".into(),
            Tok::Eq => "=".into(),
            other => {
                return Err(self.error(format!("expected symbol name, found {}", other.describe())))
            }
        };
        self.bump();
        Ok(name)
    }

    // ---- sorts ----

    pub fn sort(&mut self) -> Result<Sort, ParseError> {
        let lhs = self.sort_atom()?;
        if self.eat(&Tok::Arrow) {
            Ok(Sort::arrow(lhs, self.sort()?))
        } else {
            Ok(lhs)
        }
    }

    fn sort_list(&mut self, stop: &[Tok]) -> Result<Vec<Sort>, ParseError> {
        let mut out = Vec::new();
        while !stop.contains(self.peek()) {
            out.push(self.sort()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn sort_atom(&mut self) -> Result<Sort, ParseError> {
        match self.bump() {
            Tok::Ident(s) => Ok(Sort::Base(s.into())),
            Tok::SortVar(s) => Ok(Sort::Var(s.into())),
            Tok::LParen => {
                let s = self.sort()?;
                self.expect(Tok::RParen)?;
                Ok(s)
            }
            Tok::LBracket => {
                let ctx = self.sort_list(&[Tok::Turnstile])?;
                self.expect(Tok::Turnstile)?;
                let res = self.sort_list(&[Tok::RBracket])?;
                self.expect(Tok::RBracket)?;
                Ok(Sort::Context(ctx, res))
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected sort, found {}", other.describe())))
            }
        }
    }

    // ---- terms ----

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.product()?;
            lhs = Term::app("+", vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.application()?;
        while self.eat(&Tok::Star) {
            let rhs = self.application()?;
            lhs = Term::app("*", vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            Tok::Num(_) | Tok::LParen | Tok::Lt => true,
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut head = self.postfix()?;
        while self.starts_primary() {
            let arg = self.postfix()?;
            head = Term::apply(head, arg);
        }
        Ok(head)
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.primary()?;
        while self.eat(&Tok::LBracket) {
            let s = self.term()?;
            self.expect(Tok::RBracket)?;
            t = Term::app(lambda_sigma::CLOS, vec![t, s]);
        }
        Ok(t)
    }

    fn numeral(&self, n: u64) -> Result<Term, ParseError> {
        match &self.sig.numerals {
            NumeralMode::Plain => Ok(Term::constant(&n.to_string())),
            NumeralMode::Peano { succ, zero } => {
                let mut t = Term::constant(zero);
                for _ in 0..n {
                    t = Term::app(succ, vec![t]);
                }
                Ok(t)
            }
            NumeralMode::DeBruijn => {
                if n == 0 {
                    return Err(self.error("de Bruijn indices start at 1"));
                }
                Ok(lambda_sigma::index(n as usize))
            }
        }
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                let t = self.numeral(n)?;
                self.bump();
                Ok(t)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lt => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::Gt)?;
                Ok(pair(a, b))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                if *self.peek() == Tok::LParen && !self.token().spaced {
                    self.bump();
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.term()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(Tok::Comma)?;
                        }
                    }
                    return Ok(Term::App(name.into(), args));
                }
                if let Some(v) = self.scope.iter().rev().find(|v| *v.name == *name) {
                    return Ok(Term::Var(v.clone()));
                }
                if self.sig.contains(&name) {
                    return Ok(Term::constant(&name));
                }
                Ok(match self.unknown {
                    UnknownIdents::Variables => {
                        Term::Var(Var::new(&name, Sort::Var(format!("?{name}").into())))
                    }
                    UnknownIdents::Constants => Term::constant(&name),
                })
            }
            other => Err(self.error(format!("expected term, found {}", other.describe()))),
        }
    }

    // ---- propositions ----

    pub fn prop(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.implication()?;
        if self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            return Ok(Prop::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Prop::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            let rhs = self.conjunction()?;
            lhs = Prop::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = Prop::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Prop, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Prop::not(self.unary()?));
        }
        if self.is_keyword("forall") || self.is_keyword("exists") {
            let universal = self.is_keyword("forall");
            self.bump();
            return self.quantified(universal);
        }
        if self.is_keyword("bot") {
            self.bump();
            return Ok(Prop::Bot);
        }
        if self.is_keyword("top") {
            self.bump();
            return Ok(Prop::Top);
        }
        self.atomic()
    }

    fn quantified(&mut self, universal: bool) -> Result<Prop, ParseError> {
        let mut binders = Vec::new();
        while let Tok::Ident(name) = self.peek().clone() {
            if KEYWORDS.contains(&name.as_str()) {
                break;
            }
            self.bump();
            let sort = if self.eat(&Tok::Colon) {
                self.sort()?
            } else {
                self.binder_counter += 1;
                Sort::Var(format!("?{name}#{}", self.binder_counter).into())
            };
            binders.push(Var::new(&name, sort));
            self.eat(&Tok::Comma);
        }
        if binders.is_empty() {
            return Err(self.error("expected bound variable"));
        }
        let depth = self.scope.len();
        self.scope.extend(binders.iter().cloned());
        let body = if self.eat(&Tok::Dot) {
            self.prop()
        } else {
            self.unary()
        };
        self.scope.truncate(depth);
        let body = body?;
        Ok(binders.into_iter().rev().fold(body, |acc, v| {
            if universal {
                Prop::forall(v, acc)
            } else {
                Prop::exists(v, acc)
            }
        }))
    }

    fn atomic(&mut self) -> Result<Prop, ParseError> {
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            self.bump();
            if let Ok(p) = self.prop() {
                if self.eat(&Tok::RParen) && !self.continues_term() {
                    return Ok(p);
                }
            }
            self.pos = save;
        }
        let t = self.term()?;
        if self.eat(&Tok::Eq) {
            let rhs = self.term()?;
            return Ok(Prop::atom("=", vec![t, rhs]));
        }
        if self.is_keyword("in") {
            self.bump();
            let rhs = self.term()?;
            return Ok(Prop::atom("in", vec![t, rhs]));
        }
        self.term_as_atom(t).map(Prop::Atom)
    }

    fn continues_term(&self) -> bool {
        matches!(self.peek(), Tok::Eq | Tok::Plus | Tok::Star | Tok::LBracket)
            || self.is_keyword("in")
            || self.starts_primary()
    }

    fn term_as_atom(&self, t: Term) -> Result<Atom, ParseError> {
        match t {
            Term::App(name, args) => {
                if let Some(sym) = self.sig.get(&name) {
                    if !matches!(sym.kind, SymbolKind::Predicate(_)) {
                        return Err(self.error(format!("`{name}` is not a predicate")));
                    }
                }
                if &*name == APPLY || &*name == lambda_sigma::CLOS || &*name == "+" || &*name == "*"
                {
                    return Err(self.error("expected a proposition"));
                }
                Ok(Atom { pred: name, args })
            }
            Term::Var(v) => {
                if self.scope.contains(&v) {
                    return Err(
                        self.error(format!("bound variable `{}` used as a proposition", v.name))
                    );
                }
                Ok(Atom {
                    pred: v.name,
                    args: Vec::new(),
                })
            }
        }
    }

    /// `lhs = rhs` between terms.
    pub fn equation(&mut self) -> Result<(Term, Term), ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok((lhs, rhs))
    }

    /// An atom, for rule left-hand sides.
    pub fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.atomic()? {
            Prop::Atom(a) => Ok(a),
            _ => Err(self.error("expected an atomic proposition")),
        }
    }

    pub fn mark(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, mark: usize) {
        self.pos = mark;
    }
}

/// `<x, y>` is `{}({}(x, y), {}(x, x))`.
pub fn pair(a: Term, b: Term) -> Term {
    Term::app(
        PAIR,
        vec![
            Term::app(PAIR, vec![a.clone(), b]),
            Term::app(PAIR, vec![a.clone(), a]),
        ],
    )
}

/// Unordered pair symbol of set theory.
pub const PAIR: &str = "upair";
