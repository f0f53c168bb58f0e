//! Class E (term) and class R (atom) rewrite rules, reduction and normalization.

use std::collections::BTreeSet;
use std::fmt;

use crate::kernel::{term_positions, Atom, Name, Position, Prop, Term, Var};
use crate::lambda_sigma::{CLOS, COMP, LAM, ONE, SHIFT};
use crate::unify::{match_atom, match_term, unify_all};

pub const DEFAULT_FUEL: usize = 10_000;

/// Number of reducts kept in a normalization sequence.
pub const SEQUENCE_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleClass {
    E,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleBody {
    Term { lhs: Term, rhs: Term },
    Prop { lhs: Atom, rhs: Prop },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// `lam(a 1) -> b` when `a` reduces to `b[shift]`.
    Eta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: Name,
    pub body: RuleBody,
    pub side: SideCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleClassError {
    #[error("rule `{0}`: left-hand side is a variable")]
    VariableLhs(Name),
    #[error(
        "rule `{rule}`: variable `{var}` of the right-hand side is not bound by the left-hand side"
    )]
    FreeRhsVariable { rule: Name, var: Name },
}

impl RewriteRule {
    pub fn e(name: &str, lhs: Term, rhs: Term) -> Result<RewriteRule, RuleClassError> {
        if lhs.is_var() {
            return Err(RuleClassError::VariableLhs(name.into()));
        }
        check_vars(name, &lhs.vars(), &rhs.vars())?;
        Ok(RewriteRule {
            name: name.into(),
            body: RuleBody::Term { lhs, rhs },
            side: SideCondition::None,
        })
    }

    pub fn r(name: &str, lhs: Atom, rhs: Prop) -> Result<RewriteRule, RuleClassError> {
        check_vars(name, &lhs.vars(), &rhs.free_vars())?;
        Ok(RewriteRule {
            name: name.into(),
            body: RuleBody::Prop { lhs, rhs },
            side: SideCondition::None,
        })
    }

    /// The conditional eta rule `lam(a 1) -> b` over the explicit-substitution symbols.
    pub fn eta(name: &str, var: Var) -> RewriteRule {
        let a = Term::Var(var);
        let lhs = Term::app(LAM, vec![Term::apply(a.clone(), Term::constant(ONE))]);
        RewriteRule {
            name: name.into(),
            body: RuleBody::Term { lhs, rhs: a },
            side: SideCondition::Eta,
        }
    }

    pub fn class(&self) -> RuleClass {
        match self.body {
            RuleBody::Term { .. } => RuleClass::E,
            RuleBody::Prop { .. } => RuleClass::R,
        }
    }

    /// Left-hand side as a term (atoms are read as terms headed by the predicate).
    pub fn lhs_term(&self) -> Term {
        match &self.body {
            RuleBody::Term { lhs, .. } => lhs.clone(),
            RuleBody::Prop { lhs, .. } => lhs.to_term(),
        }
    }

    pub fn lhs_vars(&self) -> BTreeSet<Var> {
        self.lhs_term().vars()
    }

    /// Variables of the rule with fresh names from `fresh`.
    pub fn renamed(&self, fresh: &mut impl FnMut(&Var) -> Var) -> RewriteRule {
        let mut vars = self.lhs_vars();
        if let RuleBody::Prop { rhs, .. } = &self.body {
            vars.extend(rhs.free_vars());
        }
        let s = crate::kernel::Substitution::from_pairs(
            vars.iter().map(|v| (v.clone(), Term::Var(fresh(v)))),
        );
        let body = match &self.body {
            RuleBody::Term { lhs, rhs } => RuleBody::Term {
                lhs: s.apply_term(lhs),
                rhs: s.apply_term(rhs),
            },
            RuleBody::Prop { lhs, rhs } => RuleBody::Prop {
                lhs: s.apply_atom(lhs),
                rhs: s.apply_prop(rhs),
            },
        };
        RewriteRule {
            name: self.name.clone(),
            body,
            side: self.side,
        }
    }

    fn rewrite_term(&self, t: &Term, sys: &RewriteSystem) -> Option<Term> {
        let RuleBody::Term { lhs, rhs } = &self.body else {
            return None;
        };
        let sigma = match_term(lhs, t)?;
        match self.side {
            SideCondition::None => Some(sigma.apply_term(rhs)),
            SideCondition::Eta => {
                let a = sigma.apply_term(rhs);
                let without_eta = sys.without_conditional();
                let a = match normalize(&a, &without_eta, ETA_FUEL) {
                    NormalizeOutcome::Normal { value, .. } => value,
                    NormalizeOutcome::FuelExhausted { .. } => return None,
                };
                unshift(&a)
            }
        }
    }

    fn rewrite_atom(&self, a: &Atom) -> Option<Prop> {
        let RuleBody::Prop { lhs, rhs } = &self.body else {
            return None;
        };
        match_atom(lhs, a).map(|sigma| sigma.apply_prop(rhs))
    }
}

fn check_vars(rule: &str, lhs: &BTreeSet<Var>, rhs: &BTreeSet<Var>) -> Result<(), RuleClassError> {
    match rhs.iter().find(|v| !lhs.contains(*v)) {
        Some(v) => Err(RuleClassError::FreeRhsVariable {
            rule: rule.into(),
            var: v.name.clone(),
        }),
        None => Ok(()),
    }
}

const ETA_FUEL: usize = 1_000;

/// `b` such that `t` is `b[shift]`, for `t` in normal form.
fn unshift(t: &Term) -> Option<Term> {
    match t {
        Term::App(h, args) if &**h == CLOS => {
            let s = &args[1];
            if *s == Term::constant(SHIFT) {
                return Some(args[0].clone());
            }
            match s {
                Term::App(c, xs)
                    if &**c == COMP && xs[0] == Term::constant(SHIFT) && is_shift_power(&xs[1]) =>
                {
                    Some(Term::app(CLOS, vec![args[0].clone(), xs[1].clone()]))
                }
                _ => None,
            }
        }
        Term::App(h, args) if &**h == crate::kernel::APPLY => {
            Some(Term::apply(unshift(&args[0])?, unshift(&args[1])?))
        }
        _ => None,
    }
}

fn is_shift_power(t: &Term) -> bool {
    match t {
        Term::App(h, xs) if &**h == SHIFT => xs.is_empty(),
        Term::App(h, xs) if &**h == COMP => {
            xs[0] == Term::constant(SHIFT) && is_shift_power(&xs[1])
        }
        _ => false,
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    pub fn new(rules: Vec<RewriteRule>) -> RewriteSystem {
        RewriteSystem { rules }
    }

    pub fn push(&mut self, rule: RewriteRule) {
        self.rules.push(rule);
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn e_rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter().filter(|r| r.class() == RuleClass::E)
    }

    pub fn r_rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.rules.iter().filter(|r| r.class() == RuleClass::R)
    }

    pub fn has_e_rules(&self) -> bool {
        self.e_rules().next().is_some()
    }

    pub fn get(&self, name: &str) -> Option<&RewriteRule> {
        self.rules.iter().find(|r| &*r.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Only the E-rules.
    pub fn e_system(&self) -> RewriteSystem {
        RewriteSystem::new(self.e_rules().cloned().collect())
    }

    fn without_conditional(&self) -> RewriteSystem {
        RewriteSystem::new(
            self.rules
                .iter()
                .filter(|r| r.side == SideCondition::None)
                .cloned()
                .collect(),
        )
    }

    /// Root symbol of the spine head of `t` when no E-rule can ever fire at
    /// `t` or a spine prefix of it, whatever the instantiation of its variables.
    pub fn rigid_head<'t>(&self, t: &'t Term) -> Option<&'t Name> {
        let (head, args) = t.spine();
        let Term::App(g, _) = head else { return None };
        let blocked = self.e_rules().any(|r| {
            let lhs = r.lhs_term();
            let (lh, largs) = lhs.spine();
            largs.len() <= args.len()
                && match lh {
                    Term::Var(_) => true,
                    Term::App(f, _) => f == g,
                }
        });
        (!blocked).then_some(g)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

/// Values the reduction engine rewrites: terms with E-rules, propositions with both classes.
pub trait Reducible: Clone + fmt::Display {
    fn reduce_once_with(&self, rs: &RewriteSystem, strategy: Strategy) -> Option<Self>;
}

fn reduce_root(t: &Term, rs: &RewriteSystem) -> Option<Term> {
    rs.e_rules().find_map(|r| r.rewrite_term(t, rs))
}

fn reduce_term(t: &Term, rs: &RewriteSystem, strategy: Strategy) -> Option<Term> {
    let Term::App(h, args) = t else { return None };
    let inner = |i: usize| {
        reduce_term(&args[i], rs, strategy).map(|a| {
            let mut args = args.clone();
            args[i] = a;
            Term::App(h.clone(), args)
        })
    };
    match strategy {
        Strategy::LeftmostOutermost => {
            reduce_root(t, rs).or_else(|| (0..args.len()).find_map(inner))
        }
        Strategy::RightmostInnermost => (0..args.len())
            .rev()
            .find_map(inner)
            .or_else(|| reduce_root(t, rs)),
    }
}

fn reduce_atom(a: &Atom, rs: &RewriteSystem, strategy: Strategy) -> Option<Prop> {
    let root = || rs.r_rules().find_map(|r| r.rewrite_atom(a));
    let inner = |i: usize| {
        reduce_term(&a.args[i], rs, strategy).map(|t| {
            let mut args = a.args.clone();
            args[i] = t;
            Prop::Atom(Atom {
                pred: a.pred.clone(),
                args,
            })
        })
    };
    match strategy {
        Strategy::LeftmostOutermost => root().or_else(|| (0..a.args.len()).find_map(inner)),
        Strategy::RightmostInnermost => (0..a.args.len()).rev().find_map(inner).or_else(root),
    }
}

fn reduce_prop(p: &Prop, rs: &RewriteSystem, strategy: Strategy) -> Option<Prop> {
    let bin = |a: &Prop, b: &Prop, mk: fn(Prop, Prop) -> Prop| {
        let left = || reduce_prop(a, rs, strategy).map(|a2| mk(a2, b.clone()));
        let right = || reduce_prop(b, rs, strategy).map(|b2| mk(a.clone(), b2));
        match strategy {
            Strategy::LeftmostOutermost => left().or_else(right),
            Strategy::RightmostInnermost => right().or_else(left),
        }
    };
    match p {
        Prop::Atom(a) => reduce_atom(a, rs, strategy),
        Prop::Bot | Prop::Top => None,
        Prop::Not(q) => reduce_prop(q, rs, strategy).map(Prop::not),
        Prop::And(a, b) => bin(a, b, Prop::and),
        Prop::Or(a, b) => bin(a, b, Prop::or),
        Prop::Imp(a, b) => bin(a, b, Prop::imp),
        Prop::Iff(a, b) => bin(a, b, Prop::iff),
        Prop::Forall(v, q) => reduce_prop(q, rs, strategy).map(|q| Prop::forall(v.clone(), q)),
        Prop::Exists(v, q) => reduce_prop(q, rs, strategy).map(|q| Prop::exists(v.clone(), q)),
    }
}

impl Reducible for Term {
    fn reduce_once_with(&self, rs: &RewriteSystem, strategy: Strategy) -> Option<Term> {
        reduce_term(self, rs, strategy)
    }
}

impl Reducible for Prop {
    fn reduce_once_with(&self, rs: &RewriteSystem, strategy: Strategy) -> Option<Prop> {
        reduce_prop(self, rs, strategy)
    }
}

/// One leftmost-outermost step, or `None` on a normal form.
pub fn reduce_once<T: Reducible>(x: &T, rs: &RewriteSystem) -> Option<T> {
    x.reduce_once_with(rs, Strategy::LeftmostOutermost)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeOutcome<T> {
    /// `sequence` starts with the input and ends with `value` (truncated to [`SEQUENCE_LIMIT`]).
    Normal {
        value: T,
        steps: usize,
        sequence: Vec<T>,
    },
    /// `prefix` starts with the input (truncated to [`SEQUENCE_LIMIT`]).
    FuelExhausted { value: T, prefix: Vec<T> },
}

impl<T> NormalizeOutcome<T> {
    pub fn value(&self) -> &T {
        match self {
            NormalizeOutcome::Normal { value, .. }
            | NormalizeOutcome::FuelExhausted { value, .. } => value,
        }
    }

    pub fn into_value(self) -> T {
        match self {
            NormalizeOutcome::Normal { value, .. }
            | NormalizeOutcome::FuelExhausted { value, .. } => value,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, NormalizeOutcome::Normal { .. })
    }

    pub fn sequence(&self) -> &[T] {
        match self {
            NormalizeOutcome::Normal { sequence, .. } => sequence,
            NormalizeOutcome::FuelExhausted { prefix, .. } => prefix,
        }
    }
}

pub fn normalize<T: Reducible>(x: &T, rs: &RewriteSystem, fuel: usize) -> NormalizeOutcome<T> {
    normalize_with(x, rs, fuel, Strategy::LeftmostOutermost)
}

pub fn normalize_with<T: Reducible>(
    x: &T,
    rs: &RewriteSystem,
    fuel: usize,
    strategy: Strategy,
) -> NormalizeOutcome<T> {
    let mut cur = x.clone();
    let mut seq = vec![cur.clone()];
    for steps in 0..fuel {
        match cur.reduce_once_with(rs, strategy) {
            None => {
                return NormalizeOutcome::Normal {
                    value: cur,
                    steps,
                    sequence: seq,
                }
            }
            Some(next) => {
                if seq.len() < SEQUENCE_LIMIT {
                    seq.push(next.clone());
                }
                cur = next;
            }
        }
    }
    if cur.reduce_once_with(rs, strategy).is_none() {
        return NormalizeOutcome::Normal {
            value: cur,
            steps: fuel,
            sequence: seq,
        };
    }
    NormalizeOutcome::FuelExhausted {
        value: cur,
        prefix: seq,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    pub diagnostics: Vec<String>,
}

/// Left-linearity of every rule and absence of overlaps between left-hand sides.
pub fn check_orthogonal(rs: &RewriteSystem) -> OrthogonalityReport {
    let mut diagnostics = Vec::new();
    for r in rs.rules() {
        let mut seen = Vec::new();
        var_occurrences(&r.lhs_term(), &mut seen);
        let distinct: BTreeSet<&Var> = seen.iter().collect();
        if distinct.len() != seen.len() {
            diagnostics.push(format!("rule `{}` is not left-linear", r.name));
        }
    }
    let rename = |r: &RewriteRule, tag: &str| {
        r.renamed(&mut |v: &Var| Var {
            name: format!("{}~{tag}", v.name).into(),
            sort: v.sort.clone(),
        })
    };
    for (i, outer) in rs.rules().iter().enumerate() {
        let l1 = rename(outer, "1").lhs_term();
        for pos in term_positions(&l1) {
            let sub = crate::kernel::term_at(&l1, &pos.0).expect("position from term_positions");
            if sub.is_var() {
                continue;
            }
            let in_atom_args = outer.class() == RuleClass::R && !pos.is_root();
            for (j, inner) in rs.rules().iter().enumerate() {
                if pos.is_root() && (j <= i || outer.class() != inner.class()) {
                    continue;
                }
                if in_atom_args && inner.class() == RuleClass::R {
                    continue;
                }
                if !pos.is_root() && outer.class() == RuleClass::E && inner.class() == RuleClass::R
                {
                    continue;
                }
                let l2 = rename(inner, "2").lhs_term();
                if unify_all(vec![(sub.clone(), l2)]).is_some() {
                    diagnostics.push(overlap(outer, inner, &pos));
                }
            }
        }
    }
    OrthogonalityReport {
        orthogonal: diagnostics.is_empty(),
        diagnostics,
    }
}

fn var_occurrences(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::App(_, args) => args.iter().for_each(|a| var_occurrences(a, out)),
    }
}

fn overlap(outer: &RewriteRule, inner: &RewriteRule, pos: &Position) -> String {
    format!(
        "rule `{}` overlaps rule `{}` at position {pos}",
        inner.name, outer.name
    )
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.body, self.side) {
            (_, SideCondition::Eta) => write!(f, "eta {}", self.name),
            (RuleBody::Term { lhs, rhs }, _) => write!(f, "E {}: {lhs} -> {rhs}", self.name),
            (RuleBody::Prop { lhs, rhs }, _) => write!(f, "R {}: {lhs} -> {rhs}", self.name),
        }
    }
}
