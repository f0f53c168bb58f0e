//! Theory presets, the theory file format and the subset scheme.

pub mod file;
pub mod presets;

use std::collections::{BTreeMap, BTreeSet};

use crate::clausal::{clausal_form, ConstrainedClause, SkolemRecord};
use crate::kernel::{
    Atom, KernelError, Name, Origin, Prop, Signature, Sort, SortInference, Substitution, Symbol,
    SymbolKind, Term, Var,
};
use crate::prover::ConstraintStrategy;
use crate::rewrite::{RewriteRule, RewriteSystem, RuleBody, RuleClassError};
use crate::syntax::{parse_prop, ParseError, UnknownIdents};

pub use file::{declare_line, logical_lines, parse_theory_file, serialize, DECLARATION_KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TheoryError {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {source}")]
    Sort { line: usize, source: KernelError },
    #[error("line {line}: {source}")]
    RuleClass { line: usize, source: RuleClassError },
    #[error("subset body for `{0}` mentions a skolem symbol")]
    SkolemInBody(String),
    #[error("subset body for `{symbol}` has free variable `{var}` that is not a parameter")]
    SubsetFreeVariable { symbol: String, var: Name },
    #[error("no goal named `{0}`")]
    UnknownGoal(String),
}

#[derive(Clone, Debug)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub rules: RewriteSystem,
    pub axioms: Vec<(String, Prop)>,
    pub goals: Vec<(String, Prop)>,
    /// Constraint strategy used unless overridden.
    pub strategy: ConstraintStrategy,
    /// Subset symbols by parameter count and canonical body.
    subsets: BTreeMap<(usize, String), Name>,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        let syms = |t: &Theory| t.signature.symbols().cloned().collect::<Vec<Symbol>>();
        let sorts = |t: &Theory| t.signature.sorts().cloned().collect::<Vec<Name>>();
        self.name == other.name
            && syms(self) == syms(other)
            && sorts(self) == sorts(other)
            && self.signature.numerals == other.signature.numerals
            && self.rules == other.rules
            && self.axioms == other.axioms
            && self.goals == other.goals
            && self.strategy == other.strategy
    }
}

/// Clauses of a refutation problem: the axioms plus the negated goal.
#[derive(Clone, Debug)]
pub struct Problem {
    pub signature: Signature,
    pub clauses: Vec<ConstrainedClause>,
    pub skolems: Vec<SkolemRecord>,
    pub unnormalized: bool,
}

impl Theory {
    pub fn new(name: &str) -> Theory {
        Theory {
            name: name.into(),
            signature: Signature::new(),
            rules: RewriteSystem::default(),
            axioms: Vec::new(),
            goals: Vec::new(),
            strategy: ConstraintStrategy::Freeze,
            subsets: BTreeMap::new(),
        }
    }

    pub fn goal(&self, name: &str) -> Result<&Prop, TheoryError> {
        self.goals
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| TheoryError::UnknownGoal(name.into()))
    }

    /// Parse a closed proposition against this theory. Unknown symbols are
    /// declared in the returned signature with sorts fixed by inference.
    pub fn parse_statement(&self, src: &str) -> Result<(Prop, Signature), TheoryError> {
        let mut sig = self.signature.clone();
        let p = parse_prop(src, &sig, UnknownIdents::Constants)?;
        declare_unknowns(&p, &mut sig);
        check_statement(&p, &sig, 1)?;
        Ok((p, sig))
    }

    /// Clausal form of the axioms and of the negation of `goal`.
    pub fn problem(&self, goal: &Prop, sig: Signature, fuel: usize) -> Problem {
        let mut sig = sig;
        let mut clauses = Vec::new();
        let mut skolems = Vec::new();
        let mut unnormalized = false;
        let props = self
            .axioms
            .iter()
            .map(|(_, p)| p.clone())
            .chain(std::iter::once(Prop::not(goal.clone())));
        for p in props {
            let cf = clausal_form(&p, &self.rules, fuel, &mut sig);
            unnormalized |= cf.unnormalized;
            clauses.extend(cf.clauses);
            skolems.extend(cf.skolems);
        }
        Problem {
            signature: sig,
            clauses,
            skolems,
            unnormalized,
        }
    }

    /// Add an instance of the subset scheme: a fresh symbol `f` of arity
    /// `params.len() + 1` and the rule `v in f(y.., z) -> v in z /\ body[y../params, v/w]`.
    /// Bodies equal up to renaming of bound variables and parameters share one symbol.
    pub fn declare_subset_symbol(
        &mut self,
        name: &str,
        params: &[Var],
        w: &Var,
        body: &Prop,
        allow_skolem: bool,
    ) -> Result<(Symbol, RewriteRule), TheoryError> {
        let allowed: BTreeSet<&Var> = params.iter().chain(std::iter::once(w)).collect();
        if let Some(v) = body.free_vars().into_iter().find(|v| !allowed.contains(v)) {
            return Err(TheoryError::SubsetFreeVariable {
                symbol: name.into(),
                var: v.name,
            });
        }
        if !allow_skolem
            && prop_symbols(body)
                .iter()
                .any(|s| self.signature.is_skolem(s))
        {
            return Err(TheoryError::SkolemInBody(name.into()));
        }
        let canon = Substitution::from_pairs(
            params
                .iter()
                .enumerate()
                .map(|(i, x)| (x.clone(), Term::var(&format!("#{i}"), x.sort.clone())))
                .chain(std::iter::once((
                    w.clone(),
                    Term::var("#w", w.sort.clone()),
                ))),
        );
        let key = (params.len(), canon.apply_prop(body).canonical().to_string());
        if let Some(existing) = self.subsets.get(&key) {
            let symbol = self
                .signature
                .get(existing)
                .cloned()
                .expect("declared subset symbol");
            let rule = self.rules.get(existing).cloned().expect("subset rule");
            return Ok((symbol, rule));
        }

        let set = match self.signature.get("in").map(|s| &s.kind) {
            Some(SymbolKind::Predicate(ranks)) if ranks.len() == 2 => ranks[1].clone(),
            _ => Sort::base("set"),
        };
        let fname = if self.signature.contains(name) {
            self.signature.fresh_symbol_name(name)
        } else {
            name.to_string()
        };
        let mut taken = BTreeSet::new();
        body.all_var_names(&mut taken);
        let mut fresh = |base: &str| {
            let n = (0..)
                .map(|k| {
                    if k == 0 {
                        base.to_string()
                    } else {
                        format!("{base}{k}")
                    }
                })
                .find(|n| !taken.contains(n.as_str()))
                .unwrap();
            taken.insert(n.as_str().into());
            Var::new(&n, set.clone())
        };
        let v = fresh("v");
        let ys: Vec<Var> = params.iter().map(|_| fresh("y")).collect();
        let z = fresh("z");
        let inst = Substitution::from_pairs(
            params
                .iter()
                .cloned()
                .zip(ys.iter().map(|y| Term::Var(y.clone())))
                .chain(std::iter::once((w.clone(), Term::Var(v.clone())))),
        );
        let mut args: Vec<Term> = ys.iter().cloned().map(Term::Var).collect();
        args.push(Term::Var(z.clone()));
        let lhs = Atom::new("in", vec![Term::Var(v.clone()), Term::app(&fname, args)]);
        let rhs = Prop::and(
            Prop::atom("in", vec![Term::Var(v), Term::Var(z)]),
            inst.apply_prop(body),
        );
        let rule = RewriteRule::r(&fname, lhs, rhs)
            .map_err(|source| TheoryError::RuleClass { line: 0, source })?;
        let kind = SymbolKind::Function {
            args: vec![set.clone(); params.len() + 1],
            result: set,
        };
        self.signature
            .declare(&fname, kind, Origin::User)
            .map_err(|source| TheoryError::Sort { line: 0, source })?;
        self.rules.push(rule.clone());
        self.subsets.insert(key, fname.as_str().into());
        Ok((self.signature.get(&fname).cloned().unwrap(), rule))
    }
}

/// Load a preset by name: one of [`presets::NAMES`], with `chain(n)` for any `n >= 1`.
pub fn load_preset(name: &str) -> Result<Theory, TheoryError> {
    let text = match name {
        "arith" => presets::ARITH.to_string(),
        "integral-rings" => presets::INTEGRAL_RINGS.to_string(),
        "hol-comb" => presets::HOL_COMB.to_string(),
        "hol-sigma" => presets::HOL_SIGMA.to_string(),
        "set" => presets::set(),
        "set-cantor" => presets::set_cantor(),
        _ => match chain_size(name) {
            Some(n) => presets::chain(n),
            None => return Err(TheoryError::UnknownPreset(name.into())),
        },
    };
    parse_theory_file(&text)
}

fn chain_size(name: &str) -> Option<usize> {
    let n = name
        .strip_prefix("chain(")?
        .strip_suffix(')')?
        .trim()
        .parse()
        .ok()?;
    (n >= 1).then_some(n)
}

fn prop_symbols(p: &Prop) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for a in p.atoms() {
        for t in &a.args {
            t.symbols(&mut out);
        }
    }
    out
}

/// Declare every symbol of `p` missing from `sig`, with sort variables that
/// inference resolves per use.
pub fn declare_unknowns(p: &Prop, sig: &mut Signature) {
    for a in p.atoms() {
        if !sig.contains(&a.pred) {
            let ranks = (0..a.args.len())
                .map(|i| Sort::var(&format!("?{}#{i}", a.pred)))
                .collect();
            let _ = sig.declare(&a.pred, SymbolKind::Predicate(ranks), Origin::User);
        }
        for t in &a.args {
            declare_term_unknowns(t, sig);
        }
    }
}

pub fn declare_term_unknowns(t: &Term, sig: &mut Signature) {
    let Term::App(h, args) = t else { return };
    if !sig.contains(h) {
        let kind = if args.is_empty() {
            SymbolKind::Individual(Sort::var(&format!("?{h}#")))
        } else {
            SymbolKind::Function {
                args: (0..args.len())
                    .map(|i| Sort::var(&format!("?{h}#{i}")))
                    .collect(),
                result: Sort::var(&format!("?{h}#")),
            }
        };
        let _ = sig.declare(h, kind, Origin::User);
    }
    for a in args {
        declare_term_unknowns(a, sig);
    }
}

fn check_statement(p: &Prop, sig: &Signature, line: usize) -> Result<(), TheoryError> {
    SortInference::new(sig)
        .prop(p)
        .map_err(|source| TheoryError::Sort { line, source })
}

fn check_rule(rule: &RewriteRule, sig: &Signature, line: usize) -> Result<(), TheoryError> {
    let mut inf = SortInference::new(sig);
    let r = match &rule.body {
        RuleBody::Term { lhs, rhs } => inf.same_sort(lhs, rhs),
        RuleBody::Prop { lhs, rhs } => inf.atom(lhs).and_then(|_| inf.prop(rhs)),
    };
    r.map_err(|source| TheoryError::Sort { line, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{check_orthogonal, normalize, RuleClass};
    use crate::syntax::parse_term;

    #[test]
    fn presets_load() {
        for name in [
            "arith",
            "integral-rings",
            "chain(3)",
            "hol-comb",
            "hol-sigma",
            "set",
            "set-cantor",
        ] {
            load_preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert_eq!(
            load_preset("nope").unwrap_err(),
            TheoryError::UnknownPreset("nope".into())
        );
    }

    #[test]
    fn preset_rule_counts() {
        let count =
            |t: &Theory, c: RuleClass| t.rules.rules().iter().filter(|r| r.class() == c).count();
        let arith = load_preset("arith").unwrap();
        assert_eq!(
            (count(&arith, RuleClass::E), count(&arith, RuleClass::R)),
            (4, 0)
        );
        let comb = load_preset("hol-comb").unwrap();
        assert_eq!(
            (count(&comb, RuleClass::E), count(&comb, RuleClass::R)),
            (2, 3)
        );
        let sigma = load_preset("hol-sigma").unwrap();
        assert_eq!(
            (count(&sigma, RuleClass::E), count(&sigma, RuleClass::R)),
            (14, 3)
        );
        assert_eq!(
            load_preset("integral-rings").unwrap().rules.rules().len(),
            1
        );
        assert_eq!(load_preset("chain(1)").unwrap().rules.rules().len(), 3);
    }

    #[test]
    fn comb_rules_as_printed() {
        let comb = load_preset("hol-comb").unwrap();
        let shown: Vec<String> = comb.rules.e_rules().map(|r| r.to_string()).collect();
        assert_eq!(shown, ["E S: S x y z -> x z (y z)", "E K: K x y -> x"]);
    }

    #[test]
    fn chain_one_rules() {
        let t = load_preset("chain(1)").unwrap();
        let shown: Vec<String> = t.rules.rules().iter().map(|r| r.to_string()).collect();
        assert_eq!(
            shown,
            [
                "R p1: P1 -> Q2 \\/ P2",
                "R q2: Q2 -> bot",
                "R p2: P2 -> bot"
            ]
        );
    }

    #[test]
    fn crabbe_subset_rule() {
        let t = load_preset("set").unwrap();
        assert_eq!(
            t.rules.get("f").unwrap().to_string(),
            "R f: v in f(z) -> v in z /\\ ~v in v"
        );
    }

    #[test]
    fn subset_bodies_equal_up_to_renaming_share_a_symbol() {
        let mut t = load_preset("set").unwrap();
        let w = Var::new("u", Sort::base("set"));
        let body = Prop::not(Prop::atom(
            "in",
            vec![Term::Var(w.clone()), Term::Var(w.clone())],
        ));
        let (sym, _) = t.declare_subset_symbol("h", &[], &w, &body, false).unwrap();
        assert_eq!(&*sym.name, "f");
        let (sym, rule) = t
            .declare_subset_symbol("h", &[], &w, &Prop::Top, false)
            .unwrap();
        assert_eq!(&*sym.name, "h");
        assert_eq!(rule.to_string(), "R h: v in h(z) -> v in z /\\ top");
    }

    #[test]
    fn skolem_in_body_rejected_unless_allowed() {
        let mut t = load_preset("set").unwrap();
        t.signature
            .declare(
                "sk",
                SymbolKind::Individual(Sort::base("set")),
                Origin::Skolem {
                    source: "exists".into(),
                },
            )
            .unwrap();
        let w = Var::new("w", Sort::base("set"));
        let body = Prop::atom("in", vec![Term::Var(w.clone()), Term::constant("sk")]);
        assert_eq!(
            t.declare_subset_symbol("h", &[], &w, &body, false)
                .unwrap_err(),
            TheoryError::SkolemInBody("h".into())
        );
        assert!(t.declare_subset_symbol("h", &[], &w, &body, true).is_ok());
    }

    #[test]
    fn comb_and_sigma_agree_on_k() {
        let comb = load_preset("hol-comb").unwrap();
        let t = parse_term("K a b", &comb.signature, UnknownIdents::Constants).unwrap();
        assert_eq!(
            normalize(&t, &comb.rules, 100).into_value().to_string(),
            "a"
        );
        let sigma = load_preset("hol-sigma").unwrap();
        let t = parse_term(
            "lam(lam(2)) a b",
            &sigma.signature,
            UnknownIdents::Constants,
        )
        .unwrap();
        assert_eq!(
            normalize(&t, &sigma.rules, 100).into_value().to_string(),
            "a"
        );
    }

    #[test]
    fn fig2_and_fig3_presets_orthogonal() {
        for name in [
            "hol-comb",
            "set",
            "set-cantor",
            "arith",
            "integral-rings",
            "chain(4)",
        ] {
            let report = check_orthogonal(&load_preset(name).unwrap().rules);
            assert!(report.orthogonal, "{name}: {:?}", report.diagnostics);
        }
    }

    #[test]
    fn chain_clausal_form_is_empty_clause() {
        for n in 1..=20 {
            let t = load_preset(&format!("chain({n})")).unwrap();
            let p = t.problem(t.goal("refute").unwrap(), t.signature.clone(), 10_000);
            assert_eq!(p.clauses.len(), 1, "n = {n}");
            assert!(p.clauses[0].is_empty());
        }
    }
}
