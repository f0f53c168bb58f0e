//! Given-clause saturation for extended narrowing and resolution.

pub mod inference;
pub mod redundancy;
pub mod trace;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::clausal::{ConstrainedClause, Provenance};
use crate::kernel::{fresh_renaming, Signature, Substitution, Term};
use crate::rewrite::{RewriteSystem, DEFAULT_FUEL};
use crate::unify::{
    cheap_clash, check_solution, e_unify_with, propagate_on_the_fly, EUnifyOutcome,
    NarrowingConfig, Propagation, DEFAULT_DEPTH, DEFAULT_NODE_BUDGET,
};

pub use inference::{
    extended_narrowing, extended_resolution, extended_resolution_with, factoring, LiteralSelection,
    NarrowingFilter,
};
pub use redundancy::{subsumes, Redundancy, RedundancyIndex, Verdict};
pub use trace::{ProofStep, ProofTrace, StepRule};

pub const DEFAULT_MAX_CLAUSES: usize = 10_000;
/// Every this many selections, the oldest passive clause is taken instead of the lightest.
pub const AGE_RATIO: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConstraintStrategy {
    /// Keep constraints until the empty clause; only rigid clashes prune.
    #[default]
    Freeze,
    /// Solve constraints as soon as they appear and propagate the solution.
    OnTheFly,
}

impl FromStr for ConstraintStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "freeze" => Ok(ConstraintStrategy::Freeze),
            "onfly" | "on_the_fly" | "on-the-fly" => Ok(ConstraintStrategy::OnTheFly),
            _ => Err(format!("unknown strategy `{s}` (expected freeze or onfly)")),
        }
    }
}

impl fmt::Display for ConstraintStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintStrategy::Freeze => "freeze",
            ConstraintStrategy::OnTheFly => "onfly",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    pub strategy: ConstraintStrategy,
    /// Normalization budget per proposition or term.
    pub fuel: usize,
    /// Cap on kept clauses.
    pub max_clauses: usize,
    pub narrowing_depth: usize,
    /// Node budget of each E-unification search.
    pub node_budget: usize,
    pub normalize_clauses: bool,
    pub selection: LiteralSelection,
    /// Let narrowing bind literal variables to compound terms.
    pub deep_narrowing: bool,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            strategy: ConstraintStrategy::Freeze,
            fuel: DEFAULT_FUEL,
            max_clauses: DEFAULT_MAX_CLAUSES,
            narrowing_depth: DEFAULT_DEPTH,
            node_budget: DEFAULT_NODE_BUDGET,
            normalize_clauses: true,
            selection: LiteralSelection::default(),
            deep_narrowing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

impl ProverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("fuel", self.fuel),
            ("max_clauses", self.max_clauses),
            ("narrowing_depth", self.narrowing_depth),
            ("node_budget", self.node_budget),
        ] {
            if v == 0 {
                return Err(ConfigError::NotPositive(name));
            }
        }
        Ok(())
    }

    fn narrowing(&self) -> NarrowingConfig {
        NarrowingConfig {
            depth: self.narrowing_depth,
            node_budget: self.node_budget,
            fuel: self.fuel,
        }
    }

    fn clause_fuel(&self) -> usize {
        if self.normalize_clauses {
            self.fuel
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// Solves the final constraints modulo E (checked by normalization).
    Verified(Substitution),
    /// E-unification could neither find a solution nor rule one out.
    Unverified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    MaxClauses,
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::MaxClauses => f.write_str("max_clauses"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult {
    Proved {
        trace: ProofTrace,
        solution: Solution,
    },
    Saturated,
    ResourceOut(Budget),
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Clauses produced by inferences and input, before filtering.
    pub generated: usize,
    pub kept: usize,
    pub given: usize,
    pub resolutions: usize,
    pub factorings: usize,
    pub narrowings: usize,
    pub discarded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub result: SearchResult,
    pub stats: SearchStats,
    /// Selection order of kept clause ids, for fairness checks.
    pub selections: Vec<usize>,
}

/// Run the given-clause loop on `input` modulo `rs`.
pub fn saturate(
    input: Vec<ConstrainedClause>,
    rs: &RewriteSystem,
    cfg: &ProverConfig,
    sig: &mut Signature,
) -> SearchReport {
    let mut p = Prover::new(rs, cfg, sig, None);
    let result = p.run(input);
    SearchReport {
        result,
        stats: p.stats,
        selections: p.selections,
    }
}

/// Run the same search until a kept clause satisfies `target`, returning its
/// derivation. Empty clauses are dropped instead of ending the search.
/// `None` when the search ends first.
pub fn derive(
    input: Vec<ConstrainedClause>,
    rs: &RewriteSystem,
    cfg: &ProverConfig,
    sig: &mut Signature,
    target: &dyn Fn(&ConstrainedClause) -> bool,
) -> (Option<ProofTrace>, SearchStats) {
    let mut p = Prover::new(rs, cfg, sig, Some(target));
    p.run(input);
    (p.derived.take(), p.stats)
}

struct Prover<'a> {
    rs: &'a RewriteSystem,
    cfg: &'a ProverConfig,
    sig: &'a mut Signature,
    arena: BTreeMap<usize, ConstrainedClause>,
    next_id: usize,
    passive: BTreeSet<(usize, usize)>,
    age: BTreeSet<usize>,
    active: Vec<usize>,
    index: RedundancyIndex,
    stats: SearchStats,
    selections: Vec<usize>,
    target: Option<&'a dyn Fn(&ConstrainedClause) -> bool>,
    derived: Option<ProofTrace>,
}

type Step = Result<(), SearchResult>;

impl<'a> Prover<'a> {
    fn new(
        rs: &'a RewriteSystem,
        cfg: &'a ProverConfig,
        sig: &'a mut Signature,
        target: Option<&'a dyn Fn(&ConstrainedClause) -> bool>,
    ) -> Self {
        Prover {
            rs,
            cfg,
            sig,
            arena: BTreeMap::new(),
            next_id: 1,
            passive: BTreeSet::new(),
            age: BTreeSet::new(),
            active: Vec::new(),
            index: RedundancyIndex::new(),
            stats: SearchStats::default(),
            selections: Vec::new(),
            target,
            derived: None,
        }
    }

    fn run(&mut self, input: Vec<ConstrainedClause>) -> SearchResult {
        for c in input {
            if let Err(r) = self.process(c, Provenance::Input) {
                return r;
            }
        }
        while let Some(gid) = self.select() {
            if let Err(r) = self.given(gid) {
                return r;
            }
        }
        SearchResult::Saturated
    }

    fn select(&mut self) -> Option<usize> {
        let by_age = self.selections.len() % AGE_RATIO == AGE_RATIO - 1;
        let id = if by_age {
            self.age.first().copied()?
        } else {
            self.passive.first()?.1
        };
        let weight = clause_weight(&self.arena[&id]);
        self.passive.remove(&(weight, id));
        self.age.remove(&id);
        self.selections.push(id);
        Some(id)
    }

    fn given(&mut self, gid: usize) -> Step {
        let g = self.arena[&gid].clone();
        self.stats.given += 1;
        self.active.push(gid);
        self.index.activate(&g);
        for f in factoring(&g) {
            self.stats.factorings += 1;
            self.process(f, Provenance::Factoring(gid))?;
        }
        let filter = match self.cfg.strategy {
            ConstraintStrategy::OnTheFly if !self.rs.has_e_rules() && self.cfg.deep_narrowing => {
                NarrowingFilter::Unifiable
            }
            ConstraintStrategy::OnTheFly if !self.rs.has_e_rules() => NarrowingFilter::Shallow,
            _ => NarrowingFilter::HeadCompatible,
        };
        for rule in self.rs.r_rules() {
            let out =
                extended_narrowing(&g, rule, self.rs, filter, self.cfg.clause_fuel(), self.sig);
            for n in out {
                self.stats.narrowings += 1;
                self.process(n, Provenance::Narrowing(gid, rule.name.clone()))?;
            }
        }
        for aid in self.active.clone() {
            self.resolve(&g, aid)?;
        }
        Ok(())
    }

    /// Resolve the given clause against active clause `aid`, renaming the
    /// partner apart first when they share variables.
    fn resolve(&mut self, g: &ConstrainedClause, aid: usize) -> Step {
        let a = &self.arena[&aid];
        let gv = g.vars();
        let clash = aid == g.id || a.vars().iter().any(|v| gv.contains(v));
        let (partner, renamed) = if clash {
            let theta = fresh_renaming(a.vars().iter(), self.sig);
            let mut r = a.apply(&theta);
            r.provenance = Provenance::Renaming(aid);
            (r, true)
        } else {
            (a.clone(), false)
        };
        let out = extended_resolution_with(g, &partner, self.cfg.selection);
        if out.is_empty() {
            return Ok(());
        }
        let pid = if renamed { self.store(partner) } else { aid };
        for r in out {
            self.stats.resolutions += 1;
            self.process(r, Provenance::Resolution(g.id, pid))?;
        }
        Ok(())
    }

    fn store(&mut self, mut c: ConstrainedClause) -> usize {
        c.id = self.next_id;
        self.next_id += 1;
        self.arena.insert(c.id, c.clone());
        c.id
    }

    fn process(&mut self, c: ConstrainedClause, provenance: Provenance) -> Step {
        self.stats.generated += 1;
        let pieces = match self.cfg.strategy {
            ConstraintStrategy::OnTheFly => {
                match propagate_on_the_fly(&c, self.rs, self.cfg.clause_fuel(), self.sig) {
                    Propagation::Solved {
                        clauses,
                        substitution,
                    } => clauses
                        .into_iter()
                        .map(|k| (k, Some(substitution.clone())))
                        .collect(),
                    Propagation::Kept(k) => vec![(k, None)],
                    Propagation::Discarded => Vec::new(),
                }
            }
            ConstraintStrategy::Freeze => {
                if c.constraints
                    .iter()
                    .any(|k| cheap_clash(&k.lhs, &k.rhs, self.rs))
                {
                    Vec::new()
                } else {
                    vec![(merge_variable_constraints(c), None)]
                }
            }
        };
        if pieces.is_empty() {
            self.stats.discarded += 1;
        }
        for (mut k, theta) in pieces {
            k.provenance = provenance.clone();
            if !self.cfg.normalize_clauses {
                k.unnormalized = false;
            }
            if k.is_empty() && self.target.is_some() {
                self.stats.discarded += 1;
                continue;
            }
            if k.is_empty() {
                if let Some(solution) = self.refutation_gate(&k, theta) {
                    let id = self.store(k);
                    let trace = ProofTrace::extract(&self.arena, id);
                    return Err(SearchResult::Proved { trace, solution });
                }
                self.stats.discarded += 1;
                continue;
            }
            if let Verdict::Discard(_) = self.index.filter(&k) {
                self.stats.discarded += 1;
                continue;
            }
            if self.stats.kept >= self.cfg.max_clauses {
                return Err(SearchResult::ResourceOut(Budget::MaxClauses));
            }
            self.stats.kept += 1;
            self.index.record(&k);
            let weight = clause_weight(&k);
            let id = self.store(k);
            if self.target.is_some_and(|t| t(&self.arena[&id])) {
                self.derived = Some(ProofTrace::extract(&self.arena, id));
                return Err(SearchResult::Saturated);
            }
            self.passive.insert((weight, id));
            self.age.insert(id);
        }
        Ok(())
    }

    /// Decide whether an empty clause refutes: its constraints must be
    /// E-unifiable. `None` means the clause is discarded.
    fn refutation_gate(
        &self,
        k: &ConstrainedClause,
        theta: Option<Substitution>,
    ) -> Option<Solution> {
        if k.constraints.is_empty() {
            return Some(Solution::Verified(theta.unwrap_or_default()));
        }
        match e_unify_with(&k.constraints, self.rs, &self.cfg.narrowing()) {
            EUnifyOutcome::Solutions(sols) => {
                let s = sols.into_iter().next()?;
                match check_solution(&s, &k.constraints, self.rs, self.cfg.fuel) {
                    Ok(true) => Some(Solution::Verified(s)),
                    Ok(false) => None,
                    Err(_) => Some(Solution::Unverified),
                }
            }
            EUnifyOutcome::Unsatisfiable => None,
            EUnifyOutcome::Unknown => Some(Solution::Unverified),
        }
    }
}

fn clause_weight(c: &ConstrainedClause) -> usize {
    c.literals.len()
}

/// Solve constraints `X = Y` between two variables by identifying them;
/// that binding is a most general E-unifier of the equation.
fn merge_variable_constraints(mut c: ConstrainedClause) -> ConstrainedClause {
    while let Some(i) = c
        .constraints
        .iter()
        .position(|k| matches!((&k.lhs, &k.rhs), (Term::Var(_), Term::Var(_))))
    {
        let k = c.constraints.remove(i);
        let Term::Var(v) = &k.lhs else { unreachable!() };
        if k.lhs != k.rhs {
            c = c.apply(&Substitution::singleton(v.clone(), k.rhs.clone()));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clausal::clausal_form;
    use crate::kernel::{Atom, Prop};
    use crate::rewrite::RewriteRule;
    use crate::syntax::{parse_prop, UnknownIdents};

    fn refute(goal: &str, rs: &RewriteSystem, cfg: &ProverConfig) -> SearchReport {
        let mut sig = Signature::new();
        let g = parse_prop(goal, &sig, UnknownIdents::Constants).unwrap();
        let cf = clausal_form(&Prop::not(g), rs, cfg.fuel, &mut sig);
        saturate(cf.clauses, rs, cfg, &mut sig)
    }

    fn integral_rings() -> RewriteSystem {
        let sig = Signature::new();
        let Prop::Atom(lhs) = parse_prop("x * y = 0", &sig, UnknownIdents::Variables).unwrap()
        else {
            panic!()
        };
        let rhs = parse_prop("x = 0 \\/ y = 0", &sig, UnknownIdents::Variables).unwrap();
        RewriteSystem::new(vec![RewriteRule::r("integral", lhs, rhs).unwrap()])
    }

    #[test]
    fn integral_rings_one_narrowing_one_resolution() {
        let cfg = ProverConfig {
            strategy: ConstraintStrategy::OnTheFly,
            ..ProverConfig::default()
        };
        let report = refute("exists y. (a * a = y => a = y)", &integral_rings(), &cfg);
        let SearchResult::Proved { trace, solution } = report.result else {
            panic!("{:?}", report.result)
        };
        assert!(matches!(solution, Solution::Verified(_)));
        assert_eq!(trace.count(|r| matches!(r, StepRule::Narrowing(..))), 1);
        assert_eq!(trace.count(|r| matches!(r, StepRule::Resolution(..))), 1);
        let narrowed = trace
            .steps
            .iter()
            .find(|s| matches!(s.rule, StepRule::Narrowing(..)))
            .unwrap();
        assert_eq!(
            narrowed
                .literals
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>(),
            ["a = 0"]
        );
        assert!(report.stats.kept <= 10);
    }

    #[test]
    fn self_implying_rule_is_not_provable() {
        let rule = RewriteRule::r(
            "A",
            Atom::prop("A"),
            Prop::imp(Prop::atom("A", vec![]), Prop::atom("B", vec![])),
        );
        let rs = RewriteSystem::new(vec![rule.unwrap()]);
        let report = refute("B", &rs, &ProverConfig::default());
        assert_eq!(report.result, SearchResult::Saturated);
    }

    #[test]
    fn trace_reparses() {
        let cfg = ProverConfig {
            strategy: ConstraintStrategy::OnTheFly,
            ..ProverConfig::default()
        };
        let SearchResult::Proved { trace, .. } =
            refute("exists y. (a * a = y => a = y)", &integral_rings(), &cfg).result
        else {
            panic!()
        };
        let text = trace.to_string();
        assert_eq!(ProofTrace::parse(&text).unwrap().to_string(), text);
    }

    #[test]
    fn zero_budget_rejected() {
        let cfg = ProverConfig {
            fuel: 0,
            ..ProverConfig::default()
        };
        assert_eq!(cfg.validate(), Err(ConfigError::NotPositive("fuel")));
    }
}
