//! Constrained clauses and the clausal-form pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kernel::{
    var_stem, Atom, Name, Origin, Prop, Signature, Sort, Substitution, Symbol, SymbolKind, Term,
    Var,
};
use crate::rewrite::{normalize, NormalizeOutcome, RewriteSystem};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn to_prop(&self) -> Prop {
        let a = Prop::Atom(self.atom.clone());
        if self.positive {
            a
        } else {
            Prop::not(a)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// `lhs =_E rhs` between terms of one sort.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub lhs: Term,
    pub rhs: Term,
}

impl Constraint {
    pub fn new(lhs: Term, rhs: Term) -> Constraint {
        Constraint { lhs, rhs }
    }

    /// Equations making two atoms equal, or `None` when predicates differ.
    /// Predicates are never rewritten by E-rules, so atom equality decomposes.
    pub fn between_atoms(a: &Atom, b: &Atom) -> Option<Vec<Constraint>> {
        if a.pred != b.pred || a.args.len() != b.args.len() {
            return None;
        }
        Some(
            a.args
                .iter()
                .zip(&b.args)
                .map(|(x, y)| Constraint::new(x.clone(), y.clone()))
                .collect(),
        )
    }

    pub fn apply(&self, s: &Substitution) -> Constraint {
        Constraint::new(s.apply_term(&self.lhs), s.apply_term(&self.rhs))
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Input,
    Resolution(usize, usize),
    Factoring(usize),
    Narrowing(usize, Name),
    Renaming(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstrainedClause {
    pub id: usize,
    pub literals: Vec<Literal>,
    pub constraints: Vec<Constraint>,
    pub provenance: Provenance,
    /// Produced from a proposition whose normalization ran out of fuel.
    pub unnormalized: bool,
}

impl ConstrainedClause {
    pub fn new(literals: Vec<Literal>, constraints: Vec<Constraint>) -> ConstrainedClause {
        let mut c = ConstrainedClause {
            id: 0,
            literals: Vec::new(),
            constraints: Vec::new(),
            provenance: Provenance::Input,
            unnormalized: false,
        };
        for l in literals {
            c.push_literal(l);
        }
        for k in constraints {
            c.push_constraint(k);
        }
        c
    }

    pub fn push_literal(&mut self, l: Literal) {
        if !self.literals.contains(&l) {
            self.literals.push(l);
        }
    }

    pub fn push_constraint(&mut self, k: Constraint) {
        if !self.constraints.contains(&k) {
            self.constraints.push(k);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.atom.collect_vars(&mut out);
        }
        for k in &self.constraints {
            k.collect_vars(&mut out);
        }
        out
    }

    pub fn apply(&self, s: &Substitution) -> ConstrainedClause {
        let mut c = ConstrainedClause::new(
            self.literals
                .iter()
                .map(|l| Literal {
                    positive: l.positive,
                    atom: s.apply_atom(&l.atom),
                })
                .collect(),
            self.constraints.iter().map(|k| k.apply(s)).collect(),
        );
        c.id = self.id;
        c.provenance = self.provenance.clone();
        c.unnormalized = self.unnormalized;
        c
    }

    /// Contains `P` and `~P` for a syntactically equal atom.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .any(|l| l.positive && self.literals.contains(&l.negated()))
    }

    /// The clause as a disjunction (constraints dropped).
    pub fn to_prop(&self) -> Prop {
        Prop::disjunction(self.literals.iter().map(Literal::to_prop))
    }

    /// Representative of the clause up to variable renaming and literal order.
    pub fn variant_key(&self) -> String {
        let blind = |l: &Literal| {
            let s = Substitution::from_pairs(
                l.atom.vars().into_iter().map(|v| (v, Term::constant("_"))),
            );
            Literal {
                positive: l.positive,
                atom: s.apply_atom(&l.atom),
            }
            .to_string()
        };
        let mut lits: Vec<&Literal> = self.literals.iter().collect();
        lits.sort_by_cached_key(|l| (blind(l), l.to_string()));
        let mut order = Vec::new();
        for l in &lits {
            for t in &l.atom.args {
                t.vars_in_order(&mut order);
            }
        }
        for k in &self.constraints {
            k.lhs.vars_in_order(&mut order);
            k.rhs.vars_in_order(&mut order);
        }
        let s = Substitution::from_pairs(
            order
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), Term::var(&format!("#{i}"), v.sort.clone()))),
        );
        let lits: Vec<String> = lits
            .iter()
            .map(|l| {
                Literal {
                    positive: l.positive,
                    atom: s.apply_atom(&l.atom),
                }
                .to_string()
            })
            .collect();
        let mut ks: Vec<String> = self
            .constraints
            .iter()
            .map(|k| k.apply(&s).to_string())
            .collect();
        ks.sort();
        format!("{} / {}", lits.join(", "), ks.join(", "))
    }
}

impl fmt::Display for ConstrainedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("[]");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemRecord {
    pub symbol: Symbol,
    /// The discharged existential, printed.
    pub source: String,
    pub arg_sorts: Vec<Sort>,
    pub result_sort: Sort,
}

/// Negation normal form; `<=>` is expanded into two implications first.
pub fn nnf(p: &Prop) -> Prop {
    nnf_pol(p, true)
}

fn nnf_pol(p: &Prop, positive: bool) -> Prop {
    match p {
        Prop::Atom(_) => {
            if positive {
                p.clone()
            } else {
                Prop::not(p.clone())
            }
        }
        Prop::Bot => {
            if positive {
                Prop::Bot
            } else {
                Prop::Top
            }
        }
        Prop::Top => {
            if positive {
                Prop::Top
            } else {
                Prop::Bot
            }
        }
        Prop::Not(q) => nnf_pol(q, !positive),
        Prop::And(a, b) => {
            let (a, b) = (nnf_pol(a, positive), nnf_pol(b, positive));
            if positive {
                Prop::and(a, b)
            } else {
                Prop::or(a, b)
            }
        }
        Prop::Or(a, b) => {
            let (a, b) = (nnf_pol(a, positive), nnf_pol(b, positive));
            if positive {
                Prop::or(a, b)
            } else {
                Prop::and(a, b)
            }
        }
        Prop::Imp(a, b) => nnf_pol(&Prop::or(Prop::not((**a).clone()), (**b).clone()), positive),
        Prop::Iff(a, b) => {
            let both = Prop::and(
                Prop::imp((**a).clone(), (**b).clone()),
                Prop::imp((**b).clone(), (**a).clone()),
            );
            nnf_pol(&both, positive)
        }
        Prop::Forall(v, q) => {
            let q = nnf_pol(q, positive);
            if positive {
                Prop::forall(v.clone(), q)
            } else {
                Prop::exists(v.clone(), q)
            }
        }
        Prop::Exists(v, q) => {
            let q = nnf_pol(q, positive);
            if positive {
                Prop::exists(v.clone(), q)
            } else {
                Prop::forall(v.clone(), q)
            }
        }
    }
}

/// Give every binder a name distinct from all other binders and from `used`.
fn rectify(p: &Prop, used: &mut BTreeSet<Name>) -> Prop {
    match p {
        Prop::Forall(v, q) | Prop::Exists(v, q) => {
            let stem = var_stem(&v.name).to_string();
            let name: Name = if used.contains(&v.name) {
                (1..)
                    .map(|k| format!("{stem}_{k}"))
                    .find(|n| !used.contains(n.as_str()))
                    .unwrap()
                    .into()
            } else {
                v.name.clone()
            };
            used.insert(name.clone());
            let nv = Var {
                name,
                sort: v.sort.clone(),
            };
            let body = if nv.name != v.name {
                Substitution::singleton(v.clone(), Term::Var(nv.clone())).apply_prop(q)
            } else {
                (**q).clone()
            };
            let body = rectify(&body, used);
            if matches!(p, Prop::Forall(..)) {
                Prop::forall(nv, body)
            } else {
                Prop::exists(nv, body)
            }
        }
        Prop::Not(q) => Prop::not(rectify(q, used)),
        Prop::And(a, b) => {
            let a = rectify(a, used);
            Prop::and(a, rectify(b, used))
        }
        Prop::Or(a, b) => {
            let a = rectify(a, used);
            Prop::or(a, rectify(b, used))
        }
        Prop::Imp(a, b) => {
            let a = rectify(a, used);
            Prop::imp(a, rectify(b, used))
        }
        Prop::Iff(a, b) => {
            let a = rectify(a, used);
            Prop::iff(a, rectify(b, used))
        }
        _ => p.clone(),
    }
}

/// Replace existentials of an NNF proposition by skolem terms, outside-in.
/// `governing` are the implicitly universal free variables in scope.
pub fn skolemize(p: &Prop, governing: &[Var], sig: &mut Signature) -> (Prop, Vec<SkolemRecord>) {
    let mut used: BTreeSet<Name> = governing
        .iter()
        .chain(p.free_vars().iter())
        .map(|v| v.name.clone())
        .collect();
    let p = rectify(p, &mut used);
    let mut records = Vec::new();
    let mut scope = governing.to_vec();
    let out = skolem_rec(&p, &mut scope, sig, &mut records);
    (out, records)
}

fn skolem_rec(
    p: &Prop,
    scope: &mut Vec<Var>,
    sig: &mut Signature,
    records: &mut Vec<SkolemRecord>,
) -> Prop {
    match p {
        Prop::Forall(v, q) => {
            scope.push(v.clone());
            let q = skolem_rec(q, scope, sig, records);
            scope.pop();
            Prop::forall(v.clone(), q)
        }
        Prop::Exists(v, q) => {
            let fv = p.free_vars();
            let args: Vec<Var> = scope.iter().filter(|u| fv.contains(u)).cloned().collect();
            let name = sig.fresh_symbol_name(var_stem(&v.name));
            let arg_sorts: Vec<Sort> = args.iter().map(|u| u.sort.clone()).collect();
            let kind = if args.is_empty() {
                SymbolKind::Individual(v.sort.clone())
            } else {
                SymbolKind::Function {
                    args: arg_sorts.clone(),
                    result: v.sort.clone(),
                }
            };
            let source = p.to_string();
            let symbol = Symbol {
                name: name.as_str().into(),
                kind: kind.clone(),
                origin: Origin::Skolem {
                    source: source.clone(),
                },
            };
            sig.declare(&name, kind, symbol.origin.clone())
                .expect("fresh skolem name");
            records.push(SkolemRecord {
                symbol,
                source,
                arg_sorts,
                result_sort: v.sort.clone(),
            });
            let term = Term::app(&name, args.into_iter().map(Term::Var).collect());
            let body = Substitution::singleton(v.clone(), term).apply_prop(q);
            skolem_rec(&body, scope, sig, records)
        }
        Prop::Not(q) => Prop::not(skolem_rec(q, scope, sig, records)),
        Prop::And(a, b) => {
            let a = skolem_rec(a, scope, sig, records);
            Prop::and(a, skolem_rec(b, scope, sig, records))
        }
        Prop::Or(a, b) => {
            let a = skolem_rec(a, scope, sig, records);
            Prop::or(a, skolem_rec(b, scope, sig, records))
        }
        _ => p.clone(),
    }
}

/// Clause-variable name for a bound variable: capitalized stem, made unique.
fn clause_var_name(v: &Var, used: &mut BTreeSet<Name>) -> Name {
    let stem = var_stem(&v.name);
    let mut chars = stem.chars();
    let base: String = match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => "X".into(),
    };
    let name: Name = if used.contains(base.as_str()) {
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|n| !used.contains(n.as_str()))
            .unwrap()
            .into()
    } else {
        base.into()
    };
    used.insert(name.clone());
    name
}

/// Strip universal quantifiers from a skolemized NNF proposition.
fn drop_universals(p: &Prop, used: &mut BTreeSet<Name>) -> Prop {
    match p {
        Prop::Forall(v, q) => {
            let nv = Var {
                name: clause_var_name(v, used),
                sort: v.sort.clone(),
            };
            let q = Substitution::singleton(v.clone(), Term::Var(nv)).apply_prop(q);
            drop_universals(&q, used)
        }
        Prop::And(a, b) => {
            let a = drop_universals(a, used);
            Prop::and(a, drop_universals(b, used))
        }
        Prop::Or(a, b) => {
            let a = drop_universals(a, used);
            Prop::or(a, drop_universals(b, used))
        }
        _ => p.clone(),
    }
}

/// Conjunctive normal form of a quantifier-free NNF proposition by distribution.
pub fn cnf(p: &Prop) -> Vec<Vec<Literal>> {
    let mut out = match p {
        Prop::Top => vec![],
        Prop::Bot => vec![vec![]],
        Prop::Atom(a) => vec![vec![Literal::pos(a.clone())]],
        Prop::Not(q) => match &**q {
            Prop::Atom(a) => vec![vec![Literal::neg(a.clone())]],
            Prop::Top => vec![vec![]],
            Prop::Bot => vec![],
            other => cnf(&nnf(&Prop::not(other.clone()))),
        },
        Prop::And(a, b) => {
            let mut v = cnf(a);
            v.extend(cnf(b));
            v
        }
        Prop::Or(a, b) => {
            let (ca, cb) = (cnf(a), cnf(b));
            let mut v = Vec::with_capacity(ca.len() * cb.len());
            for x in &ca {
                for y in &cb {
                    let mut c = x.clone();
                    for l in y {
                        if !c.contains(l) {
                            c.push(l.clone());
                        }
                    }
                    v.push(c);
                }
            }
            v
        }
        other => cnf(&nnf(other)),
    };
    let mut seen = BTreeSet::new();
    out.retain(|c| {
        let mut key = c.clone();
        key.sort();
        seen.insert(key)
    });
    out
}

/// Result of putting a proposition in clausal form.
#[derive(Clone, Debug)]
pub struct ClausalForm {
    pub clauses: Vec<ConstrainedClause>,
    pub skolems: Vec<SkolemRecord>,
    /// Normalization ran out of fuel; the clauses come from the partial reduct.
    pub unnormalized: bool,
}

/// normalize, nnf, skolemize, drop universals, distribute.
fn clausify(
    p: &Prop,
    governing: &[Var],
    rs: &RewriteSystem,
    fuel: usize,
    sig: &mut Signature,
) -> (Vec<Vec<Literal>>, Vec<SkolemRecord>, bool) {
    let (p, unnormalized) = match normalize(p, rs, fuel) {
        NormalizeOutcome::Normal { value, .. } => (value, false),
        NormalizeOutcome::FuelExhausted { value, .. } => (value, true),
    };
    let n = nnf(&p);
    let (s, records) = skolemize(&n, governing, sig);
    let mut used: BTreeSet<Name> = governing.iter().map(|v| v.name.clone()).collect();
    let m = drop_universals(&s, &mut used);
    (cnf(&m), records, unnormalized)
}

/// Clausal form of a closed proposition. Free variables, if any, are read as universal.
pub fn clausal_form(p: &Prop, rs: &RewriteSystem, fuel: usize, sig: &mut Signature) -> ClausalForm {
    let governing: Vec<Var> = p.free_vars().into_iter().collect();
    let (sets, skolems, unnormalized) = clausify(p, &governing, rs, fuel, sig);
    let clauses = sets
        .into_iter()
        .map(|lits| {
            let mut c = ConstrainedClause::new(lits, vec![]);
            c.unnormalized = unnormalized;
            c
        })
        .collect();
    ClausalForm {
        clauses,
        skolems,
        unnormalized,
    }
}

/// Replace literal `index` of `c` by `replacement` (negated when the literal is
/// negative), add `extra` constraints and put the result in clausal form again.
/// Every resulting clause carries all of `c`'s constraints.
pub fn reclausify(
    c: &ConstrainedClause,
    index: usize,
    replacement: &Prop,
    extra: &[Constraint],
    rs: &RewriteSystem,
    fuel: usize,
    sig: &mut Signature,
) -> (Vec<ConstrainedClause>, Vec<SkolemRecord>) {
    let mut parts = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        if i == index {
            parts.push(if l.positive {
                replacement.clone()
            } else {
                Prop::not(replacement.clone())
            });
        } else {
            parts.push(l.to_prop());
        }
    }
    let mut constraints = c.constraints.clone();
    for k in extra {
        if !constraints.contains(k) {
            constraints.push(k.clone());
        }
    }
    let (clauses, skolems, unnormalized) =
        reclausify_prop(&Prop::disjunction(parts), &constraints, rs, fuel, sig);
    let clauses = clauses
        .into_iter()
        .map(|mut k| {
            k.unnormalized |= c.unnormalized || unnormalized;
            k
        })
        .collect();
    (clauses, skolems)
}

/// Clausal form of an open disjunction whose free variables are clause variables,
/// each result carrying `constraints`.
pub fn reclausify_prop(
    p: &Prop,
    constraints: &[Constraint],
    rs: &RewriteSystem,
    fuel: usize,
    sig: &mut Signature,
) -> (Vec<ConstrainedClause>, Vec<SkolemRecord>, bool) {
    let mut governing: BTreeSet<Var> = p.free_vars();
    for k in constraints {
        k.collect_vars(&mut governing);
    }
    let governing: Vec<Var> = governing.into_iter().collect();
    let (sets, skolems, unnormalized) = clausify(p, &governing, rs, fuel, sig);
    let clauses = sets
        .into_iter()
        .map(|lits| ConstrainedClause::new(lits, constraints.to_vec()))
        .collect();
    (clauses, skolems, unnormalized)
}

/// Map of skolem symbol names to their records.
pub fn skolem_index(records: &[SkolemRecord]) -> BTreeMap<Name, &SkolemRecord> {
    records.iter().map(|r| (r.symbol.name.clone(), r)).collect()
}
