use crate::clausal::{reclausify, ConstrainedClause, Constraint, Literal};
use crate::kernel::{fresh_renaming, Signature};
use crate::rewrite::{RewriteRule, RewriteSystem, RuleBody};
use crate::unify::{cheap_clash, unify_atoms};

/// Binary resolution: one literal from each clause, opposite polarity, same predicate.
/// The atom equation becomes constraints. `c1` and `c2` must be renamed apart.
pub fn extended_resolution(
    c1: &ConstrainedClause,
    c2: &ConstrainedClause,
) -> Vec<ConstrainedClause> {
    extended_resolution_with(c1, c2, LiteralSelection::All)
}

/// Which literals of a clause may be resolved upon.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LiteralSelection {
    All,
    /// A clause with negative literals resolves only on its largest negative
    /// literal (first one on ties); other clauses on any literal.
    #[default]
    MaxNegative,
}

impl LiteralSelection {
    pub fn eligible(self, c: &ConstrainedClause) -> Vec<bool> {
        let n = c.literals.len();
        if self == LiteralSelection::All {
            return vec![true; n];
        }
        let size = |l: &Literal| l.atom.args.iter().map(|t| t.size()).sum::<usize>();
        let mut best: Option<(usize, usize)> = None;
        for (i, l) in c.literals.iter().enumerate() {
            if !l.positive && best.is_none_or(|(_, s)| size(l) > s) {
                best = Some((i, size(l)));
            }
        }
        match best {
            Some((i, _)) => (0..n).map(|k| k == i).collect(),
            None => vec![true; n],
        }
    }
}

pub fn extended_resolution_with(
    c1: &ConstrainedClause,
    c2: &ConstrainedClause,
    selection: LiteralSelection,
) -> Vec<ConstrainedClause> {
    let (e1, e2) = (selection.eligible(c1), selection.eligible(c2));
    let mut out = Vec::new();
    for (i, l1) in c1.literals.iter().enumerate() {
        for (j, l2) in c2.literals.iter().enumerate() {
            if l1.positive == l2.positive || !e1[i] || !e2[j] {
                continue;
            }
            let Some(eqs) = Constraint::between_atoms(&l1.atom, &l2.atom) else {
                continue;
            };
            let literals = c1
                .literals
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, l)| l.clone())
                .chain(
                    c2.literals
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, l)| l.clone()),
                )
                .collect();
            let constraints = c1
                .constraints
                .iter()
                .chain(&c2.constraints)
                .cloned()
                .chain(eqs)
                .collect();
            let mut r = ConstrainedClause::new(literals, constraints);
            r.unnormalized = c1.unnormalized || c2.unnormalized;
            out.push(r);
        }
    }
    out
}

/// Merge two literals of equal polarity and predicate under an atom equation.
pub fn factoring(c: &ConstrainedClause) -> Vec<ConstrainedClause> {
    let mut out = Vec::new();
    for i in 0..c.literals.len() {
        for j in i + 1..c.literals.len() {
            let (a, b) = (&c.literals[i], &c.literals[j]);
            if a.positive != b.positive {
                continue;
            }
            let Some(eqs) = Constraint::between_atoms(&a.atom, &b.atom) else {
                continue;
            };
            let literals: Vec<Literal> = c
                .literals
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, l)| l.clone())
                .collect();
            let mut r = ConstrainedClause::new(
                literals,
                c.constraints.iter().cloned().chain(eqs).collect(),
            );
            r.unnormalized = c.unnormalized;
            out.push(r);
        }
    }
    out
}

/// Which literals extended narrowing may rewrite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NarrowingFilter {
    /// Same predicate and no rigid clash between arguments (frozen constraints).
    HeadCompatible,
    /// The atom unifies syntactically with the rule's left-hand side.
    Unifiable,
    /// Unifiable, and the unifier maps the literal's variables only to
    /// variables or constants.
    Shallow,
}

/// Rewrite one literal of `c` with the R-rule `rule`, recording the atom equation
/// as constraints, then put the result in clausal form again.
pub fn extended_narrowing(
    c: &ConstrainedClause,
    rule: &RewriteRule,
    rs: &RewriteSystem,
    filter: NarrowingFilter,
    fuel: usize,
    sig: &mut Signature,
) -> Vec<ConstrainedClause> {
    let mut out = Vec::new();
    let RuleBody::Prop { lhs: rule_lhs, .. } = &rule.body else {
        return out;
    };
    for (i, lit) in c.literals.iter().enumerate() {
        if lit.atom.pred != rule_lhs.pred || lit.atom.args.len() != rule_lhs.args.len() {
            continue;
        }
        let renaming = fresh_renaming(rule_vars(rule).iter(), sig);
        let RuleBody::Prop { lhs, rhs } = &rule.body else {
            unreachable!()
        };
        let lhs = renaming.apply_atom(lhs);
        let eqs = Constraint::between_atoms(&lit.atom, &lhs).expect("same predicate");
        let applicable = match filter {
            NarrowingFilter::HeadCompatible => !eqs.iter().any(|k| cheap_clash(&k.lhs, &k.rhs, rs)),
            NarrowingFilter::Unifiable => unify_atoms(&lit.atom, &lhs).is_some(),
            NarrowingFilter::Shallow => unify_atoms(&lit.atom, &lhs).is_some_and(|th| {
                lit.atom
                    .vars()
                    .iter()
                    .all(|v| th.get(v).is_none_or(|t| t.args().is_empty()))
            }),
        };
        if !applicable {
            continue;
        }
        let rhs = renaming.apply_prop(rhs);
        let (clauses, _) = reclausify(c, i, &rhs, &eqs, rs, fuel, sig);
        out.extend(clauses);
    }
    out
}

fn rule_vars(rule: &RewriteRule) -> Vec<crate::kernel::Var> {
    let mut vs = rule.lhs_vars();
    if let RuleBody::Prop { rhs, .. } = &rule.body {
        vs.extend(rhs.free_vars());
    }
    vs.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Atom, Prop};
    use crate::syntax::{parse_prop, UnknownIdents};

    fn lit(s: &str) -> Literal {
        match parse_prop(s, &Signature::new(), UnknownIdents::Variables).unwrap() {
            Prop::Atom(a) => Literal::pos(a),
            Prop::Not(q) => match *q {
                Prop::Atom(a) => Literal::neg(a),
                _ => panic!(),
            },
            _ => panic!(),
        }
    }

    #[test]
    fn complementary_units() {
        let b = ConstrainedClause::new(vec![Literal::pos(Atom::prop("B"))], vec![]);
        let nb = ConstrainedClause::new(vec![Literal::neg(Atom::prop("B"))], vec![]);
        let out = extended_resolution(&b, &nb);
        assert_eq!(out.len(), 1);
        assert!(out[0].is_empty());
    }

    #[test]
    fn resolution_collects_constraints() {
        let c1 = ConstrainedClause::new(vec![lit("p(X)"), lit("q(X)")], vec![]);
        let c2 = ConstrainedClause::new(vec![lit("~p(a)")], vec![]);
        let out = extended_resolution(&c1, &c2);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to_string(), "q(X)");
        assert_eq!(out[0].constraints[0].to_string(), "X = a");
    }

    #[test]
    fn factoring_merges_same_polarity() {
        let c = ConstrainedClause::new(vec![lit("~eps(P X)"), lit("~eps(R)")], vec![]);
        let out = factoring(&c);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].literals.len(), 1);
        assert_eq!(out[0].constraints.len(), 1);
    }
}
