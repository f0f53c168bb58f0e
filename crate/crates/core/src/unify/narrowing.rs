use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::clausal::Constraint;
use crate::kernel::{replace_term_at, term_at, term_positions, Substitution, Term, Var};
use crate::rewrite::{normalize, NormalizeOutcome, RewriteRule, RewriteSystem, SideCondition};

use super::syntactic::unify_all;

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_NODE_BUDGET: usize = 20_000;
const NARROW_FUEL: usize = 2_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EUnifyOutcome {
    Solutions(Vec<Substitution>),
    Unsatisfiable,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NarrowingConfig {
    pub depth: usize,
    pub node_budget: usize,
    pub fuel: usize,
}

impl Default for NarrowingConfig {
    fn default() -> Self {
        NarrowingConfig {
            depth: DEFAULT_DEPTH,
            node_budget: DEFAULT_NODE_BUDGET,
            fuel: NARROW_FUEL,
        }
    }
}

/// Whether two terms can never be E-equal: rigid heads that differ, checked
/// down through rigid arguments.
pub fn cheap_clash(l: &Term, r: &Term, rs: &RewriteSystem) -> bool {
    let (Some(f), Some(g)) = (rs.rigid_head(l), rs.rigid_head(r)) else {
        return false;
    };
    if f != g {
        return true;
    }
    let (lh, largs) = l.spine();
    let (rh, rargs) = r.spine();
    if largs.len() != rargs.len() || lh.args().len() != rh.args().len() {
        return true;
    }
    lh.args()
        .iter()
        .zip(rh.args())
        .any(|(a, b)| cheap_clash(a, b, rs))
        || largs.iter().zip(&rargs).any(|(a, b)| cheap_clash(a, b, rs))
}

fn is_flex(t: &Term) -> bool {
    t.spine().0.is_var()
}

enum Simplified {
    Clash,
    /// Remaining equations (none are trivially solvable) and accumulated substitution.
    Open(Vec<(Term, Term)>, Substitution),
    /// Normalization ran out of fuel.
    Stuck,
}

struct Node {
    eqs: Vec<(Term, Term)>,
    sigma: Substitution,
    depth: usize,
}

fn normalize_term(t: &Term, rs: &RewriteSystem, fuel: usize) -> Option<Term> {
    match normalize(t, rs, fuel) {
        NormalizeOutcome::Normal { value, .. } => Some(value),
        NormalizeOutcome::FuelExhausted { .. } => None,
    }
}

/// Normalize, drop trivial equations, decompose rigid pairs, eliminate variables.
fn simplify(
    mut eqs: Vec<(Term, Term)>,
    mut sigma: Substitution,
    rs: &RewriteSystem,
    fuel: usize,
) -> Simplified {
    'restart: loop {
        let mut next = Vec::with_capacity(eqs.len());
        let mut work: Vec<(Term, Term)> = Vec::with_capacity(eqs.len());
        for (l, r) in &eqs {
            let (Some(l), Some(r)) = (normalize_term(l, rs, fuel), normalize_term(r, rs, fuel))
            else {
                return Simplified::Stuck;
            };
            work.push((l, r));
        }
        work.reverse();
        while let Some((l, r)) = work.pop() {
            if l == r {
                continue;
            }
            match (&l, &r) {
                (Term::Var(v), t) | (t, Term::Var(v)) if !t.occurs(v) => {
                    let single = Substitution::singleton(v.clone(), t.clone());
                    sigma = sigma.then(&single);
                    eqs = next
                        .iter()
                        .chain(work.iter().rev())
                        .map(|(a, b): &(Term, Term)| (single.apply_term(a), single.apply_term(b)))
                        .collect();
                    continue 'restart;
                }
                (Term::Var(_), _) | (_, Term::Var(_)) if !rs.has_e_rules() => {
                    return Simplified::Clash
                }
                _ => {}
            }
            match (rs.rigid_head(&l), rs.rigid_head(&r)) {
                (Some(f), Some(g)) => {
                    let (lh, largs) = l.spine();
                    let (rh, rargs) = r.spine();
                    if f != g || largs.len() != rargs.len() || lh.args().len() != rh.args().len() {
                        return Simplified::Clash;
                    }
                    let mut parts: Vec<(Term, Term)> = lh
                        .args()
                        .iter()
                        .cloned()
                        .zip(rh.args().iter().cloned())
                        .chain(largs.into_iter().cloned().zip(rargs.into_iter().cloned()))
                        .collect();
                    parts.reverse();
                    work.extend(parts);
                }
                _ => next.push((l, r)),
            }
        }
        return Simplified::Open(next, sigma);
    }
}

struct Fresh {
    counter: usize,
}

impl Fresh {
    fn rename(&mut self, rule: &RewriteRule) -> RewriteRule {
        self.counter += 1;
        let k = self.counter;
        rule.renamed(&mut |v: &Var| Var {
            name: format!("{}'{k}", v.name).into(),
            sort: v.sort.clone(),
        })
    }
}

/// Breadth-first narrowing with the E-rules of `rs`, interleaved with syntactic unification.
pub fn e_unify_narrowing(cs: &[Constraint], rs: &RewriteSystem, depth: usize) -> EUnifyOutcome {
    e_unify_with(
        cs,
        rs,
        &NarrowingConfig {
            depth,
            ..NarrowingConfig::default()
        },
    )
}

pub fn e_unify_with(cs: &[Constraint], rs: &RewriteSystem, cfg: &NarrowingConfig) -> EUnifyOutcome {
    e_unify_detailed(cs, rs, cfg).0
}

/// Also returns the narrowing depth at which the first solution was found.
pub fn e_unify_detailed(
    cs: &[Constraint],
    rs: &RewriteSystem,
    cfg: &NarrowingConfig,
) -> (EUnifyOutcome, Option<usize>) {
    let rs = rs.e_system();
    let mut goal_vars = BTreeSet::new();
    for k in cs {
        k.collect_vars(&mut goal_vars);
    }
    let rules: Vec<&RewriteRule> = rs
        .e_rules()
        .filter(|r| r.side == SideCondition::None)
        .collect();
    let mut fresh = Fresh { counter: 0 };
    let mut truncated = false;
    let mut heap = BinaryHeap::new();
    let mut nodes = Vec::new();
    let mut seq = 0usize;
    nodes.push(Node {
        eqs: cs.iter().map(|k| (k.lhs.clone(), k.rhs.clone())).collect(),
        sigma: Substitution::new(),
        depth: 0,
    });
    heap.push(Reverse((0usize, seq, 0usize)));
    let mut expanded = 0usize;
    while let Some(Reverse((_, _, idx))) = heap.pop() {
        expanded += 1;
        if expanded > cfg.node_budget || nodes.len() > cfg.node_budget {
            return (EUnifyOutcome::Unknown, None);
        }
        let Node { eqs, sigma, depth } = std::mem::replace(
            &mut nodes[idx],
            Node {
                eqs: Vec::new(),
                sigma: Substitution::new(),
                depth: 0,
            },
        );
        let (eqs, sigma) = match simplify(eqs, sigma, &rs, cfg.fuel) {
            Simplified::Clash => continue,
            Simplified::Stuck => {
                truncated = true;
                continue;
            }
            Simplified::Open(eqs, sigma) => (eqs, sigma),
        };
        if eqs.is_empty() {
            return (
                EUnifyOutcome::Solutions(vec![sigma.restrict(&goal_vars)]),
                Some(depth),
            );
        }
        let Some(sel) = eqs.iter().position(|(l, r)| !(is_flex(l) && is_flex(r))) else {
            truncated = true;
            continue;
        };
        let mut push = |node: Node, heap: &mut BinaryHeap<Reverse<(usize, usize, usize)>>| {
            seq += 1;
            heap.push(Reverse((node.depth, seq, nodes.len())));
            nodes.push(node);
        };
        let (l, r) = &eqs[sel];
        if let Some(theta) = unify_all(vec![(l.clone(), r.clone())]) {
            let rest: Vec<(Term, Term)> = eqs
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != sel)
                .map(|(_, (a, b))| (theta.apply_term(a), theta.apply_term(b)))
                .collect();
            push(
                Node {
                    eqs: rest,
                    sigma: sigma.then(&theta),
                    depth,
                },
                &mut heap,
            );
        }
        if depth >= cfg.depth {
            truncated = true;
            continue;
        }
        for (side_idx, side) in [l, r].into_iter().enumerate() {
            for pos in term_positions(side) {
                let sub = term_at(side, &pos.0).expect("valid position");
                if sub.is_var() {
                    continue;
                }
                for rule in &rules {
                    let renamed = fresh.rename(rule);
                    let crate::rewrite::RuleBody::Term { lhs, rhs } = &renamed.body else {
                        continue;
                    };
                    let Some(theta) = unify_all(vec![(sub.clone(), lhs.clone())]) else {
                        continue;
                    };
                    let replaced =
                        replace_term_at(side, &pos.0, rhs.clone()).expect("valid position");
                    let new_eqs: Vec<(Term, Term)> = eqs
                        .iter()
                        .enumerate()
                        .map(|(i, (a, b))| {
                            if i == sel {
                                if side_idx == 0 {
                                    (theta.apply_term(&replaced), theta.apply_term(b))
                                } else {
                                    (theta.apply_term(a), theta.apply_term(&replaced))
                                }
                            } else {
                                (theta.apply_term(a), theta.apply_term(b))
                            }
                        })
                        .collect();
                    push(
                        Node {
                            eqs: new_eqs,
                            sigma: sigma.then(&theta),
                            depth: depth + 1,
                        },
                        &mut heap,
                    );
                }
            }
        }
    }
    if truncated {
        (EUnifyOutcome::Unknown, None)
    } else {
        (EUnifyOutcome::Unsatisfiable, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationVerdict {
    /// Both sides reach this common normal form.
    Joinable(Term),
    Distinct(Term, Term),
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolutionError {
    #[error("normalization ran out of fuel")]
    FuelExhausted,
}

/// Per-equation verdicts for `s` against `cs` modulo the E-rules of `rs`.
pub fn check_equations(
    s: &Substitution,
    cs: &[Constraint],
    rs: &RewriteSystem,
    fuel: usize,
) -> Vec<EquationVerdict> {
    let e = rs.e_system();
    cs.iter()
        .map(|k| {
            let l = normalize_term(&s.apply_term(&k.lhs), &e, fuel);
            let r = normalize_term(&s.apply_term(&k.rhs), &e, fuel);
            match (l, r) {
                (Some(l), Some(r)) if l == r => EquationVerdict::Joinable(l),
                (Some(l), Some(r)) => EquationVerdict::Distinct(l, r),
                _ => EquationVerdict::FuelExhausted,
            }
        })
        .collect()
}

pub fn check_solution(
    s: &Substitution,
    cs: &[Constraint],
    rs: &RewriteSystem,
    fuel: usize,
) -> Result<bool, SolutionError> {
    let verdicts = check_equations(s, cs, rs, fuel);
    if verdicts.contains(&EquationVerdict::FuelExhausted) {
        return Err(SolutionError::FuelExhausted);
    }
    Ok(verdicts
        .iter()
        .all(|v| matches!(v, EquationVerdict::Joinable(_))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{NumeralMode, Signature};
    use crate::syntax::{parse_term, UnknownIdents};

    fn arith() -> (RewriteSystem, Signature) {
        let mut sig = Signature::new();
        sig.numerals = NumeralMode::Peano {
            succ: "S".into(),
            zero: "0".into(),
        };
        let t = |s: &str| parse_term(s, &sig, UnknownIdents::Variables).unwrap();
        let rs = RewriteSystem::new(vec![
            RewriteRule::e("plus0", t("0 + y"), t("y")).unwrap(),
            RewriteRule::e("plusS", t("S(x) + y"), t("S(x + y)")).unwrap(),
            RewriteRule::e("times0", t("0 * y"), t("0")).unwrap(),
            RewriteRule::e("timesS", t("S(x) * y"), t("x * y + y")).unwrap(),
        ]);
        (rs, sig)
    }

    #[test]
    fn distinct_constants_unsatisfiable() {
        let k = Constraint::new(Term::constant("a"), Term::constant("b"));
        assert_eq!(
            e_unify_narrowing(&[k], &RewriteSystem::default(), 8),
            EUnifyOutcome::Unsatisfiable
        );
    }

    #[test]
    fn two_times_x_is_four() {
        let (rs, sig) = arith();
        let k = Constraint::new(
            parse_term("2 * x", &sig, UnknownIdents::Variables).unwrap(),
            parse_term("4", &sig, UnknownIdents::Variables).unwrap(),
        );
        let (out, depth) =
            e_unify_detailed(std::slice::from_ref(&k), &rs, &NarrowingConfig::default());
        let EUnifyOutcome::Solutions(sols) = out else {
            panic!("{out:?}")
        };
        assert!(depth.unwrap() <= 3);
        let x = k.lhs.vars().into_iter().next().unwrap();
        assert_eq!(sols[0].apply_term(&Term::Var(x)).to_string(), "S(S(0))");
        assert_eq!(check_solution(&sols[0], &[k], &rs, 100), Ok(true));
    }

    #[test]
    fn cheap_clash_respects_reducible_heads() {
        let (rs, sig) = arith();
        let t = |s: &str| parse_term(s, &sig, UnknownIdents::Variables).unwrap();
        assert!(cheap_clash(&t("S(x)"), &t("0"), &rs));
        assert!(!cheap_clash(&t("x + y"), &t("0"), &rs));
        assert!(cheap_clash(&t("S(0)"), &t("S(S(y))"), &rs));
    }

    #[test]
    fn check_solution_rejects_wrong_binding() {
        let x = Var::new("x", crate::kernel::Sort::base("i"));
        let k = Constraint::new(Term::Var(x.clone()), Term::constant("b"));
        let s = Substitution::singleton(x, Term::constant("a"));
        assert_eq!(
            check_solution(&s, &[k], &RewriteSystem::default(), 10),
            Ok(false)
        );
        assert_eq!(
            check_solution(&Substitution::new(), &[], &RewriteSystem::default(), 10),
            Ok(true)
        );
    }
}
