use std::collections::BTreeSet;

use super::{Name, Term, Var};

/// Predicate symbol applied to terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn prop(pred: &str) -> Atom {
        Atom::new(pred, Vec::new())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.args.iter().for_each(|a| a.collect_vars(out))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// The atom viewed as a term, so term machinery (matching, unification) applies.
    pub fn to_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    pub fn from_term(t: Term) -> Option<Atom> {
        match t {
            Term::App(pred, args) => Some(Atom { pred, args }),
            Term::Var(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prop {
    Atom(Atom),
    Bot,
    Top,
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Imp(Box<Prop>, Box<Prop>),
    Iff(Box<Prop>, Box<Prop>),
    Forall(Var, Box<Prop>),
    Exists(Var, Box<Prop>),
}

impl Prop {
    pub fn atom(pred: &str, args: Vec<Term>) -> Prop {
        Prop::Atom(Atom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Prop) -> Prop {
        Prop::Not(Box::new(p))
    }

    pub fn and(p: Prop, q: Prop) -> Prop {
        Prop::And(Box::new(p), Box::new(q))
    }

    pub fn or(p: Prop, q: Prop) -> Prop {
        Prop::Or(Box::new(p), Box::new(q))
    }

    pub fn imp(p: Prop, q: Prop) -> Prop {
        Prop::Imp(Box::new(p), Box::new(q))
    }

    pub fn iff(p: Prop, q: Prop) -> Prop {
        Prop::Iff(Box::new(p), Box::new(q))
    }

    pub fn forall(v: Var, p: Prop) -> Prop {
        Prop::Forall(v, Box::new(p))
    }

    pub fn exists(v: Var, p: Prop) -> Prop {
        Prop::Exists(v, Box::new(p))
    }

    /// Disjunction of a list, `⊥` when empty.
    pub fn disjunction(props: impl IntoIterator<Item = Prop>) -> Prop {
        let mut items: Vec<Prop> = props.into_iter().collect();
        match items.pop() {
            None => Prop::Bot,
            Some(last) => items
                .into_iter()
                .rev()
                .fold(last, |acc, p| Prop::or(p, acc)),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Prop::Atom(_))
    }

    pub fn children(&self) -> Vec<&Prop> {
        match self {
            Prop::Atom(_) | Prop::Bot | Prop::Top => vec![],
            Prop::Not(p) | Prop::Forall(_, p) | Prop::Exists(_, p) => vec![p],
            Prop::And(p, q) | Prop::Or(p, q) | Prop::Imp(p, q) | Prop::Iff(p, q) => vec![p, q],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Prop::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Prop::Forall(v, p) | Prop::Exists(v, p) => {
                bound.push(v.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out)
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_var_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Prop::Atom(a) => {
                let mut vs = BTreeSet::new();
                a.collect_vars(&mut vs);
                out.extend(vs.into_iter().map(|v| v.name));
            }
            Prop::Forall(v, p) | Prop::Exists(v, p) => {
                out.insert(v.name.clone());
                p.all_var_names(out);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.all_var_names(out)),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        if let Prop::Atom(a) = self {
            out.push(a);
        }
        for c in self.children() {
            c.collect_atoms(out)
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Prop::Atom(a) => 1 + a.args.iter().map(Term::size).sum::<usize>(),
            _ => 1 + self.children().into_iter().map(Prop::size).sum::<usize>(),
        }
    }

    /// Rename bound variables to `_0, _1, ...` by binding depth so that
    /// alpha-equivalent propositions become structurally equal.
    pub fn canonical(&self) -> Prop {
        self.canonical_at(0, &mut Vec::new())
    }

    fn canonical_at(&self, depth: usize, env: &mut Vec<(Var, Var)>) -> Prop {
        match self {
            Prop::Atom(a) => Prop::Atom(Atom {
                pred: a.pred.clone(),
                args: a
                    .args
                    .iter()
                    .map(|t| {
                        t.map_vars(
                            &mut |v| match env.iter().rev().find(|(from, _)| from == v) {
                                Some((_, to)) => Term::Var(to.clone()),
                                None => Term::Var(v.clone()),
                            },
                        )
                    })
                    .collect(),
            }),
            Prop::Bot => Prop::Bot,
            Prop::Top => Prop::Top,
            Prop::Not(p) => Prop::not(p.canonical_at(depth, env)),
            Prop::And(p, q) => Prop::and(p.canonical_at(depth, env), q.canonical_at(depth, env)),
            Prop::Or(p, q) => Prop::or(p.canonical_at(depth, env), q.canonical_at(depth, env)),
            Prop::Imp(p, q) => Prop::imp(p.canonical_at(depth, env), q.canonical_at(depth, env)),
            Prop::Iff(p, q) => Prop::iff(p.canonical_at(depth, env), q.canonical_at(depth, env)),
            Prop::Forall(v, p) | Prop::Exists(v, p) => {
                let fresh = Var {
                    name: format!("_{depth}").into(),
                    sort: v.sort.clone(),
                };
                env.push((v.clone(), fresh.clone()));
                let body = p.canonical_at(depth + 1, env);
                env.pop();
                if matches!(self, Prop::Forall(..)) {
                    Prop::forall(fresh, body)
                } else {
                    Prop::exists(fresh, body)
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Prop) -> bool {
        self.canonical() == other.canonical()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Sort;

    fn v(n: &str) -> Var {
        Var::new(n, Sort::base("i"))
    }

    #[test]
    fn free_vars_skip_bound() {
        let p = Prop::forall(
            v("x"),
            Prop::atom("p", vec![Term::Var(v("x")), Term::Var(v("y"))]),
        );
        let fv: Vec<_> = p
            .free_vars()
            .into_iter()
            .map(|v| v.name.to_string())
            .collect();
        assert_eq!(fv, vec!["y"]);
    }

    #[test]
    fn alpha_equivalence() {
        let p = Prop::forall(v("x"), Prop::atom("p", vec![Term::Var(v("x"))]));
        let q = Prop::forall(v("z"), Prop::atom("p", vec![Term::Var(v("z"))]));
        let r = Prop::forall(v("z"), Prop::atom("p", vec![Term::Var(v("x"))]));
        assert!(p.alpha_eq(&q));
        assert!(!p.alpha_eq(&r));
    }
}
