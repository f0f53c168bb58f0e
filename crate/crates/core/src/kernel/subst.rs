use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Atom, Name, Prop, Term, Var};

/// Finite map from variables to terms.
///
/// Substitutions built by the unifiers are kept idempotent: no domain variable
/// occurs in the range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn singleton(v: Var, t: Term) -> Substitution {
        let mut s = Substitution::new();
        s.bindings.insert(v, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Substitution {
        Substitution {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    /// Raw insertion; callers are responsible for idempotence.
    pub fn insert(&mut self, v: Var, t: Term) {
        self.bindings.insert(v, t);
    }

    pub fn remove(&mut self, v: &Var) -> Option<Term> {
        self.bindings.remove(v)
    }

    /// Add `v := t`, first applying the new binding to existing ranges.
    /// Keeps the substitution idempotent when `v` does not occur in `t`
    /// and `t` has already been instantiated by `self`.
    pub fn bind(&mut self, v: Var, t: Term) {
        let single = Substitution::singleton(v.clone(), t.clone());
        for range in self.bindings.values_mut() {
            *range = single.apply_term(range);
        }
        self.bindings.insert(v, t);
    }

    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.bindings.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        let range = self.range_vars();
        self.bindings.keys().all(|v| !range.contains(v))
    }

    /// `self` followed by `other`: `(self ; other)(x) = other(self(x))`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out: BTreeMap<Var, Term> = self
            .bindings
            .iter()
            .map(|(v, t)| (v.clone(), other.apply_term(t)))
            .collect();
        for (v, t) in &other.bindings {
            out.entry(v.clone()).or_insert_with(|| t.clone());
        }
        out.retain(|v, t| !matches!(t, Term::Var(w) if w == v));
        Substitution { bindings: out }
    }

    /// Keep only bindings for the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| {
            self.bindings
                .get(v)
                .cloned()
                .unwrap_or_else(|| Term::Var(v.clone()))
        })
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    /// Capture-avoiding application: bound variables that would capture a
    /// variable of an inserted term are renamed with primes.
    pub fn apply_prop(&self, p: &Prop) -> Prop {
        if self.is_empty() {
            return p.clone();
        }
        match p {
            Prop::Atom(a) => Prop::Atom(self.apply_atom(a)),
            Prop::Bot => Prop::Bot,
            Prop::Top => Prop::Top,
            Prop::Not(q) => Prop::not(self.apply_prop(q)),
            Prop::And(a, b) => Prop::and(self.apply_prop(a), self.apply_prop(b)),
            Prop::Or(a, b) => Prop::or(self.apply_prop(a), self.apply_prop(b)),
            Prop::Imp(a, b) => Prop::imp(self.apply_prop(a), self.apply_prop(b)),
            Prop::Iff(a, b) => Prop::iff(self.apply_prop(a), self.apply_prop(b)),
            Prop::Forall(v, body) | Prop::Exists(v, body) => {
                let mut inner = self.clone();
                inner.bindings.remove(v);
                let fv = body.free_vars();
                inner.bindings.retain(|x, _| fv.contains(x));
                let captured = inner.bindings.values().any(|t| t.occurs(v));
                let (v2, body2) = if captured {
                    let mut avoid: BTreeSet<Name> = BTreeSet::new();
                    body.all_var_names(&mut avoid);
                    avoid.extend(inner.range_vars().into_iter().map(|x| x.name));
                    avoid.extend(inner.bindings.keys().map(|x| x.name.clone()));
                    let fresh = prime_away(v, &avoid);
                    inner.bindings.insert(v.clone(), Term::Var(fresh.clone()));
                    (fresh, inner.apply_prop(body))
                } else {
                    (v.clone(), inner.apply_prop(body))
                };
                if matches!(p, Prop::Forall(..)) {
                    Prop::forall(v2, body2)
                } else {
                    Prop::exists(v2, body2)
                }
            }
        }
    }
}

fn prime_away(v: &Var, avoid: &BTreeSet<Name>) -> Var {
    let mut name = format!("{}'", v.name);
    while avoid.contains(name.as_str()) {
        name.push('\'');
    }
    Var {
        name: name.into(),
        sort: v.sort.clone(),
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} := {}", v.name, t)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Sort;

    fn i() -> Sort {
        Sort::base("i")
    }

    #[test]
    fn arithmetic_instance() {
        // {x := 2} applied to 2 * x = 4
        let two = Term::constant("2");
        let x = Var::new("x", i());
        let p = Prop::atom(
            "=",
            vec![
                Term::app("*", vec![two.clone(), Term::Var(x.clone())]),
                Term::constant("4"),
            ],
        );
        let s = Substitution::singleton(x, two.clone());
        let expected = Prop::atom(
            "=",
            vec![Term::app("*", vec![two.clone(), two]), Term::constant("4")],
        );
        assert_eq!(s.apply_prop(&p), expected);
        assert_eq!(Substitution::new().apply_prop(&p), p);
    }

    #[test]
    fn capture_is_avoided() {
        let x = Var::new("x", i());
        let y = Var::new("y", i());
        let p = Prop::forall(
            y.clone(),
            Prop::atom("p", vec![Term::Var(x.clone()), Term::Var(y.clone())]),
        );
        let s = Substitution::singleton(x, Term::Var(y.clone()));
        let got = s.apply_prop(&p);
        let y2 = Var::new("y'", i());
        let expected = Prop::forall(
            y2.clone(),
            Prop::atom("p", vec![Term::Var(y), Term::Var(y2)]),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn bind_keeps_idempotence() {
        let x = Var::new("x", i());
        let y = Var::new("y", i());
        let mut s = Substitution::singleton(x.clone(), Term::app("f", vec![Term::Var(y.clone())]));
        s.bind(y, Term::constant("a"));
        assert!(s.is_idempotent());
        assert_eq!(s.get(&x), Some(&Term::app("f", vec![Term::constant("a")])));
    }
}
