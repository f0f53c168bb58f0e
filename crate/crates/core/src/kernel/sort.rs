use std::collections::BTreeMap;
use std::fmt;

use super::Name;

/// A sort of the many-sorted language.
///
/// `Var` only appears in the declared ranks of polymorphic symbol families
/// (`K : 'a -> 'b -> 'a`) and in sorts that inference could not pin down.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Base(Name),
    Arrow(Box<Sort>, Box<Sort>),
    /// `Γ ⊢ Δ` for the explicit-substitution presentation.
    Context(Vec<Sort>, Vec<Sort>),
    Var(Name),
}

impl Sort {
    pub fn base(name: &str) -> Sort {
        Sort::Base(name.into())
    }

    pub fn var(name: &str) -> Sort {
        Sort::Var(name.into())
    }

    pub fn arrow(from: Sort, to: Sort) -> Sort {
        Sort::Arrow(Box::new(from), Box::new(to))
    }

    /// Right-nested arrow `s1 -> s2 -> ... -> result`.
    pub fn arrows(args: impl IntoIterator<Item = Sort>, result: Sort) -> Sort {
        let args: Vec<Sort> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, s| Sort::arrow(s, acc))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Sort::Base(_) => true,
            Sort::Var(_) => false,
            Sort::Arrow(a, b) => a.is_ground() && b.is_ground(),
            Sort::Context(g, d) => g.iter().chain(d).all(Sort::is_ground),
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Sort::Base(_) => false,
            Sort::Var(w) => &**w == v,
            Sort::Arrow(a, b) => a.contains_var(v) || b.contains_var(v),
            Sort::Context(g, d) => g.iter().chain(d).any(|s| s.contains_var(v)),
        }
    }

    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Sort::Base(_) => {}
            Sort::Var(w) => {
                if !out.contains(w) {
                    out.push(w.clone())
                }
            }
            Sort::Arrow(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Sort::Context(g, d) => g.iter().chain(d).for_each(|s| s.vars(out)),
        }
    }

    /// Replace sort variables by their bindings, recursively.
    pub fn resolve(&self, map: &BTreeMap<Name, Sort>) -> Sort {
        match self {
            Sort::Base(_) => self.clone(),
            Sort::Var(v) => match map.get(v) {
                Some(s) => s.resolve(map),
                None => self.clone(),
            },
            Sort::Arrow(a, b) => Sort::arrow(a.resolve(map), b.resolve(map)),
            Sort::Context(g, d) => Sort::Context(
                g.iter().map(|s| s.resolve(map)).collect(),
                d.iter().map(|s| s.resolve(map)).collect(),
            ),
        }
    }
}

/// Unify two sorts under an accumulating binding map. Returns false on clash.
pub fn unify_sorts(a: &Sort, b: &Sort, map: &mut BTreeMap<Name, Sort>) -> bool {
    let a = a.resolve(map);
    let b = b.resolve(map);
    match (&a, &b) {
        _ if a == b => true,
        (Sort::Var(v), other) | (other, Sort::Var(v)) => {
            if other.contains_var(v) {
                return false;
            }
            map.insert(v.clone(), other.clone());
            true
        }
        (Sort::Arrow(a1, a2), Sort::Arrow(b1, b2)) => {
            unify_sorts(a1, b1, map) && unify_sorts(a2, b2, map)
        }
        (Sort::Context(g1, d1), Sort::Context(g2, d2)) => {
            g1.len() == g2.len()
                && d1.len() == d2.len()
                && g1.iter().zip(g2).all(|(x, y)| unify_sorts(x, y, map))
                && d1.iter().zip(d2).all(|(x, y)| unify_sorts(x, y, map))
        }
        _ => false,
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Base(n) => write!(f, "{n}"),
            Sort::Var(v) => write!(f, "'{v}"),
            Sort::Arrow(a, b) => {
                if matches!(**a, Sort::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            Sort::Context(g, d) => {
                write!(f, "[")?;
                for (i, s) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, " |- ")?;
                for (i, s) in d.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "]")
            }
        }
    }
}
