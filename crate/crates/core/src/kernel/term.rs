use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use super::{Name, Sort};

/// A first-order variable. Identity is the name alone; the sort rides along.
#[derive(Clone, Debug)]
pub struct Var {
    pub name: Name,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: Sort) -> Var {
        Var {
            name: name.into(),
            sort,
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name)
    }
}

/// Name of the binary application symbol α of the higher-order presentations.
pub const APPLY: &str = "@";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: &str, sort: Sort) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(head: &str, args: Vec<Term>) -> Term {
        Term::App(head.into(), args)
    }

    /// The shorthand `(t u)` for `α(t, u)`.
    pub fn apply(fun: Term, arg: Term) -> Term {
        Term::App(APPLY.into(), vec![fun, arg])
    }

    pub fn apply_all(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::apply)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn head(&self) -> Option<&Name> {
        match self {
            Term::Var(_) => None,
            Term::App(h, _) => Some(h),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Peel the left spine of `@` applications: `(h a1 ... an)` gives `(h, [a1..an])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut head = self;
        let mut args = Vec::new();
        while let Term::App(h, xs) = head {
            if &**h != APPLY || xs.len() != 2 {
                break;
            }
            args.push(&xs[1]);
            head = &xs[0];
        }
        args.reverse();
        (head, args)
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_in_order(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn symbols(&self, out: &mut BTreeSet<Name>) {
        if let Term::App(h, args) = self {
            out.insert(h.clone());
            args.iter().for_each(|a| a.symbols(out));
        }
    }

    /// Rebuild the term with every variable passed through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(h, args) => {
                Term::App(h.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spine_of_nested_application() {
        let i = Sort::base("i");
        let t = Term::apply_all(
            Term::constant("K"),
            [Term::constant("a"), Term::var("y", i)],
        );
        let (head, args) = t.spine();
        assert_eq!(head, &Term::constant("K"));
        assert_eq!(args.len(), 2);
        assert_eq!(args[0], &Term::constant("a"));
    }

    #[test]
    fn variable_identity_ignores_sort() {
        assert_eq!(
            Var::new("x", Sort::base("i")),
            Var::new("x", Sort::var("a"))
        );
    }
}
