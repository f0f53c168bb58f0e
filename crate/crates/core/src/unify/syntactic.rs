use crate::kernel::{Atom, Substitution, Term, Var};

use super::UnifyError;

fn sorts_clash(a: &Var, b: &Var) -> bool {
    a.sort.is_ground() && b.sort.is_ground() && a.sort != b.sort
}

/// Most general unifier of `t` and `u`, occurs check included.
pub fn unify_syntactic(t: &Term, u: &Term) -> Result<Option<Substitution>, UnifyError> {
    if let (Term::Var(a), Term::Var(b)) = (t, u) {
        if sorts_clash(a, b) {
            return Err(UnifyError::SortMismatch(format!(
                "{}:{} vs {}:{}",
                a.name, a.sort, b.name, b.sort
            )));
        }
    }
    Ok(unify_all(vec![(t.clone(), u.clone())]))
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    unify_all(a.args.iter().cloned().zip(b.args.iter().cloned()).collect())
}

/// Simultaneous mgu of a list of equations.
pub fn unify_all(eqs: Vec<(Term, Term)>) -> Option<Substitution> {
    unify_from(Substitution::new(), eqs)
}

/// Extend `sigma` to a unifier of `eqs`.
pub fn unify_from(mut sigma: Substitution, mut eqs: Vec<(Term, Term)>) -> Option<Substitution> {
    eqs.reverse();
    while let Some((l, r)) = eqs.pop() {
        let l = sigma.apply_term(&l);
        let r = sigma.apply_term(&r);
        match (&l, &r) {
            _ if l == r => {}
            (Term::Var(v), other) | (other, Term::Var(v)) => {
                if other.occurs(v) {
                    return None;
                }
                sigma.bind(v.clone(), other.clone());
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                for pair in xs.iter().cloned().zip(ys.iter().cloned()).rev() {
                    eqs.push(pair);
                }
            }
        }
    }
    Some(sigma)
}

/// One-sided matching: `sigma(pattern) = subject`, binding only pattern variables.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    match_into(pattern, subject, &mut sigma).then_some(sigma)
}

pub fn match_atom(pattern: &Atom, subject: &Atom) -> Option<Substitution> {
    if pattern.pred != subject.pred || pattern.args.len() != subject.args.len() {
        return None;
    }
    let mut sigma = Substitution::new();
    pattern
        .args
        .iter()
        .zip(&subject.args)
        .all(|(p, s)| match_into(p, s, &mut sigma))
        .then_some(sigma)
}

/// Extend `sigma` so that it maps `pattern` onto `subject`.
pub fn match_atom_with(
    pattern: &Atom,
    subject: &Atom,
    sigma: &Substitution,
) -> Option<Substitution> {
    if pattern.pred != subject.pred || pattern.args.len() != subject.args.len() {
        return None;
    }
    let mut sigma = sigma.clone();
    pattern
        .args
        .iter()
        .zip(&subject.args)
        .all(|(p, s)| match_into(p, s, &mut sigma))
        .then_some(sigma)
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match sigma.get(v) {
            Some(bound) => bound == subject,
            None => {
                sigma.insert(v.clone(), subject.clone());
                true
            }
        },
        Term::App(f, xs) => match subject {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(p, s)| match_into(p, s, sigma))
            }
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Sort;

    fn v(n: &str) -> Term {
        Term::var(n, Sort::base("i"))
    }

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn variable_against_constant() {
        let s = unify_syntactic(&v("x"), &c("a")).unwrap().unwrap();
        assert_eq!(s.apply_term(&v("x")), c("a"));
    }

    #[test]
    fn occurs_check() {
        assert_eq!(
            unify_syntactic(&v("x"), &Term::app("f", vec![v("x")])).unwrap(),
            None
        );
    }

    #[test]
    fn sort_mismatch_between_variables() {
        let x = Term::var("x", Sort::base("i"));
        let y = Term::var("y", Sort::base("o"));
        assert!(matches!(
            unify_syntactic(&x, &y),
            Err(UnifyError::SortMismatch(_))
        ));
    }

    #[test]
    fn pair_atoms() {
        let pair = |a: Term, b: Term| crate::syntax::pair(a, b);
        let gc = Term::app("g", vec![c("C")]);
        let a = Atom::new("in", vec![pair(v("X"), v("Y")), c("R")]);
        let b = Atom::new("in", vec![pair(gc.clone(), c("C")), c("R")]);
        let s = unify_atoms(&a, &b).unwrap();
        assert_eq!(s.apply_term(&v("X")), gc);
        assert_eq!(s.apply_term(&v("Y")), c("C"));
        assert!(s.is_idempotent());
    }

    #[test]
    fn matching() {
        let k = |x: Term, y: Term| Term::apply_all(c("K"), [x, y]);
        let s = match_term(&k(v("x"), v("y")), &k(c("a"), c("b"))).unwrap();
        assert_eq!(s.len(), 2);
        assert!(match_term(&k(v("x"), v("x")), &k(c("a"), c("b"))).is_none());
        let pat = Atom::new("in", vec![v("w"), Term::app("upair", vec![v("x"), v("y")])]);
        let sub = Atom::new("in", vec![c("c"), Term::app("upair", vec![c("a"), c("b")])]);
        let s = match_atom(&pat, &sub).unwrap();
        assert_eq!(s.apply_atom(&pat), sub);
        assert_eq!(s.len(), 3);
    }
}
