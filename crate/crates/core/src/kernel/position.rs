//! Addressing of subterms and subformulas by paths of 1-based child indices.
//!
//! Children of a proposition node are its immediate subformulas; the children
//! of an atom are its argument terms.

use std::fmt;

use super::{Atom, KernelError, Prop, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for Position {
    fn from(v: Vec<usize>) -> Self {
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

/// Either kind of subexpression a position can address.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Term(Term),
    Prop(Prop),
}

fn invalid(p: &[usize]) -> KernelError {
    KernelError::InvalidPosition(Position(p.to_vec()).to_string())
}

pub fn term_at<'a>(t: &'a Term, path: &[usize]) -> Result<&'a Term, KernelError> {
    let mut cur = t;
    for &k in path {
        cur = k
            .checked_sub(1)
            .and_then(|k| cur.args().get(k))
            .ok_or_else(|| invalid(path))?;
    }
    Ok(cur)
}

pub fn replace_term_at(t: &Term, path: &[usize], new: Term) -> Result<Term, KernelError> {
    match path.split_first() {
        None => Ok(new),
        Some((&k, rest)) => match t {
            Term::App(h, args) if k >= 1 && k <= args.len() => {
                let mut args = args.clone();
                args[k - 1] = replace_term_at(&args[k - 1], rest, new)?;
                Ok(Term::App(h.clone(), args))
            }
            _ => Err(invalid(path)),
        },
    }
}

pub fn subexpr_at(p: &Prop, path: &[usize]) -> Result<Expr, KernelError> {
    match path.split_first() {
        None => Ok(Expr::Prop(p.clone())),
        Some((&k, rest)) => match p {
            Prop::Atom(a) => {
                let arg = k
                    .checked_sub(1)
                    .and_then(|k| a.args.get(k))
                    .ok_or_else(|| invalid(path))?;
                Ok(Expr::Term(term_at(arg, rest)?.clone()))
            }
            _ => {
                let children = p.children();
                let c = k
                    .checked_sub(1)
                    .and_then(|k| children.get(k))
                    .ok_or_else(|| invalid(path))?;
                subexpr_at(c, rest)
            }
        },
    }
}

pub fn replace_at(p: &Prop, path: &[usize], new: Expr) -> Result<Prop, KernelError> {
    let Some((&k, rest)) = path.split_first() else {
        return match new {
            Expr::Prop(q) => Ok(q),
            Expr::Term(_) => Err(invalid(path)),
        };
    };
    let child = |q: &Prop| replace_at(q, rest, new.clone());
    Ok(match (p, k) {
        (Prop::Atom(a), _) if k >= 1 && k <= a.args.len() => {
            let Expr::Term(t) = new else {
                return Err(invalid(path));
            };
            let mut args = a.args.clone();
            args[k - 1] = replace_term_at(&args[k - 1], rest, t)?;
            Prop::Atom(Atom {
                pred: a.pred.clone(),
                args,
            })
        }
        (Prop::Not(q), 1) => Prop::not(child(q)?),
        (Prop::Forall(v, q), 1) => Prop::forall(v.clone(), child(q)?),
        (Prop::Exists(v, q), 1) => Prop::exists(v.clone(), child(q)?),
        (Prop::And(a, b), 1) => Prop::and(child(a)?, (**b).clone()),
        (Prop::And(a, b), 2) => Prop::and((**a).clone(), child(b)?),
        (Prop::Or(a, b), 1) => Prop::or(child(a)?, (**b).clone()),
        (Prop::Or(a, b), 2) => Prop::or((**a).clone(), child(b)?),
        (Prop::Imp(a, b), 1) => Prop::imp(child(a)?, (**b).clone()),
        (Prop::Imp(a, b), 2) => Prop::imp((**a).clone(), child(b)?),
        (Prop::Iff(a, b), 1) => Prop::iff(child(a)?, (**b).clone()),
        (Prop::Iff(a, b), 2) => Prop::iff((**a).clone(), child(b)?),
        _ => return Err(invalid(path)),
    })
}

/// All valid positions of a term, preorder.
pub fn term_positions(t: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    fn go(t: &Term, here: Position, out: &mut Vec<Position>) {
        out.push(here.clone());
        for (i, a) in t.args().iter().enumerate() {
            go(a, here.child(i + 1), out);
        }
    }
    go(t, Position::root(), &mut out);
    out
}
