use std::fmt::{self, Display, Formatter, Write};

use crate::kernel::{Atom, Prop, Term, APPLY};
use crate::lambda_sigma::CLOS;

// Term precedences: sum 1, product 2, application 3, closure 4, primary 5.
fn term_prec(t: &Term) -> u8 {
    match t {
        Term::App(h, args) if args.len() == 2 => match &**h {
            "+" => 1,
            "*" => 2,
            APPLY => 3,
            CLOS => 4,
            _ => 5,
        },
        _ => 5,
    }
}

fn write_term(out: &mut impl Write, t: &Term, ctx: u8) -> fmt::Result {
    let prec = term_prec(t);
    let paren = prec < ctx;
    if paren {
        out.write_char('(')?;
    }
    match t {
        Term::Var(v) => out.write_str(&v.name)?,
        Term::App(h, args) if prec < 5 => {
            let (l, r) = (&args[0], &args[1]);
            match prec {
                1 | 2 => {
                    write_term(out, l, prec)?;
                    write!(out, " {h} ")?;
                    write_term(out, r, prec + 1)?;
                }
                3 => {
                    write_term(out, l, 3)?;
                    out.write_char(' ')?;
                    write_term(out, r, 4)?;
                }
                _ => {
                    write_term(out, l, 4)?;
                    out.write_char('[')?;
                    write_term(out, r, 0)?;
                    out.write_char(']')?;
                }
            }
        }
        Term::App(h, args) => {
            out.write_str(h)?;
            if !args.is_empty() {
                out.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write_term(out, a, 0)?;
                }
                out.write_char(')')?;
            }
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match (&*self.pred, self.args.as_slice()) {
            ("=" | "in", [l, r]) => write!(f, "{l} {} {r}", self.pred),
            (_, []) => f.write_str(&self.pred),
            (_, args) => {
                write!(f, "{}(", self.pred)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
        }
    }
}

// Proposition precedences: <=> 1, => 2, \/ 3, /\ 4, unary 5.
fn prop_prec(p: &Prop) -> u8 {
    match p {
        Prop::Iff(..) => 1,
        Prop::Imp(..) => 2,
        Prop::Or(..) => 3,
        Prop::And(..) => 4,
        _ => 5,
    }
}

/// `rightmost`: nothing follows this subformula at the current nesting, so an
/// open quantifier body may extend to the end.
fn write_prop(out: &mut impl Write, p: &Prop, ctx: u8, rightmost: bool) -> fmt::Result {
    let quantifier = matches!(p, Prop::Forall(..) | Prop::Exists(..));
    let paren = prop_prec(p) < ctx || (quantifier && !rightmost);
    let r = rightmost || paren;
    if paren {
        out.write_char('(')?;
    }
    match p {
        Prop::Atom(a) => write!(out, "{a}")?,
        Prop::Bot => out.write_str("bot")?,
        Prop::Top => out.write_str("top")?,
        Prop::Not(q) => {
            out.write_char('~')?;
            write_prop(out, q, 5, r)?;
        }
        Prop::Forall(v, q) | Prop::Exists(v, q) => {
            out.write_str(if matches!(p, Prop::Forall(..)) {
                "forall "
            } else {
                "exists "
            })?;
            out.write_str(&v.name)?;
            if v.sort.is_ground() {
                write!(out, ":{}", v.sort)?;
            }
            out.write_str(". ")?;
            write_prop(out, q, 0, r)?;
        }
        Prop::And(a, b) | Prop::Or(a, b) | Prop::Imp(a, b) | Prop::Iff(a, b) => {
            let k = prop_prec(p);
            let (lctx, rctx, op) = match p {
                Prop::And(..) => (k, k + 1, "/\\"),
                Prop::Or(..) => (k, k + 1, "\\/"),
                Prop::Imp(..) => (k + 1, k, "=>"),
                _ => (k + 1, k + 1, "<=>"),
            };
            write_prop(out, a, lctx, false)?;
            write!(out, " {op} ")?;
            write_prop(out, b, rctx, r)?;
        }
    }
    if paren {
        out.write_char(')')?;
    }
    Ok(())
}

impl Display for Prop {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_prop(f, self, 0, true)
    }
}
