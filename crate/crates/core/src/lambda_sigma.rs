//! Symbols of the explicit-substitution calculus and small constructors.

use crate::kernel::Term;

pub const LAM: &str = "lam";
pub const CLOS: &str = "clos";
pub const CONS: &str = "cons";
pub const COMP: &str = "comp";
pub const ID: &str = "id";
pub const SHIFT: &str = "shift";
pub const ONE: &str = "1";

/// `shift^n` for `n >= 1`, as right-nested compositions.
pub fn shift_pow(n: usize) -> Term {
    assert!(n >= 1);
    let mut t = Term::constant(SHIFT);
    for _ in 1..n {
        t = Term::app(COMP, vec![Term::constant(SHIFT), t]);
    }
    t
}

/// de Bruijn index `n` (1-based).
pub fn index(n: usize) -> Term {
    assert!(n >= 1);
    if n == 1 {
        Term::constant(ONE)
    } else {
        Term::app(CLOS, vec![Term::constant(ONE), shift_pow(n - 1)])
    }
}

/// Inverse of [`index`].
pub fn as_index(t: &Term) -> Option<usize> {
    match t {
        Term::App(h, args) if &**h == ONE && args.is_empty() => Some(1),
        Term::App(h, args) if &**h == CLOS && args[0] == Term::constant(ONE) => {
            shift_count(&args[1]).map(|k| k + 1)
        }
        _ => None,
    }
}

fn shift_count(t: &Term) -> Option<usize> {
    match t {
        Term::App(h, args) if &**h == SHIFT && args.is_empty() => Some(1),
        Term::App(h, args) if &**h == COMP && args[0] == Term::constant(SHIFT) => {
            shift_count(&args[1]).map(|k| k + 1)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_round_trip() {
        for n in 1..6 {
            assert_eq!(as_index(&index(n)), Some(n));
        }
    }
}
