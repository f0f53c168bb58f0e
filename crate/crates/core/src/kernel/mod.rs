//! Many-sorted terms, propositions, substitutions and positions.

mod position;
mod prop;
mod signature;
pub mod sort;
mod subst;
mod term;

use std::collections::BTreeSet;
use std::sync::Arc;

pub use position::{
    replace_at, replace_term_at, subexpr_at, term_at, term_positions, Expr, Position,
};
pub use prop::{Atom, Prop};
pub use signature::{
    check_prop, sort_of, var_stem, NumeralMode, Origin, Signature, SortInference, Symbol,
    SymbolKind,
};
pub use sort::Sort;
pub use subst::Substitution;
pub use term::{Term, Var, APPLY};

/// Interned-ish identifier shared by symbols and variables.
pub type Name = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(Name),
    #[error("rank mismatch at `{symbol}`: {detail}")]
    RankMismatch { symbol: Name, detail: String },
    #[error("symbol `{0}` declared twice with different ranks")]
    DuplicateSymbol(Name),
    #[error("invalid position {0}")]
    InvalidPosition(String),
}

/// Rename every variable of `vars` to a fresh one drawn from the signature counter.
pub fn fresh_renaming<'a>(
    vars: impl IntoIterator<Item = &'a Var>,
    sig: &mut Signature,
) -> Substitution {
    Substitution::from_pairs(
        vars.into_iter()
            .map(|v| (v.clone(), Term::Var(sig.fresh_var(v)))),
    )
}

/// Rename the free variables of `p` apart from `avoid`.
pub fn rename_apart(avoid: &BTreeSet<Var>, p: &Prop, sig: &mut Signature) -> Prop {
    let clash: Vec<Var> = p
        .free_vars()
        .into_iter()
        .filter(|v| avoid.contains(v))
        .collect();
    fresh_renaming(clash.iter(), sig).apply_prop(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rename_apart_disjoint_is_identity() {
        let mut sig = Signature::new();
        let x = Var::new("X", Sort::base("i"));
        let p = Prop::atom("p", vec![Term::Var(x.clone())]);
        let avoid: BTreeSet<Var> = [Var::new("Y", Sort::base("i"))].into_iter().collect();
        assert_eq!(rename_apart(&avoid, &p, &mut sig), p);
        let avoid: BTreeSet<Var> = [x.clone()].into_iter().collect();
        let q = rename_apart(&avoid, &p, &mut sig);
        assert_ne!(q, p);
        assert!(q.free_vars().is_disjoint(&avoid));
    }
}
