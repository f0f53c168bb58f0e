//! Syntactic unification, constraint stores and narrowing modulo the E-rules.

mod narrowing;
mod store;
mod syntactic;

pub use narrowing::{
    cheap_clash, check_equations, check_solution, e_unify_detailed, e_unify_narrowing,
    e_unify_with, EUnifyOutcome, EquationVerdict, NarrowingConfig, SolutionError, DEFAULT_DEPTH,
    DEFAULT_NODE_BUDGET,
};
pub use store::{propagate_on_the_fly, ConstraintStore, Propagation, StoreStatus};
pub use syntactic::{
    match_atom, match_atom_with, match_term, unify_all, unify_atoms, unify_from, unify_syntactic,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
}
