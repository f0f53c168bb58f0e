//! Resolution modulo a rewrite system on terms and propositions.

pub mod clausal;
pub mod kernel;
pub mod lambda_sigma;
pub mod prover;
pub mod rewrite;
pub mod syntax;
pub mod theories;
pub mod unify;
