use crate::clausal::{reclausify_prop, ConstrainedClause, Constraint};
use crate::kernel::{Signature, Substitution};
use crate::rewrite::RewriteSystem;

use super::narrowing::{cheap_clash, e_unify_with, EUnifyOutcome, NarrowingConfig};
use super::syntactic::unify_all;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StoreStatus {
    Unsolved,
    Solved(Substitution),
    Failed,
    Unknown,
}

/// Postponed equations of one clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintStore {
    pub equations: Vec<Constraint>,
    pub status: StoreStatus,
}

impl ConstraintStore {
    pub fn new(equations: Vec<Constraint>) -> ConstraintStore {
        ConstraintStore {
            equations,
            status: StoreStatus::Unsolved,
        }
    }

    /// Run narrowing and record the outcome; the first solution is kept.
    pub fn solve(&mut self, rs: &RewriteSystem, cfg: &NarrowingConfig) -> &StoreStatus {
        self.status = match e_unify_with(&self.equations, rs, cfg) {
            EUnifyOutcome::Solutions(mut s) => StoreStatus::Solved(s.swap_remove(0)),
            EUnifyOutcome::Unsatisfiable => StoreStatus::Failed,
            EUnifyOutcome::Unknown => StoreStatus::Unknown,
        };
        &self.status
    }

    /// Some equation can never hold.
    pub fn has_cheap_clash(&self, rs: &RewriteSystem) -> bool {
        self.equations
            .iter()
            .any(|k| cheap_clash(&k.lhs, &k.rhs, rs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    /// Constraints solved and propagated; the clause was re-normalized and re-clausified.
    Solved {
        clauses: Vec<ConstrainedClause>,
        substitution: Substitution,
    },
    /// Constraints are kept frozen (the E-rules are not empty).
    Kept(ConstrainedClause),
    /// The constraints have no solution.
    Discarded,
}

/// Solve the constraints of `c` syntactically and propagate the solution.
/// Only applies when the theory has no E-rules; otherwise constraints stay frozen
/// unless they clash outright.
pub fn propagate_on_the_fly(
    c: &ConstrainedClause,
    rs: &RewriteSystem,
    fuel: usize,
    sig: &mut Signature,
) -> Propagation {
    if c.constraints.is_empty() {
        return Propagation::Kept(c.clone());
    }
    if rs.has_e_rules() {
        if ConstraintStore::new(c.constraints.clone()).has_cheap_clash(rs) {
            return Propagation::Discarded;
        }
        return Propagation::Kept(c.clone());
    }
    let Some(theta) = unify_all(
        c.constraints
            .iter()
            .map(|k| (k.lhs.clone(), k.rhs.clone()))
            .collect(),
    ) else {
        return Propagation::Discarded;
    };
    let instance = ConstrainedClause::new(
        c.literals
            .iter()
            .map(|l| crate::clausal::Literal {
                positive: l.positive,
                atom: theta.apply_atom(&l.atom),
            })
            .collect(),
        vec![],
    );
    let (mut clauses, _, unnormalized) = reclausify_prop(&instance.to_prop(), &[], rs, fuel, sig);
    for k in &mut clauses {
        k.unnormalized = unnormalized || c.unnormalized;
    }
    Propagation::Solved {
        clauses,
        substitution: theta,
    }
}
