use std::collections::HashSet;

use crate::clausal::{ConstrainedClause, Literal};
use crate::kernel::Substitution;
use crate::unify::match_atom_with;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Redundancy {
    Tautology,
    Duplicate,
    Subsumed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Discard(Redundancy),
}

/// Variant keys of every kept clause plus the constraint-free active clauses.
#[derive(Clone, Debug, Default)]
pub struct RedundancyIndex {
    seen: HashSet<String>,
    units: Vec<ConstrainedClause>,
}

impl RedundancyIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Remember `c` as kept, for duplicate detection.
    pub fn record(&mut self, c: &ConstrainedClause) {
        self.seen.insert(c.variant_key());
    }

    /// Make `c` available for subsumption when it carries no constraints.
    pub fn activate(&mut self, c: &ConstrainedClause) {
        if c.constraints.is_empty() {
            self.units.push(c.clone());
        }
    }

    pub fn filter(&self, c: &ConstrainedClause) -> Verdict {
        if c.is_empty() {
            return Verdict::Keep;
        }
        if c.constraints.is_empty() && c.is_tautology() {
            return Verdict::Discard(Redundancy::Tautology);
        }
        if self.seen.contains(&c.variant_key()) {
            return Verdict::Discard(Redundancy::Duplicate);
        }
        match self
            .units
            .iter()
            .find(|d| subsumes(&d.literals, &c.literals))
        {
            Some(d) => Verdict::Discard(Redundancy::Subsumed(d.id)),
            None => Verdict::Keep,
        }
    }
}

/// Some instance of `general` is a subset of `specific`.
pub fn subsumes(general: &[Literal], specific: &[Literal]) -> bool {
    general.len() <= specific.len() && extend(general, specific, &Substitution::new())
}

fn extend(general: &[Literal], specific: &[Literal], sigma: &Substitution) -> bool {
    let Some((first, rest)) = general.split_first() else {
        return true;
    };
    specific
        .iter()
        .filter(|l| l.positive == first.positive)
        .any(|l| {
            match_atom_with(&first.atom, &l.atom, sigma).is_some_and(|s| extend(rest, specific, &s))
        })
}
