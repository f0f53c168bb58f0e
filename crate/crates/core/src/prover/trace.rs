use std::collections::BTreeMap;
use std::fmt;

use crate::clausal::{ConstrainedClause, Constraint, Literal, Provenance};
use crate::kernel::{Name, Prop, Signature};
use crate::syntax::{parse_equation, parse_prop, ParseError, UnknownIdents};

/// How a step was obtained. Parent ids refer to earlier steps of the same trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepRule {
    Input,
    Resolution(usize, usize),
    Factoring(usize),
    Narrowing(usize, Name),
    Renaming(usize),
}

impl StepRule {
    pub fn parents(&self) -> Vec<usize> {
        match self {
            StepRule::Input => vec![],
            StepRule::Resolution(a, b) => vec![*a, *b],
            StepRule::Factoring(a) | StepRule::Narrowing(a, _) | StepRule::Renaming(a) => vec![*a],
        }
    }

    fn from_provenance(p: &Provenance, map: &BTreeMap<usize, usize>) -> StepRule {
        let m = |i: &usize| map[i];
        match p {
            Provenance::Input => StepRule::Input,
            Provenance::Resolution(a, b) => StepRule::Resolution(m(a), m(b)),
            Provenance::Factoring(a) => StepRule::Factoring(m(a)),
            Provenance::Narrowing(a, r) => StepRule::Narrowing(m(a), r.clone()),
            Provenance::Renaming(a) => StepRule::Renaming(m(a)),
        }
    }
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepRule::Input => f.write_str("input()"),
            StepRule::Resolution(a, b) => write!(f, "res({a},{b})"),
            StepRule::Factoring(a) => write!(f, "factor({a})"),
            StepRule::Narrowing(a, r) => write!(f, "narr({a},{r})"),
            StepRule::Renaming(a) => write!(f, "renaming({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofStep {
    pub id: usize,
    pub rule: StepRule,
    pub literals: Vec<Literal>,
    /// Indices into the trace's constraint table.
    pub constraints: Vec<usize>,
}

/// A derivation with dense ids from 1 and a shared table of named constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
    pub constraints: Vec<Constraint>,
}

impl ProofTrace {
    /// Build the trace of `goal` from an arena of clauses indexed by id.
    pub fn extract(arena: &BTreeMap<usize, ConstrainedClause>, goal: usize) -> ProofTrace {
        let mut needed = Vec::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if needed.contains(&i) {
                continue;
            }
            needed.push(i);
            stack.extend(provenance_parents(&arena[&i].provenance));
        }
        needed.sort_unstable();
        let map: BTreeMap<usize, usize> = needed
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, k + 1))
            .collect();
        let mut trace = ProofTrace::default();
        for &i in &needed {
            let c = &arena[&i];
            let constraints = c
                .constraints
                .iter()
                .map(|k| trace.constraint_index(k))
                .collect();
            trace.steps.push(ProofStep {
                id: map[&i],
                rule: StepRule::from_provenance(&c.provenance, &map),
                literals: c.literals.clone(),
                constraints,
            });
        }
        trace
    }

    fn constraint_index(&mut self, k: &Constraint) -> usize {
        match self.constraints.iter().position(|c| c == k) {
            Some(i) => i,
            None => {
                self.constraints.push(k.clone());
                self.constraints.len() - 1
            }
        }
    }

    pub fn last(&self) -> Option<&ProofStep> {
        self.steps.last()
    }

    /// Constraints attached to the final step.
    pub fn final_constraints(&self) -> Vec<Constraint> {
        self.last()
            .map(|s| {
                s.constraints
                    .iter()
                    .map(|&i| self.constraints[i].clone())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn count(&self, pred: impl Fn(&StepRule) -> bool) -> usize {
        self.steps.iter().filter(|s| pred(&s.rule)).count()
    }

    /// Parse the text produced by `Display`.
    pub fn parse(src: &str) -> Result<ProofTrace, ParseError> {
        let sig = Signature::new();
        let mut trace = ProofTrace::default();
        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        let mut pending: Vec<(usize, Vec<String>)> = Vec::new();
        for (n, line) in src.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: &str| ParseError::new(line_no, 1, msg);
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some((name, eq)) = line
                .split_once(": ")
                .filter(|(name, _)| is_constraint_name(name))
            {
                let (lhs, rhs) = parse_equation(eq, &sig).map_err(|e| relocate(e, line_no))?;
                names.insert(name.to_string(), trace.constraints.len());
                trace.constraints.push(Constraint::new(lhs, rhs));
                continue;
            }
            let (id, rest) = line
                .split_once(' ')
                .ok_or_else(|| err("expected step id"))?;
            let id: usize = id.parse().map_err(|_| err("expected step id"))?;
            let close = rest.find(')').ok_or_else(|| err("expected rule"))?;
            let rule = parse_rule(&rest[..=close]).ok_or_else(|| err("unknown rule"))?;
            let body = rest[close + 1..].trim_start();
            let (clause, cs) = match body.split_once(" / ") {
                Some((c, cs)) => (c, cs.split(", ").map(str::to_string).collect()),
                None => (body, Vec::new()),
            };
            let literals = parse_literals(clause).map_err(|e| relocate(e, line_no))?;
            pending.push((trace.steps.len(), cs));
            trace.steps.push(ProofStep {
                id,
                rule,
                literals,
                constraints: Vec::new(),
            });
        }
        for (i, cs) in pending {
            for c in cs {
                let k = *names
                    .get(&c)
                    .ok_or_else(|| ParseError::new(0, 0, format!("undefined constraint {c}")))?;
                trace.steps[i].constraints.push(k);
            }
        }
        Ok(trace)
    }
}

fn provenance_parents(p: &Provenance) -> Vec<usize> {
    match p {
        Provenance::Input => vec![],
        Provenance::Resolution(a, b) => vec![*a, *b],
        Provenance::Factoring(a) | Provenance::Narrowing(a, _) | Provenance::Renaming(a) => {
            vec![*a]
        }
    }
}

fn is_constraint_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('c') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

fn relocate(e: ParseError, line: usize) -> ParseError {
    ParseError::new(line, e.col, e.msg)
}

fn parse_rule(s: &str) -> Option<StepRule> {
    let (name, args) = s.strip_suffix(')')?.split_once('(')?;
    let args: Vec<&str> = if args.is_empty() {
        vec![]
    } else {
        args.split(',').collect()
    };
    let num = |i: usize| args.get(i)?.trim().parse::<usize>().ok();
    match (name, args.len()) {
        ("input", 0) => Some(StepRule::Input),
        ("res", 2) => Some(StepRule::Resolution(num(0)?, num(1)?)),
        ("factor", 1) => Some(StepRule::Factoring(num(0)?)),
        ("narr", 2) => Some(StepRule::Narrowing(num(0)?, args[1].trim().into())),
        ("renaming", 1) => Some(StepRule::Renaming(num(0)?)),
        _ => None,
    }
}

fn parse_literals(s: &str) -> Result<Vec<Literal>, ParseError> {
    if s == "[]" {
        return Ok(Vec::new());
    }
    let p = parse_prop(
        &s.replace(", ", " \\/ "),
        &Signature::new(),
        UnknownIdents::Constants,
    )?;
    let mut out = Vec::new();
    flatten(&p, &mut out)
        .ok_or_else(|| ParseError::new(1, 1, "expected a disjunction of literals"))?;
    Ok(out)
}

fn flatten(p: &Prop, out: &mut Vec<Literal>) -> Option<()> {
    match p {
        Prop::Or(a, b) => {
            flatten(a, out)?;
            flatten(b, out)
        }
        Prop::Atom(a) => {
            out.push(Literal::pos(a.clone()));
            Some(())
        }
        Prop::Not(q) => match &**q {
            Prop::Atom(a) => {
                out.push(Literal::neg(a.clone()));
                Some(())
            }
            _ => None,
        },
        _ => None,
    }
}

impl fmt::Display for ProofStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.id, self.rule)?;
        if self.literals.is_empty() {
            f.write_str("[]")?;
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        if !self.constraints.is_empty() {
            let names: Vec<String> = self
                .constraints
                .iter()
                .map(|k| format!("c{}", k + 1))
                .collect();
            write!(f, " / {}", names.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        for (i, k) in self.constraints.iter().enumerate() {
            writeln!(f, "c{}: {k}", i + 1)?;
        }
        Ok(())
    }
}
