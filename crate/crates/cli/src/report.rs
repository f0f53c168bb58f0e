use std::fmt;
use std::time::Duration;

use resmod_core::kernel::var_stem;
use resmod_core::prover::{SearchReport, SearchResult, Solution};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Proved,
    ProvedUnverified,
    Saturated,
    ResourceOut,
}

impl Verdict {
    pub fn of(result: &SearchResult) -> Verdict {
        match result {
            SearchResult::Proved {
                solution: Solution::Verified(_),
                ..
            } => Verdict::Proved,
            SearchResult::Proved {
                solution: Solution::Unverified,
                ..
            } => Verdict::ProvedUnverified,
            SearchResult::Saturated => Verdict::Saturated,
            SearchResult::ResourceOut(_) => Verdict::ResourceOut,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Proved => 0,
            Verdict::Saturated => 1,
            Verdict::ResourceOut => 2,
            Verdict::ProvedUnverified => 4,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "PROVED",
            Verdict::ProvedUnverified => "PROVED_UNVERIFIED",
            Verdict::Saturated => "SATURATED",
            Verdict::ResourceOut => "RESOURCE_OUT",
        })
    }
}

pub const INPUT_ERROR: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Statistics {
    pub generated: usize,
    pub kept: usize,
    pub given: usize,
    pub resolutions: usize,
    pub factorings: usize,
    pub narrowings: usize,
    pub wall_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub verdict: Verdict,
    /// Budget that ran out, for RESOURCE_OUT.
    pub budget: Option<String>,
    pub statistics: Statistics,
    /// Bindings of the goal's variables, for a verified refutation.
    pub solution: Vec<String>,
    /// Trace lines of the refutation.
    pub trace: Vec<String>,
    /// File the trace was also written to.
    pub trace_file: Option<String>,
}

impl RunReport {
    pub fn new(report: &SearchReport, wall: Duration, trace_file: Option<String>) -> RunReport {
        let s = &report.stats;
        let trace = match &report.result {
            SearchResult::Proved { trace, .. } => {
                trace.to_string().lines().map(String::from).collect()
            }
            _ => Vec::new(),
        };
        let budget = match &report.result {
            SearchResult::ResourceOut(b) => Some(b.to_string()),
            _ => None,
        };
        let solution = match &report.result {
            SearchResult::Proved {
                solution: Solution::Verified(s),
                ..
            } => s
                .iter()
                .filter(|(v, _)| var_stem(&v.name) == &*v.name)
                .map(|(v, t)| format!("{} := {t}", v.name))
                .collect(),
            _ => Vec::new(),
        };
        RunReport {
            solution,
            verdict: Verdict::of(&report.result),
            budget,
            statistics: Statistics {
                generated: s.generated,
                kept: s.kept,
                given: s.given,
                resolutions: s.resolutions,
                factorings: s.factorings,
                narrowings: s.narrowings,
                wall_ms: wall.as_millis(),
            },
            trace,
            trace_file,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.trace {
            writeln!(f, "{line}")?;
        }
        match &self.budget {
            Some(b) => writeln!(f, "{} ({b})", self.verdict)?,
            None => writeln!(f, "{}", self.verdict)?,
        }
        for b in &self.solution {
            writeln!(f, "{b}")?;
        }
        let s = &self.statistics;
        write!(
            f,
            "generated {} kept {} given {} resolutions {} factorings {} narrowings {} time {}ms",
            s.generated, s.kept, s.given, s.resolutions, s.factorings, s.narrowings, s.wall_ms
        )
    }
}
