use std::fs;
use std::path::Path;

use resmod_core::clausal::Constraint;
use resmod_core::kernel::{Prop, Signature, Substitution, Term};
use resmod_core::syntax::{parse_equation, parse_term, ParseError, UnknownIdents};
use resmod_core::theories::{
    declare_line, load_preset, logical_lines, parse_theory_file, Theory, TheoryError,
    DECLARATION_KEYWORDS,
};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Theory(#[from] TheoryError),
    #[error("{context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("{0}")]
    Invalid(String),
}

fn read(path: &str) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_string(),
        source,
    })
}

/// A preset name, an inline `{...}` rule list, or a theory file path.
pub fn load_theory(src: &str) -> Result<Theory, InputError> {
    let trimmed = src.trim();
    if trimmed.starts_with('{') {
        return Ok(parse_theory_file(trimmed)?);
    }
    match load_preset(trimmed) {
        Ok(t) => Ok(t),
        Err(TheoryError::UnknownPreset(_)) if Path::new(trimmed).exists() => {
            Ok(parse_theory_file(&read(trimmed)?)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// A goal named in the theory, a file holding the goal, or the goal text.
pub fn load_goal(theory: &Theory, src: &str) -> Result<(Prop, Signature), InputError> {
    if let Ok(g) = theory.goal(src.trim()) {
        return Ok((g.clone(), theory.signature.clone()));
    }
    let text = if Path::new(src).is_file() {
        read(src)?
    } else {
        src.to_string()
    };
    let text: String = logical_lines(&text)
        .into_iter()
        .map(|(_, l)| l)
        .collect::<Vec<_>>()
        .join(" ");
    if text.trim().is_empty() {
        return Err(InputError::Invalid("empty goal".into()));
    }
    Ok(theory.parse_statement(&text)?)
}

/// Declaration lines extend `theory`; the other lines are returned.
fn split_declarations(theory: &mut Theory, text: &str) -> Result<Vec<(usize, String)>, InputError> {
    let mut rest = Vec::new();
    for (line, src) in logical_lines(text) {
        let keyword = src.split_whitespace().next().unwrap_or("");
        if DECLARATION_KEYWORDS.contains(&keyword) {
            declare_line(theory, &src, line)?;
        } else {
            rest.push((line, src));
        }
    }
    Ok(rest)
}

/// Equations `[name:] lhs = rhs`, unknown identifiers read as variables.
/// Symbols the theory only met inside its statements are forgotten first, so
/// a constraint file declares what it uses.
pub fn parse_constraints(
    theory: &mut Theory,
    text: &str,
) -> Result<Vec<(String, Constraint)>, InputError> {
    theory.signature.forget_implicit();
    let lines = split_declarations(theory, text)?;
    let mut out = Vec::new();
    for (k, (line, src)) in lines.into_iter().enumerate() {
        let (name, body) = match src.split_once(':') {
            Some((n, b)) if !n.trim().contains(' ') => (n.trim().to_string(), b.trim()),
            _ => (format!("c{}", k + 1), src.as_str()),
        };
        let (l, r) =
            parse_equation(body, &theory.signature).map_err(|source| InputError::Parse {
                context: format!("line {line}"),
                source,
            })?;
        out.push((name, Constraint::new(l, r)));
    }
    Ok(out)
}

/// Bindings `X = term`, one per line.
pub fn parse_substitution(theory: &mut Theory, text: &str) -> Result<Substitution, InputError> {
    let lines = split_declarations(theory, text)?;
    let mut s = Substitution::new();
    for (line, src) in lines {
        let (lhs, rhs) = src
            .split_once('=')
            .ok_or_else(|| InputError::Invalid(format!("line {line}: expected `X = term`")))?;
        let parse = |t: &str| {
            parse_term(t, &theory.signature, UnknownIdents::Variables).map_err(|source| {
                InputError::Parse {
                    context: format!("line {line}"),
                    source,
                }
            })
        };
        let Term::Var(v) = parse(lhs.trim())? else {
            return Err(InputError::Invalid(format!(
                "line {line}: `{}` is not a variable",
                lhs.trim()
            )));
        };
        if s.get(&v).is_some() {
            return Err(InputError::Invalid(format!(
                "line {line}: `{}` bound twice",
                v.name
            )));
        }
        s.insert(v, parse(rhs.trim())?);
    }
    Ok(s)
}

pub fn read_file(path: &str) -> Result<String, InputError> {
    read(path)
}
