//! Line-oriented proof files.
//!
//! ```text
//! conditions : E,D3
//! fix c := ~[]#c
//! hyp cons : []#c -> ~[]~#c
//! 1 : #c <-> ~[]#c ; fix c
//! goal : bot
//! ```
//!
//! Lines whose first non-blank character is `#` are comments. A proof line
//! is split at its first `;`; `ax` arguments are separated by `;;`.

use std::fmt;

use thiserror::Error;

use super::{Justification, Line, Proof};
use crate::conditions::{parse_condition_set, AxiomTag, ConditionError, ConditionSet};
use crate::modal::{EnvError, FixedPointEnv, Formula, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Env { line: usize, source: EnvError },
    #[error("line {line}: {source}")]
    Conditions { line: usize, source: ConditionError },
}

pub fn parse_proof(text: &str) -> Result<Proof, ProofFileError> {
    let mut conditions = ConditionSet::empty();
    let mut env = FixedPointEnv::new();
    let mut hyps: Vec<(String, Formula)> = Vec::new();
    let mut lines = Vec::new();
    let mut goal = None;

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ProofFileError::Syntax { line: ln, message };
        let formula = |s: &str| Formula::parse(s.trim()).map_err(|source| ProofFileError::Formula { line: ln, source });

        if let Some(rest) = keyword(trimmed, "fix") {
            let (name, def) = rest
                .split_once(":=")
                .ok_or_else(|| syntax("expected 'fix NAME := FORMULA'".into()))?;
            let name = ident(name.trim()).ok_or_else(|| syntax(format!("bad constant name {name:?}")))?;
            env.define(name, formula(def)?)
                .map_err(|source| ProofFileError::Env { line: ln, source })?;
        } else if let Some(rest) = keyword(trimmed, "hyp") {
            let (id, body) = rest
                .split_once(':')
                .ok_or_else(|| syntax("expected 'hyp ID : FORMULA'".into()))?;
            let id = ident(id.trim()).ok_or_else(|| syntax(format!("bad hypothesis id {id:?}")))?;
            if hyps.iter().any(|(h, _)| h == id) {
                return Err(syntax(format!("hypothesis {id} declared twice")));
            }
            hyps.push((id.to_string(), formula(body)?));
        } else if let Some(rest) = header(trimmed, "goal") {
            if goal.is_some() {
                return Err(syntax("goal declared twice".into()));
            }
            goal = Some(formula(rest)?);
        } else if let Some(rest) = header(trimmed, "conditions") {
            conditions = parse_condition_set(rest).map_err(|source| ProofFileError::Conditions { line: ln, source })?;
        } else {
            let (num, rest) = trimmed
                .split_once(':')
                .ok_or_else(|| syntax("expected 'N : FORMULA ; JUSTIFICATION'".into()))?;
            let index: usize = num
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad line number {:?}", num.trim())))?;
            let (body, just) = rest
                .split_once(';')
                .ok_or_else(|| syntax("missing ';' before justification".into()))?;
            lines.push(Line {
                index,
                formula: formula(body)?,
                just: justification(just.trim(), ln)?,
            });
        }
    }
    let goal = goal.ok_or(ProofFileError::Syntax {
        line: text.lines().count(),
        message: "missing goal line".into(),
    })?;
    Ok(Proof {
        conditions,
        env,
        hyps,
        lines,
        goal,
    })
}

/// `word` followed by whitespace.
fn keyword<'a>(line: &'a str, word: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(word)?;
    rest.starts_with(char::is_whitespace).then_some(rest)
}

/// `word` followed by optional whitespace and `:`.
fn header<'a>(line: &'a str, word: &str) -> Option<&'a str> {
    line.strip_prefix(word)?.trim_start().strip_prefix(':')
}

fn ident(s: &str) -> Option<&str> {
    let mut chars = s.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
    ok.then_some(s)
}

fn justification(text: &str, ln: usize) -> Result<Justification, ProofFileError> {
    let syntax = |message: String| ProofFileError::Syntax { line: ln, message };
    let (rule, rest) = text
        .split_once(char::is_whitespace)
        .map(|(r, rest)| (r, rest.trim()))
        .unwrap_or((text, ""));
    let nums = |count: usize| -> Result<Vec<usize>, ProofFileError> {
        let parts: Vec<&str> = rest.split_whitespace().collect();
        if parts.len() != count {
            return Err(syntax(format!("{rule} takes {count} line number(s)")));
        }
        parts
            .iter()
            .map(|p| p.parse().map_err(|_| syntax(format!("bad line number {p:?}"))))
            .collect()
    };
    let name = || -> Result<String, ProofFileError> {
        ident(rest)
            .map(str::to_string)
            .ok_or_else(|| syntax(format!("{rule} expects an identifier, got {rest:?}")))
    };
    Ok(match rule {
        "taut" if rest.is_empty() => Justification::Taut,
        "mp" => {
            let n = nums(2)?;
            Justification::Mp(n[0], n[1])
        }
        "nec" => Justification::Nec(nums(1)?[0]),
        "re" => Justification::Re(nums(1)?[0]),
        "rm" => Justification::Rm(nums(1)?[0]),
        "ros" => Justification::Ros(nums(1)?[0]),
        "fix" => Justification::Fix(name()?),
        "hyp" => Justification::Hyp(name()?),
        "ax" => {
            let (tag, args) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
            let tag: AxiomTag = tag
                .parse()
                .map_err(|source| ProofFileError::Conditions { line: ln, source })?;
            let args = if args.trim().is_empty() {
                Vec::new()
            } else {
                args.split(";;")
                    .map(|a| Formula::parse(a.trim()).map_err(|source| ProofFileError::Formula { line: ln, source }))
                    .collect::<Result<_, _>>()?
            };
            Justification::Ax(tag, args)
        }
        _ => return Err(syntax(format!("unknown justification {text:?}"))),
    })
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.conditions.is_empty() {
            writeln!(f, "conditions : {}", self.conditions)?;
        }
        for (name, def) in self.env.iter() {
            writeln!(f, "fix {name} := {def}")?;
        }
        for (id, h) in &self.hyps {
            writeln!(f, "hyp {id} : {h}")?;
        }
        for line in &self.lines {
            writeln!(f, "{} : {} ; {}", line.index, line.formula, line.just)?;
        }
        writeln!(f, "goal : {}", self.goal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_proof;

    const SAMPLE: &str = "\
# necessitation from a hypothesis
conditions : C
hyp h : p
1 : p ; hyp h
2 : []p ; nec 1
3 : []p & []p -> [](p & p) ; ax C p ;; p
4 : []p -> []p -> [](p & p) ; taut
   # indented comment
goal : []p -> []p -> [](p & p)
";

    #[test]
    fn parses_and_prints() {
        let p = parse_proof(SAMPLE).unwrap();
        assert_eq!(p.lines.len(), 4);
        assert_eq!(p.conditions.to_string(), "C");
        assert_eq!(
            p.lines[2].just,
            Justification::Ax(AxiomTag::C, vec![Formula::atom("p"), Formula::atom("p")])
        );
        let again = parse_proof(&p.to_string()).unwrap();
        assert_eq!(again, p);
        // Line 4 is a tautology only when the boxes are exactly as written.
        assert!(!check_proof(&p, &p.conditions).accepted());
    }

    #[test]
    fn fix_definitions() {
        let text = "fix c := ~[]#c\n1 : #c <-> ~[]#c ; fix c\ngoal : #c <-> ~[]#c\n";
        let p = parse_proof(text).unwrap();
        assert!(check_proof(&p, &ConditionSet::empty()).accepted());
        let bad = "fix c := #c\ngoal : top\n";
        assert!(matches!(parse_proof(bad), Err(ProofFileError::Env { line: 1, .. })));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_proof("1 : p ; frob 2\ngoal : p\n"),
            Err(ProofFileError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_proof("1 : p ; taut\n"),
            Err(ProofFileError::Syntax { .. })
        ));
        assert!(matches!(
            parse_proof("1 : p & ; taut\ngoal : p\n"),
            Err(ProofFileError::Formula { line: 1, .. })
        ));
        assert!(matches!(
            parse_proof("1 : p ; ax Q p\ngoal : p\n"),
            Err(ProofFileError::Conditions { line: 1, .. })
        ));
        assert!(matches!(
            parse_proof("1 : p ; mp 1\ngoal : p\n"),
            Err(ProofFileError::Syntax { .. })
        ));
    }
}
