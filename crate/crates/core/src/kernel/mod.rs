//! Hilbert-style proof checking.
//!
//! A [`Proof`] carries its own header: the fixed-point environment, the
//! named hypotheses, and the condition set it was built for. The checker
//! takes the condition set to check against separately so the same proof can
//! be replayed under smaller or larger sets.

mod builder;
mod file;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::conditions::{axiom_instance, AxiomTag, Condition, ConditionSet};
use crate::modal::{taut_check, FixedPointEnv, Formula};

pub use builder::{prop_close, BuildError, ProofBuilder};
pub use file::{parse_proof, ProofFileError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Taut,
    /// `Mp(i, j)`: line `j` is `line i -> this`.
    Mp(usize, usize),
    Nec(usize),
    Re(usize),
    Rm(usize),
    Ros(usize),
    Ax(AxiomTag, Vec<Formula>),
    Fix(String),
    Hyp(String),
}

impl Justification {
    /// Short rule name used in statistics and file output.
    pub fn rule_name(&self) -> &'static str {
        match self {
            Justification::Taut => "taut",
            Justification::Mp(..) => "mp",
            Justification::Nec(_) => "nec",
            Justification::Re(_) => "re",
            Justification::Rm(_) => "rm",
            Justification::Ros(_) => "ros",
            Justification::Ax(..) => "ax",
            Justification::Fix(_) => "fix",
            Justification::Hyp(_) => "hyp",
        }
    }

    /// The condition this step depends on, if any.
    pub fn required_condition(&self) -> Option<Condition> {
        match self {
            Justification::Re(_) => Some(Condition::E),
            Justification::Rm(_) => Some(Condition::M),
            Justification::Ros(_) => Some(Condition::Ros),
            Justification::Ax(tag, _) => Some(tag.condition()),
            _ => None,
        }
    }

    /// Line indices this step refers to.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Nec(i) | Justification::Re(i) | Justification::Rm(i) | Justification::Ros(i) => vec![*i],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Taut => write!(f, "taut"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::Nec(i) => write!(f, "nec {i}"),
            Justification::Re(i) => write!(f, "re {i}"),
            Justification::Rm(i) => write!(f, "rm {i}"),
            Justification::Ros(i) => write!(f, "ros {i}"),
            Justification::Ax(tag, args) => {
                write!(f, "ax {tag}")?;
                for (k, a) in args.iter().enumerate() {
                    write!(f, "{}{a}", if k == 0 { " " } else { " ;; " })?;
                }
                Ok(())
            }
            Justification::Fix(c) => write!(f, "fix {c}"),
            Justification::Hyp(id) => write!(f, "hyp {id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub index: usize,
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    /// Conditions the proof was written for. Informational; the checker is
    /// always told explicitly which set to use.
    pub conditions: ConditionSet,
    pub env: FixedPointEnv,
    pub hyps: Vec<(String, Formula)>,
    pub lines: Vec<Line>,
    pub goal: Formula,
}

impl Proof {
    pub fn hypothesis(&self, id: &str) -> Option<&Formula> {
        self.hyps.iter().find(|(h, _)| h == id).map(|(_, f)| f)
    }

    pub fn line(&self, index: usize) -> Option<&Line> {
        self.lines
            .binary_search_by_key(&index, |l| l.index)
            .ok()
            .map(|k| &self.lines[k])
    }

    /// The same proof with a hypothesis removed from the header.
    pub fn without_hypothesis(&self, id: &str) -> Proof {
        let mut out = self.clone();
        out.hyps.retain(|(h, _)| h != id);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("line {line}: rule needs condition {condition}, which is not enabled")]
    RuleDisabled { line: usize, condition: Condition },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: bad reference to {target}")]
    BadReference { line: usize, target: String },
    #[error("last line proves {found}, but the goal is {expected}")]
    GoalMismatch { expected: String, found: String },
}

impl CheckError {
    /// The offending line, when the failure is attached to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            CheckError::RuleDisabled { line, .. }
            | CheckError::Malformed { line, .. }
            | CheckError::BadReference { line, .. } => Some(*line),
            CheckError::GoalMismatch { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub failure: Option<CheckError>,
    pub line_count: usize,
    /// Rule name → number of lines using it, over the lines that validated.
    pub rules_used: BTreeMap<&'static str, usize>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "accepted")?,
            Some(e) => write!(f, "rejected: {e}")?,
        }
        write!(f, " ({} lines", self.line_count)?;
        for (rule, n) in &self.rules_used {
            write!(f, ", {rule}={n}")?;
        }
        write!(f, ")")
    }
}

/// Checks `proof` against `cs`, using the proof's own environment and
/// hypotheses.
pub fn check_proof(proof: &Proof, cs: &ConditionSet) -> CheckReport {
    let mut rules_used = BTreeMap::new();
    let failure = check_lines(proof, cs, &mut rules_used).err();
    CheckReport {
        failure,
        line_count: proof.lines.len(),
        rules_used,
    }
}

fn check_lines(
    proof: &Proof,
    cs: &ConditionSet,
    rules_used: &mut BTreeMap<&'static str, usize>,
) -> Result<(), CheckError> {
    let mut prev: Option<usize> = None;
    for (k, line) in proof.lines.iter().enumerate() {
        let n = line.index;
        if prev.is_some_and(|p| n <= p) {
            return Err(CheckError::Malformed {
                line: n,
                reason: "line indices must be strictly increasing".into(),
            });
        }
        prev = Some(n);
        if let Err(e) = proof.env.resolve(&line.formula) {
            return Err(CheckError::Malformed {
                line: n,
                reason: e.to_string(),
            });
        }
        check_line(proof, &proof.lines[..k], line, cs)?;
        *rules_used.entry(line.just.rule_name()).or_insert(0) += 1;
    }
    let found = proof.lines.last().map(|l| &l.formula);
    if found != Some(&proof.goal) {
        return Err(CheckError::GoalMismatch {
            expected: proof.goal.to_string(),
            found: found.map_or_else(|| "nothing".to_string(), |f| f.to_string()),
        });
    }
    Ok(())
}

fn check_line(proof: &Proof, earlier: &[Line], line: &Line, cs: &ConditionSet) -> Result<(), CheckError> {
    let n = line.index;
    let this = &line.formula;
    if let Some(cond) = line.just.required_condition() {
        if !cs.contains(cond) {
            return Err(CheckError::RuleDisabled {
                line: n,
                condition: cond,
            });
        }
    }
    let get = |i: usize| -> Result<&Formula, CheckError> {
        earlier
            .binary_search_by_key(&i, |l| l.index)
            .map(|k| &earlier[k].formula)
            .map_err(|_| CheckError::BadReference {
                line: n,
                target: format!("line {i}"),
            })
    };
    let malformed = |reason: String| CheckError::Malformed { line: n, reason };
    match &line.just {
        Justification::Taut => {
            if !taut_check(this) {
                return Err(malformed(format!("{this} is not a tautology")));
            }
        }
        Justification::Mp(i, j) => {
            let (a, imp) = (get(*i)?, get(*j)?);
            if *imp != Formula::imp(a.clone(), this.clone()) {
                return Err(malformed(format!("line {j} is not line {i} -> this line")));
            }
        }
        Justification::Nec(i) => {
            if *this != Formula::boxed(get(*i)?.clone()) {
                return Err(malformed(format!("not the necessitation of line {i}")));
            }
        }
        Justification::Re(i) => {
            let (a, b) = get(*i)?
                .as_iff()
                .ok_or_else(|| malformed(format!("line {i} is not a biconditional")))?;
            let want = Formula::iff(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
            if *this != want {
                return Err(malformed(format!("re of line {i} must be {want}")));
            }
        }
        Justification::Rm(i) => {
            let (a, b) = get(*i)?
                .as_imp()
                .ok_or_else(|| malformed(format!("line {i} is not an implication")))?;
            let want = Formula::imp(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
            if *this != want {
                return Err(malformed(format!("rm of line {i} must be {want}")));
            }
        }
        Justification::Ros(i) => {
            let a = get(*i)?
                .as_not()
                .ok_or_else(|| malformed(format!("line {i} is not a negation")))?;
            let want = Formula::not(Formula::boxed(a.clone()));
            if *this != want {
                return Err(malformed(format!("ros of line {i} must be {want}")));
            }
        }
        Justification::Ax(tag, args) => {
            let want = axiom_instance(*tag, args, &proof.env).map_err(|e| malformed(e.to_string()))?;
            if *this != want {
                return Err(malformed(format!("{tag} instance is {want}")));
            }
        }
        Justification::Fix(c) => {
            let want = proof.env.fix_axiom(c).ok_or_else(|| CheckError::BadReference {
                line: n,
                target: format!("constant #{c}"),
            })?;
            if *this != want {
                return Err(malformed(format!("fixed-point axiom for #{c} is {want}")));
            }
        }
        Justification::Hyp(id) => {
            let want = proof.hypothesis(id).ok_or_else(|| CheckError::BadReference {
                line: n,
                target: format!("hypothesis {id}"),
            })?;
            if this != want {
                return Err(malformed(format!("hypothesis {id} is {want}")));
            }
        }
    }
    Ok(())
}
