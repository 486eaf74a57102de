use thiserror::Error;

use super::{Justification, Line, Proof};
use crate::conditions::{axiom_instance, AxiomTag, Condition, ConditionSet, InstanceError};
use crate::modal::{taut_check, EnvError, FixedPointEnv, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("{0} is not a tautology")]
    NotATautology(Formula),
    #[error("{goal} is not a propositional consequence of the given lines")]
    NotAConsequence { goal: Formula },
    #[error("{rule} does not apply to {premise}")]
    Shape { rule: &'static str, premise: Formula },
    #[error("unknown hypothesis {0}")]
    UnknownHypothesis(String),
    #[error("unknown constant #{0}")]
    UnknownConstant(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Incremental proof construction.
///
/// Every push computes its own conclusion, so a builder can only produce
/// well-shaped lines. The `route` condition set decides how the derived
/// helpers ([`box_imp`](Self::box_imp), [`box_iff`](Self::box_iff),
/// [`conj_axiom`](Self::conj_axiom), [`rosser`](Self::rosser)) are
/// realised; when the route offers no alternative they fall back to the
/// native rule, so the checker reports exactly which condition is missing.
#[derive(Clone, Debug)]
pub struct ProofBuilder {
    route: ConditionSet,
    env: FixedPointEnv,
    hyps: Vec<(String, Formula)>,
    lines: Vec<Line>,
}

impl ProofBuilder {
    pub fn new(route: ConditionSet, env: FixedPointEnv) -> Self {
        Self {
            route,
            env,
            hyps: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// Continues an existing proof. Its goal is dropped.
    pub fn from_proof(proof: &Proof) -> Self {
        Self {
            route: proof.conditions.clone(),
            env: proof.env.clone(),
            hyps: proof.hyps.clone(),
            lines: proof.lines.clone(),
        }
    }

    pub fn route(&self) -> &ConditionSet {
        &self.route
    }

    pub fn env(&self) -> &FixedPointEnv {
        &self.env
    }

    pub fn declare_hyp(&mut self, id: &str, f: Formula) {
        self.hyps.retain(|(h, _)| h != id);
        self.hyps.push((id.to_string(), f));
    }

    pub fn formula(&self, index: usize) -> &Formula {
        &self.find(index).formula
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    fn find(&self, index: usize) -> &Line {
        let k = self
            .lines
            .binary_search_by_key(&index, |l| l.index)
            .unwrap_or_else(|_| panic!("no line {index} in builder"));
        &self.lines[k]
    }

    fn push(&mut self, formula: Formula, just: Justification) -> usize {
        let index = self.lines.last().map_or(1, |l| l.index + 1);
        self.lines.push(Line { index, formula, just });
        index
    }

    pub fn hyp(&mut self, id: &str) -> Result<usize, BuildError> {
        let f = self
            .hyps
            .iter()
            .find(|(h, _)| h == id)
            .map(|(_, f)| f.clone())
            .ok_or_else(|| BuildError::UnknownHypothesis(id.to_string()))?;
        Ok(self.push(f, Justification::Hyp(id.to_string())))
    }

    pub fn taut(&mut self, f: Formula) -> Result<usize, BuildError> {
        if !taut_check(&f) {
            return Err(BuildError::NotATautology(f));
        }
        Ok(self.push(f, Justification::Taut))
    }

    /// From `a` (line `i`) and `a -> b` (line `j`), conclude `b`.
    pub fn mp(&mut self, i: usize, j: usize) -> Result<usize, BuildError> {
        let a = self.formula(i).clone();
        let imp = self.formula(j).clone();
        match imp.as_imp() {
            Some((lhs, rhs)) if *lhs == a => {
                let b = rhs.clone();
                Ok(self.push(b, Justification::Mp(i, j)))
            }
            _ => Err(BuildError::Shape {
                rule: "mp",
                premise: imp,
            }),
        }
    }

    pub fn nec(&mut self, i: usize) -> usize {
        let f = Formula::boxed(self.formula(i).clone());
        self.push(f, Justification::Nec(i))
    }

    pub fn re(&mut self, i: usize) -> Result<usize, BuildError> {
        let premise = self.formula(i).clone();
        let (a, b) = premise.as_iff().ok_or(BuildError::Shape {
            rule: "re",
            premise: premise.clone(),
        })?;
        let f = Formula::iff(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
        Ok(self.push(f, Justification::Re(i)))
    }

    pub fn rm(&mut self, i: usize) -> Result<usize, BuildError> {
        let premise = self.formula(i).clone();
        let (a, b) = premise.as_imp().ok_or(BuildError::Shape {
            rule: "rm",
            premise: premise.clone(),
        })?;
        let f = Formula::imp(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
        Ok(self.push(f, Justification::Rm(i)))
    }

    pub fn ros(&mut self, i: usize) -> Result<usize, BuildError> {
        let premise = self.formula(i).clone();
        let a = premise.as_not().ok_or(BuildError::Shape {
            rule: "ros",
            premise: premise.clone(),
        })?;
        let f = Formula::not(Formula::boxed(a.clone()));
        Ok(self.push(f, Justification::Ros(i)))
    }

    pub fn ax(&mut self, tag: AxiomTag, args: Vec<Formula>) -> Result<usize, BuildError> {
        let f = axiom_instance(tag, &args, &self.env)?;
        Ok(self.push(f, Justification::Ax(tag, args)))
    }

    pub fn fix(&mut self, c: &str) -> Result<usize, BuildError> {
        let f = self
            .env
            .fix_axiom(c)
            .ok_or_else(|| BuildError::UnknownConstant(c.to_string()))?;
        Ok(self.push(f, Justification::Fix(c.to_string())))
    }

    /// Derives `goal` from the `from` lines by one tautology
    /// `L1 -> (L2 -> ... -> goal)` and a chain of modus ponens.
    pub fn prop_close(&mut self, goal: Formula, from: &[usize]) -> Result<usize, BuildError> {
        let premises: Vec<Formula> = from.iter().map(|&i| self.formula(i).clone()).collect();
        let chain = premises
            .iter()
            .rev()
            .fold(goal.clone(), |acc, p| Formula::imp(p.clone(), acc));
        if !taut_check(&chain) {
            return Err(BuildError::NotAConsequence { goal });
        }
        let mut cur = self.push(chain, Justification::Taut);
        for &i in from {
            cur = self.mp(i, cur)?;
        }
        Ok(cur)
    }

    /// From `a -> b` (line `i`), derive `[]a -> []b`: by M if routed, else
    /// by necessitation and K.
    pub fn box_imp(&mut self, i: usize) -> Result<usize, BuildError> {
        if !self.route.contains(Condition::M) && self.route.contains(Condition::K) {
            let premise = self.formula(i).clone();
            let (a, b) = premise.as_imp().ok_or(BuildError::Shape {
                rule: "rm",
                premise: premise.clone(),
            })?;
            let boxed = self.nec(i);
            let k = self.ax(AxiomTag::K, vec![a.clone(), b.clone()])?;
            return self.mp(boxed, k);
        }
        self.rm(i)
    }

    /// From `a <-> b` (line `i`), derive `[]a <-> []b`: by E if routed, else
    /// through both directions of [`box_imp`](Self::box_imp).
    pub fn box_iff(&mut self, i: usize) -> Result<usize, BuildError> {
        let via_imp = self.route.contains(Condition::M) || self.route.contains(Condition::K);
        if !self.route.contains(Condition::E) && via_imp {
            let premise = self.formula(i).clone();
            let (a, b) = premise.as_iff().ok_or(BuildError::Shape {
                rule: "re",
                premise: premise.clone(),
            })?;
            let fwd = self.prop_close(Formula::imp(a.clone(), b.clone()), &[i])?;
            let fwd = self.box_imp(fwd)?;
            let bwd = self.prop_close(Formula::imp(b.clone(), a.clone()), &[i])?;
            let bwd = self.box_imp(bwd)?;
            let goal = Formula::iff(Formula::boxed(a.clone()), Formula::boxed(b.clone()));
            return self.prop_close(goal, &[fwd, bwd]);
        }
        self.re(i)
    }

    /// The C instance `[]a & []b -> [](a & b)`: the axiom if routed, else
    /// derived from K.
    pub fn conj_axiom(&mut self, a: &Formula, b: &Formula) -> Result<usize, BuildError> {
        if !self.route.contains(Condition::C) && self.route.contains(Condition::K) {
            let ab = Formula::and(a.clone(), b.clone());
            let b_ab = Formula::imp(b.clone(), ab.clone());
            let t = self.taut(Formula::imp(a.clone(), b_ab.clone()))?;
            let nt = self.nec(t);
            let k1 = self.ax(AxiomTag::K, vec![a.clone(), b_ab])?;
            let l1 = self.mp(nt, k1)?;
            let k2 = self.ax(AxiomTag::K, vec![b.clone(), ab.clone()])?;
            let goal = axiom_instance(AxiomTag::C, &[a.clone(), b.clone()], &self.env)?;
            return self.prop_close(goal, &[l1, k2]);
        }
        self.ax(AxiomTag::C, vec![a.clone(), b.clone()])
    }

    /// From `~a` (line `i`), derive `~[]a`: by Ros if routed; otherwise, given
    /// a line `conl` proving `~[]bot`, through `a <-> bot` and
    /// [`box_iff`](Self::box_iff).
    pub fn rosser(&mut self, i: usize, conl: Option<usize>) -> Result<usize, BuildError> {
        let r = &self.route;
        let can_lift = r.contains(Condition::E) || r.contains(Condition::M) || r.contains(Condition::K);
        if let (false, Some(conl), true) = (r.contains(Condition::Ros), conl, can_lift) {
            let premise = self.formula(i).clone();
            let a = premise.as_not().ok_or(BuildError::Shape {
                rule: "ros",
                premise: premise.clone(),
            })?;
            let a = a.clone();
            let eq = self.prop_close(Formula::iff(a.clone(), Formula::Bot), &[i])?;
            let boxed = self.box_iff(eq)?;
            return self.prop_close(Formula::not(Formula::boxed(a)), &[boxed, conl]);
        }
        self.ros(i)
    }

    /// Finishes with the last line as the goal.
    pub fn finish(self) -> Proof {
        let goal = self.lines.last().map(|l| l.formula.clone()).unwrap_or(Formula::Top);
        self.into_proof(goal)
    }

    /// Finishes with line `index`, which must be the last line, as the goal.
    pub fn finish_at(self, index: usize) -> Proof {
        debug_assert_eq!(self.lines.last().map(|l| l.index), Some(index));
        let goal = self.formula(index).clone();
        self.into_proof(goal)
    }

    /// Finishes with an explicitly declared goal, which need not match.
    pub fn finish_with_goal(self, goal: Formula) -> Proof {
        self.into_proof(goal)
    }

    fn into_proof(self, goal: Formula) -> Proof {
        Proof {
            conditions: self.route,
            env: self.env,
            hyps: self.hyps,
            lines: self.lines,
            goal,
        }
    }
}

/// Appends a propositional derivation of `goal` from the lines `from` of
/// `partial`; the result's goal is `goal`.
pub fn prop_close(goal: Formula, from: &[usize], partial: &Proof) -> Result<Proof, BuildError> {
    let mut b = ProofBuilder::from_proof(partial);
    for &i in from {
        if partial.line(i).is_none() {
            return Err(BuildError::BadParam(format!("no line {i}")));
        }
    }
    b.prop_close(goal, from)?;
    Ok(b.finish())
}
