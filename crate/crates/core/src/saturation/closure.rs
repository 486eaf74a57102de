use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use super::{SatFormula, ToyTheory};

pub type FormulaSet = BTreeSet<SatFormula>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("{formula} has code {code}, outside F_{m}")]
    NotWithinUniverse { formula: SatFormula, code: u128, m: u64 },
}

/// Formulas of `F_m` with a table proof of code at most `m`.
pub fn stratum0(m: u64, th: &ToyTheory) -> FormulaSet {
    th.proofs()
        .range(..=m)
        .map(|(_, f)| f)
        .filter(|f| th.in_universe(f, m))
        .cloned()
        .collect()
}

/// One application of the four clauses: carry-over, `φ↔ψ` proved with code
/// at most `m` and `ψ ∈ X`, conjunctions, and `P`-images, all cut to `F_m`.
///
/// Only the literal orientation `φ↔ψ` with `ψ ∈ X` admits `φ`.
pub fn step(m: u64, x: &FormulaSet, th: &ToyTheory) -> Result<FormulaSet, StepError> {
    if let Some(f) = x.iter().find(|f| !th.in_universe(f, m)) {
        return Err(StepError::NotWithinUniverse {
            formula: f.clone(),
            code: th.gn(f),
            m,
        });
    }
    let mut out = x.clone();
    for (p, lhs, rhs) in th.biconditionals() {
        if p <= m && x.contains(rhs) && th.in_universe(lhs, m) {
            out.insert(lhs.clone());
        }
    }
    for a in x {
        for b in x {
            let c = SatFormula::and(a.clone(), b.clone());
            if th.in_universe(&c, m) {
                out.insert(c);
            }
        }
        let d = SatFormula::dagger(a.clone());
        if th.in_universe(&d, m) {
            out.insert(d);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationState {
    pub m: u64,
    /// `X_{m,0} ⊆ … ⊆ X_{m,k*}`.
    pub strata: Vec<FormulaSet>,
    pub k_star: usize,
}

impl SaturationState {
    /// `X_{m,k}`; constant from `k*` on.
    pub fn stratum(&self, k: usize) -> &FormulaSet {
        &self.strata[k.min(self.k_star)]
    }

    /// `X_m`.
    pub fn fixpoint(&self) -> &FormulaSet {
        &self.strata[self.k_star]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.strata.iter().map(BTreeSet::len).collect()
    }
}

/// Iterates [`step`] from [`stratum0`] to the fixpoint. Each proper step adds
/// a formula of `F_m`, which has at most `m` members, so `k* <= m`; the
/// result is checked against `X_{m,m}` computed by exactly `m` steps.
pub fn saturate(m: u64, th: &ToyTheory) -> SaturationState {
    let mut strata = vec![stratum0(m, th)];
    loop {
        let last = strata.last().expect("nonempty");
        let next = step(m, last, th).expect("strata stay inside F_m");
        if &next == last {
            break;
        }
        strata.push(next);
    }
    let k_star = strata.len() - 1;
    assert!(k_star as u64 <= m, "k* = {k_star} exceeds m = {m}");
    let mut x = stratum0(m, th);
    for _ in 0..m {
        x = step(m, &x, th).expect("strata stay inside F_m");
    }
    assert_eq!(&x, &strata[k_star], "X_{{m,m}} differs from the fixpoint at m = {m}");
    SaturationState { m, strata, k_star }
}

/// [`saturate`] for every `m` in `lo..=hi`, in parallel, ordered by `m`.
pub fn saturate_range(th: &ToyTheory, lo: u64, hi: u64) -> Vec<SaturationState> {
    (lo..=hi).into_par_iter().map(|m| saturate(m, th)).collect()
}

/// `P(f)` holds iff some `m <= bound` has `f ∈ X_m` and `ξ ∉ X_m`.
pub fn pr_dagger(f: &SatFormula, th: &ToyTheory, bound: u64) -> bool {
    (0..=bound).into_par_iter().any(|m| {
        let s = saturate(m, th);
        s.fixpoint().contains(f) && !s.fixpoint().contains(th.xi())
    })
}

/// Membership in the closure of the table under the four clauses with no
/// universe or proof-code cuts, within `depth` rounds. Goal-directed, so the
/// (infinite) closure is never materialized.
pub struct ClosureOracle<'a> {
    th: &'a ToyTheory,
    memo: HashMap<(SatFormula, usize), bool>,
}

pub fn oracle_closure(th: &ToyTheory) -> ClosureOracle<'_> {
    ClosureOracle {
        th,
        memo: HashMap::new(),
    }
}

impl ClosureOracle<'_> {
    pub fn derivable(&mut self, f: &SatFormula, depth: usize) -> bool {
        if self.th.proofs().values().any(|g| g == f) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        if let Some(&v) = self.memo.get(&(f.clone(), depth)) {
            return v;
        }
        let th = self.th;
        let mut v = th
            .biconditionals()
            .filter(|(_, l, _)| *l == f)
            .map(|(_, _, r)| r.clone())
            .collect::<Vec<_>>()
            .iter()
            .any(|r| self.derivable(r, depth - 1));
        if !v {
            v = match f {
                SatFormula::And(a, b) => self.derivable(a, depth - 1) && self.derivable(b, depth - 1),
                SatFormula::P(a) => self.derivable(a, depth - 1),
                _ => false,
            };
        }
        self.memo.insert((f.clone(), depth), v);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub bound: u64,
    /// Total number of `(m, φ)` memberships checked.
    pub checked: usize,
    /// `(m, φ)` with `φ ∈ X_m` but outside the oracle closure.
    pub violations: Vec<(u64, SatFormula)>,
    /// Every `m` at which `ξ ∈ X_m`.
    pub xi_members: Vec<u64>,
}

impl AuditReport {
    pub fn sound(&self) -> bool {
        self.violations.is_empty() && self.xi_members.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "audit\tbound={}\tchecked={}\tviolations={}\txi_members={}",
            self.bound,
            self.checked,
            self.violations.len(),
            self.xi_members.len()
        )?;
        for (m, phi) in &self.violations {
            writeln!(f, "violation\tm={m}\t{phi}")?;
        }
        Ok(())
    }
}

/// Checks every member of every `X_m`, `m <= bound`, against the oracle
/// closure at depth `m` (a member of `X_{m,k}` is derivable in `k` rounds).
pub fn soundness_audit(th: &ToyTheory, bound: u64) -> AuditReport {
    let states = saturate_range(th, 0, bound);
    let mut oracle = oracle_closure(th);
    let mut report = AuditReport {
        bound,
        checked: 0,
        violations: vec![],
        xi_members: vec![],
    };
    for s in &states {
        for phi in s.fixpoint() {
            report.checked += 1;
            if !oracle.derivable(phi, s.m as usize) {
                report.violations.push((s.m, phi.clone()));
            }
        }
        if s.fixpoint().contains(th.xi()) {
            report.xi_members.push(s.m);
        }
    }
    report
}
