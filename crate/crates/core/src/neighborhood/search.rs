use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::{family_report, family_universe, full_set, ClosureFlag, Family, NeighborhoodModel, WorldSet};
use crate::modal::{taut_check, Formula};

/// Largest world count the exhaustive search accepts.
pub const MAX_SEARCH_WORLDS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub require: Vec<ClosureFlag>,
    /// Formulas that must be globally valid, e.g. D3 instances.
    pub valid: Vec<Formula>,
    /// Must fail at some world.
    pub target: Formula,
    pub max_worlds: usize,
    pub atoms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("max world count must be at least 1")]
    NoWorlds,
    #[error("exhaustive search supports at most {MAX_SEARCH_WORLDS} worlds, got {0}")]
    TooManyWorlds(usize),
    #[error("target {0} is a propositional tautology")]
    TargetValid(Formula),
    #[error("fixed-point constant #{0} cannot be used in a search")]
    Constant(String),
    #[error("atom {0} is not in the atom list")]
    UndeclaredAtom(String),
}

impl SearchSpec {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_worlds == 0 {
            return Err(SearchError::NoWorlds);
        }
        if self.max_worlds > MAX_SEARCH_WORLDS {
            return Err(SearchError::TooManyWorlds(self.max_worlds));
        }
        if taut_check(&self.target) {
            return Err(SearchError::TargetValid(self.target.clone()));
        }
        for f in self.valid.iter().chain(std::iter::once(&self.target)) {
            if let Some(c) = f.constants().into_iter().next() {
                return Err(SearchError::Constant(c));
            }
            if let Some(a) = f.atoms().into_iter().find(|a| !self.atoms.contains(a)) {
                return Err(SearchError::UndeclaredAtom(a));
            }
        }
        Ok(())
    }
}

/// All families over `n` worlds with the required closure flags, in
/// increasing bitmask order.
pub fn family_candidates(n: usize, require: &[ClosureFlag]) -> Vec<Family> {
    let universe = family_universe(n);
    (0..=universe)
        .filter(|&fam| family_report(fam, n).covers(require))
        .collect()
}

#[derive(Clone, Copy)]
enum Op {
    Const(bool),
    Atom(usize),
    Not,
    And,
    Or,
    Imp,
    Iff,
    Box,
}

fn compile(f: &Formula, atoms: &[String], out: &mut Vec<Op>) {
    match f {
        Formula::Bot => out.push(Op::Const(false)),
        Formula::Top => out.push(Op::Const(true)),
        Formula::Atom(a) => out.push(Op::Atom(atoms.iter().position(|x| x == a).expect("validated atom"))),
        Formula::Const(_) => unreachable!("validated constant-free"),
        Formula::Not(a) => {
            compile(a, atoms, out);
            out.push(Op::Not);
        }
        Formula::Box(a) => {
            compile(a, atoms, out);
            out.push(Op::Box);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            compile(a, atoms, out);
            compile(b, atoms, out);
            out.push(match f {
                Formula::And(..) => Op::And,
                Formula::Or(..) => Op::Or,
                Formula::Imp(..) => Op::Imp,
                _ => Op::Iff,
            });
        }
    }
}

fn run(code: &[Op], full: WorldSet, vals: &[WorldSet], nbhd: &[Family], stack: &mut Vec<WorldSet>) -> WorldSet {
    stack.clear();
    for op in code {
        let v = match *op {
            Op::Const(b) => {
                if b {
                    full
                } else {
                    0
                }
            }
            Op::Atom(i) => vals[i],
            Op::Not => full & !stack.pop().unwrap(),
            Op::Box => super::box_set(nbhd, stack.pop().unwrap()),
            Op::And | Op::Or | Op::Imp | Op::Iff => {
                let b = stack.pop().unwrap();
                let a = stack.pop().unwrap();
                match *op {
                    Op::And => a & b,
                    Op::Or => a | b,
                    Op::Imp => (full & !a) | b,
                    _ => full & !(a ^ b),
                }
            }
        };
        stack.push(v);
    }
    stack.pop().unwrap()
}

/// Exhaustive search in canonical order: world count ascending, then
/// valuation index, then the neighborhood map (world `a` most significant,
/// families in increasing bitmask order). The first model found is returned,
/// independently of how the work is split across threads.
pub fn countermodel_search(spec: &SearchSpec) -> Result<Option<NeighborhoodModel>, SearchError> {
    spec.validate()?;
    let mut valid_code = Vec::new();
    for f in &spec.valid {
        let mut c = Vec::new();
        compile(f, &spec.atoms, &mut c);
        valid_code.push(c);
    }
    let mut target_code = Vec::new();
    compile(&spec.target, &spec.atoms, &mut target_code);

    for n in 1..=spec.max_worlds {
        let fams = family_candidates(n, &spec.require);
        if fams.is_empty() {
            continue;
        }
        let full = full_set(n);
        let n_atoms = spec.atoms.len();
        let val_count: u64 = 1u64 << (n * n_atoms);
        let found = (0..val_count).into_par_iter().find_map_first(|v| {
            let vals: Vec<WorldSet> = (0..n_atoms).map(|i| (v >> (i * n)) & full).collect();
            let mut digits = vec![0usize; n];
            let mut nbhd: Vec<Family> = vec![fams[0]; n];
            let mut stack = Vec::new();
            loop {
                for (w, d) in digits.iter().enumerate() {
                    nbhd[w] = fams[*d];
                }
                let ok = run(&target_code, full, &vals, &nbhd, &mut stack) != full
                    && valid_code
                        .iter()
                        .all(|c| run(c, full, &vals, &nbhd, &mut stack) == full);
                if ok {
                    return Some((vals, nbhd.clone()));
                }
                // Odometer with the last world as the fastest digit.
                let mut pos = n;
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < fams.len() {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        });
        if let Some((vals, nbhd)) = found {
            let val: BTreeMap<String, WorldSet> = spec.atoms.iter().cloned().zip(vals).collect();
            let m = NeighborhoodModel::from_families(n, nbhd, val).expect("search builds valid models");
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn parse_all(items: &[&str]) -> Vec<Formula> {
    items
        .iter()
        .map(|s| Formula::parse(s).expect("built-in formula"))
        .collect()
}

/// Intersection-closed, unit-containing models validating D3 instances in
/// which monotonicity fails: the modal analog of E, C and D3 without M.
pub fn ecd3_without_m() -> SearchSpec {
    SearchSpec {
        require: vec![ClosureFlag::IntersectionClosed, ClosureFlag::ContainsUnit],
        valid: parse_all(&["[]p -> [][]p", "[](p | q) -> [][](p | q)"]),
        target: Formula::parse("[]p -> [](p | q)").expect("built-in formula"),
        max_worlds: 3,
        atoms: vec!["p".into(), "q".into()],
    }
}

/// Empty-free models falsifying a consistency instance: Ros without D.
pub fn ros_without_d() -> SearchSpec {
    SearchSpec {
        require: vec![ClosureFlag::EmptyFree],
        valid: vec![],
        target: Formula::parse("[]p -> ~[]~p").expect("built-in formula"),
        max_worlds: 2,
        atoms: vec!["p".into()],
    }
}

/// Filters validate K, so this search must come back empty.
pub fn filters_refute_k(max_worlds: usize) -> SearchSpec {
    SearchSpec {
        require: vec![
            ClosureFlag::Supplemented,
            ClosureFlag::IntersectionClosed,
            ClosureFlag::ContainsUnit,
        ],
        valid: vec![],
        target: Formula::parse("[](p -> q) -> []p -> []q").expect("built-in formula"),
        max_worlds,
        atoms: vec!["p".into(), "q".into()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = |max, target: &str| SearchSpec {
            require: vec![],
            valid: vec![],
            target: f(target),
            max_worlds: max,
            atoms: vec!["p".into()],
        };
        assert_eq!(countermodel_search(&spec(0, "[]p")), Err(SearchError::NoWorlds));
        assert_eq!(countermodel_search(&spec(5, "[]p")), Err(SearchError::TooManyWorlds(5)));
        assert!(matches!(
            countermodel_search(&spec(2, "p | ~p")),
            Err(SearchError::TargetValid(_))
        ));
        assert_eq!(
            countermodel_search(&spec(2, "[]q")),
            Err(SearchError::UndeclaredAtom("q".into()))
        );
    }

    #[test]
    fn finds_trivial_witness() {
        let spec = SearchSpec {
            require: vec![],
            valid: vec![],
            target: f("[]p"),
            max_worlds: 1,
            atoms: vec!["p".into()],
        };
        let m = countermodel_search(&spec).unwrap().unwrap();
        assert_eq!(m.world_count(), 1);
        assert!(m.neighborhoods(0).is_empty());
    }

    #[test]
    fn candidate_counts() {
        // Closure systems on a 3-element set.
        let moore = family_candidates(3, &[ClosureFlag::IntersectionClosed, ClosureFlag::ContainsUnit]);
        assert_eq!(moore.len(), 61);
        // Filters on a finite set are principal.
        let filters = family_candidates(
            3,
            &[
                ClosureFlag::Supplemented,
                ClosureFlag::IntersectionClosed,
                ClosureFlag::ContainsUnit,
            ],
        );
        assert_eq!(filters.len(), 8);
    }
}
