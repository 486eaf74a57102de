//! Semantic cross-checks of kernel proofs against finite models.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{family_report, family_universe, full_set, members, Family, NeighborhoodModel};
use crate::conditions::{Condition, ConditionSet};
use crate::kernel::{Justification, Proof};
use crate::modal::Formula;

/// A line that is evaluable in the model but not globally true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub line: usize,
    pub formula: Formula,
}

/// Lines whose whole dependency cone is free of fixed-point constants, so
/// their truth in a model follows from the soundness of each step.
fn evaluable_lines(proof: &Proof) -> BTreeMap<usize, bool> {
    let mut ok: BTreeMap<usize, bool> = BTreeMap::new();
    for line in &proof.lines {
        let mut e = !line.formula.has_constants() && !matches!(line.just, Justification::Fix(_));
        if let Justification::Ax(_, args) = &line.just {
            e &= args.iter().all(|a| !a.has_constants());
        }
        e &= line.just.premises().iter().all(|p| ok.get(p).copied().unwrap_or(false));
        ok.insert(line.index, e);
    }
    ok
}

fn all_atoms_valued(m: &NeighborhoodModel, f: &Formula) -> bool {
    f.atoms().iter().all(|a| m.valuation().contains_key(a))
}

/// Whether `m` satisfies everything the proof may rely on under `cs`:
/// the frame conditions of the enabled rules and axioms (necessitation is
/// always on), global validity of its evaluable non-frame axiom lines
/// (D3, S1C, S1Cm), and global validity of its evaluable hypotheses.
pub fn admits(m: &NeighborhoodModel, proof: &Proof, cs: &ConditionSet) -> bool {
    let r = m.closure_report();
    let frame_ok = r.contains_unit
        && cs.iter().all(|c| match c {
            Condition::M => r.supplemented,
            Condition::C => r.intersection_closed,
            Condition::K => r.supplemented && r.intersection_closed,
            Condition::Ros => r.empty_free,
            Condition::E | Condition::S1C | Condition::S1Cm | Condition::D3(..) => true,
        });
    if !frame_ok {
        return false;
    }
    let evaluable = evaluable_lines(proof);
    for line in &proof.lines {
        if !evaluable[&line.index] {
            continue;
        }
        if !all_atoms_valued(m, &line.formula) {
            return false;
        }
        let must_hold = matches!(line.just, Justification::Hyp(_))
            || matches!(
                line.just.required_condition(),
                Some(Condition::D3(..) | Condition::S1C | Condition::S1Cm)
            );
        if must_hold && !m.globally_valid(&line.formula).unwrap_or(false) {
            return false;
        }
    }
    true
}

/// Evaluable lines of `proof` that fail somewhere in `m`.
pub fn semantic_violations(m: &NeighborhoodModel, proof: &Proof) -> Vec<Violation> {
    let evaluable = evaluable_lines(proof);
    proof
        .lines
        .iter()
        .filter(|l| evaluable[&l.index])
        .filter(|l| !m.globally_valid(&l.formula).unwrap_or(false))
        .map(|l| Violation {
            line: l.index,
            formula: l.formula.clone(),
        })
        .collect()
}

fn close(mut fam: Family, n: usize, supplemented: bool, intersections: bool, unit: bool) -> Family {
    let full = full_set(n);
    if unit {
        fam |= 1 << full;
    }
    loop {
        let before = fam;
        let sets = members(fam);
        if supplemented {
            for &x in &sets {
                for y in 0..=full {
                    if y & x == x {
                        fam |= 1 << y;
                    }
                }
            }
        }
        if intersections {
            for &x in &sets {
                for &y in &sets {
                    fam |= 1 << (x & y);
                }
            }
        }
        if fam == before {
            return fam;
        }
    }
}

/// A deterministic pool of small models (1 to 3 worlds, atoms `p, q, r`).
/// Model `i` is pushed towards a closure profile chosen from the bits of
/// `i`; the actual properties are whatever `closure_report` says.
pub fn model_pool(count: usize, seed: u64) -> Vec<NeighborhoodModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            let profile = i / 3;
            let supp = profile & 1 == 1;
            let inter = profile & 2 == 2;
            let unit = profile & 4 != 4;
            let empty_free = profile & 8 == 8;
            let universe = family_universe(n);
            let fams = (0..n)
                .map(|_| {
                    for _ in 0..32 {
                        // Sparse random families keep closures from saturating.
                        let raw: Family = rng.gen::<u64>() & rng.gen::<u64>() & universe;
                        let fam = close(raw, n, supp, inter, unit);
                        if !empty_free || family_report(fam, n).empty_free {
                            return fam;
                        }
                    }
                    1 << full_set(n)
                })
                .collect();
            let val = ["p", "q", "r"]
                .iter()
                .map(|a| (a.to_string(), rng.gen::<u64>() & full_set(n)))
                .collect();
            NeighborhoodModel::from_families(n, fams, val).expect("pool model")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_is_deterministic_and_varied() {
        let a = model_pool(60, 7);
        assert_eq!(a, model_pool(60, 7));
        assert!(a.iter().all(|m| m.world_count() <= 3));
        let reports: Vec<_> = a.iter().map(|m| m.closure_report()).collect();
        assert!(reports
            .iter()
            .any(|r| r.supplemented && r.intersection_closed && r.contains_unit));
        assert!(reports.iter().any(|r| r.contains_unit && r.empty_free));
        assert!(reports
            .iter()
            .any(|r| r.contains_unit && r.intersection_closed && !r.supplemented));
        assert!(reports.iter().any(|r| !r.contains_unit));
    }
}
