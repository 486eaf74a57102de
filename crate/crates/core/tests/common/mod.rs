//! Generators and brute-force oracles shared by the integration tests and
//! the acceptance runner.
#![allow(dead_code)]

use std::collections::BTreeMap;

use g2ws::arith::{QfFormula, Term};
use g2ws::modal::Formula;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f(s: &str) -> Formula {
    Formula::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// A random constant-free modal formula over `atoms`.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: u32, atoms: &[&str]) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, d, atoms)),
        1 => Formula::boxed(random_formula(rng, d, atoms)),
        2 => Formula::and(random_formula(rng, d, atoms), random_formula(rng, d, atoms)),
        3 => Formula::or(random_formula(rng, d, atoms), random_formula(rng, d, atoms)),
        4 | 5 => Formula::imp(random_formula(rng, d, atoms), random_formula(rng, d, atoms)),
        _ => Formula::iff(random_formula(rng, d, atoms), random_formula(rng, d, atoms)),
    }
}

/// A random member of the boxed Sigma_1 class, without constants.
pub fn random_sigma(rng: &mut ChaCha8Rng, depth: u32, atoms: &[&str]) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..6) {
            0 => Formula::Bot,
            1 => Formula::Top,
            _ => Formula::boxed(random_formula(rng, 2, atoms)),
        };
    }
    let (a, b) = (random_sigma(rng, depth - 1, atoms), random_sigma(rng, depth - 1, atoms));
    if rng.gen_bool(0.5) {
        Formula::and(a, b)
    } else {
        Formula::or(a, b)
    }
}

fn substitute(schema: &Formula, parts: &[Formula]) -> Formula {
    match schema {
        Formula::Atom(a) => {
            let i = (a.as_bytes()[0] - b'a') as usize;
            parts[i].clone()
        }
        Formula::Not(x) => Formula::not(substitute(x, parts)),
        Formula::Box(x) => Formula::boxed(substitute(x, parts)),
        Formula::And(x, y) => Formula::and(substitute(x, parts), substitute(y, parts)),
        Formula::Or(x, y) => Formula::or(substitute(x, parts), substitute(y, parts)),
        Formula::Imp(x, y) => Formula::imp(substitute(x, parts), substitute(y, parts)),
        Formula::Iff(x, y) => Formula::iff(substitute(x, parts), substitute(y, parts)),
        other => other.clone(),
    }
}

/// Mixture for the tautology oracle: plain random formulas, substitution
/// instances of tautologous schemata, and near misses of those schemata.
pub fn taut_corpus_formula(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Formula {
    const GOOD: [&str; 8] = [
        "a | ~a",
        "a -> b -> a",
        "(a -> b -> c) -> (a -> b) -> a -> c",
        "(a & b) <-> (b & a)",
        "~(a & b) <-> ~a | ~b",
        "((a -> b) -> a) -> a",
        "(a <-> b) -> (b <-> a)",
        "a & (b | c) <-> a & b | a & c",
    ];
    const NEAR: [&str; 6] = [
        "a -> a & b",
        "(a -> b) -> b -> a",
        "a | b -> a",
        "(a <-> b) -> a",
        "~(a & b) <-> ~a & ~b",
        "((a -> b) -> b) -> a",
    ];
    let parts: Vec<Formula> = (0..3).map(|_| random_formula(rng, 2, atoms)).collect();
    match rng.gen_range(0..3) {
        0 => random_formula(rng, 4, atoms),
        1 => substitute(&f(GOOD[rng.gen_range(0..GOOD.len())]), &parts),
        _ => substitute(&f(NEAR[rng.gen_range(0..NEAR.len())]), &parts),
    }
}

/// Maximal non-propositional subformulas, deduplicated structurally.
pub fn opaque_parts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::Bot | Formula::Top => {}
        Formula::Atom(_) | Formula::Const(_) | Formula::Box(_) => {
            if !out.contains(f) {
                out.push(f.clone());
            }
        }
        Formula::Not(a) => opaque_parts(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            opaque_parts(a, out);
            opaque_parts(b, out);
        }
    }
}

fn eval_row(f: &Formula, parts: &[Formula], row: u32) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Top => true,
        Formula::Atom(_) | Formula::Const(_) | Formula::Box(_) => {
            let i = parts.iter().position(|p| p == f).expect("collected");
            row >> i & 1 == 1
        }
        Formula::Not(a) => !eval_row(a, parts, row),
        Formula::And(a, b) => eval_row(a, parts, row) && eval_row(b, parts, row),
        Formula::Or(a, b) => eval_row(a, parts, row) || eval_row(b, parts, row),
        Formula::Imp(a, b) => !eval_row(a, parts, row) || eval_row(b, parts, row),
        Formula::Iff(a, b) => eval_row(a, parts, row) == eval_row(b, parts, row),
    }
}

/// Row-by-row truth table over the opaque parts.
pub fn brute_force_taut(f: &Formula) -> bool {
    let mut parts = Vec::new();
    opaque_parts(f, &mut parts);
    assert!(parts.len() <= 16, "too many opaque parts");
    (0..1u32 << parts.len()).all(|row| eval_row(f, &parts, row))
}

pub fn random_term(rng: &mut ChaCha8Rng, depth: u32, vars: &[&str]) -> Term {
    if depth == 0 || rng.gen_ratio(2, 5) {
        return match rng.gen_range(0..5) {
            0 => Term::Zero,
            1 => Term::numeral(rng.gen_range(1..3)),
            _ => Term::var(vars[rng.gen_range(0..vars.len())]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 | 1 => Term::succ(random_term(rng, d, vars)),
        2 | 3 => Term::plus(random_term(rng, d, vars), random_term(rng, d, vars)),
        _ => Term::times(random_term(rng, d, vars), random_term(rng, d, vars)),
    }
}

/// A random quantifier-free formula of connective depth at most `depth`.
pub fn random_qf(rng: &mut ChaCha8Rng, depth: u32, vars: &[&str]) -> QfFormula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        let (a, b) = (random_term(rng, 2, vars), random_term(rng, 2, vars));
        return if rng.gen_bool(0.5) {
            QfFormula::eq(a, b)
        } else {
            QfFormula::le(a, b)
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => QfFormula::not(random_qf(rng, d, vars)),
        1 | 2 => QfFormula::and(random_qf(rng, d, vars), random_qf(rng, d, vars)),
        _ => QfFormula::or(random_qf(rng, d, vars), random_qf(rng, d, vars)),
    }
}

pub fn env(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}
