//! The rewrite pipeline into `∃ȳ ⋁ᵢ ⋀ⱼ z_ij = t_ij` with simple `t_ij`:
//! negation normal form, comparison elimination, term flattening, equality
//! splitting, prenexing, distribution into DNF, and padding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{eval_qf, is_simple, QfFormula, Term};

/// Intermediate formulas: equalities and (in negation normal form only)
/// comparisons and negated atoms, under `∧`, `∨` and `∃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExFormula {
    Eq(Term, Term),
    Le(Term, Term),
    NotEq(Term, Term),
    NotLe(Term, Term),
    And(Box<ExFormula>, Box<ExFormula>),
    Or(Box<ExFormula>, Box<ExFormula>),
    Exists(String, Box<ExFormula>),
}

impl ExFormula {
    fn and(a: ExFormula, b: ExFormula) -> Self {
        ExFormula::And(Box::new(a), Box::new(b))
    }

    fn or(a: ExFormula, b: ExFormula) -> Self {
        ExFormula::Or(Box::new(a), Box::new(b))
    }

    fn exists(v: String, body: ExFormula) -> Self {
        ExFormula::Exists(v, Box::new(body))
    }

    fn map_atoms(self, f: &mut impl FnMut(ExFormula) -> ExFormula) -> ExFormula {
        match self {
            ExFormula::And(a, b) => ExFormula::and(a.map_atoms(f), b.map_atoms(f)),
            ExFormula::Or(a, b) => ExFormula::or(a.map_atoms(f), b.map_atoms(f)),
            ExFormula::Exists(v, a) => ExFormula::exists(v, a.map_atoms(f)),
            atom => f(atom),
        }
    }

    /// Every atom is an equality.
    pub fn equational(&self) -> bool {
        match self {
            ExFormula::Eq(..) => true,
            ExFormula::Le(..) | ExFormula::NotEq(..) | ExFormula::NotLe(..) => false,
            ExFormula::And(a, b) | ExFormula::Or(a, b) => a.equational() && b.equational(),
            ExFormula::Exists(_, a) => a.equational(),
        }
    }

    /// Every term of every atom is simple.
    pub fn all_simple(&self) -> bool {
        match self {
            ExFormula::Eq(a, b) | ExFormula::Le(a, b) | ExFormula::NotEq(a, b) | ExFormula::NotLe(a, b) => {
                is_simple(a) && is_simple(b)
            }
            ExFormula::And(a, b) | ExFormula::Or(a, b) => a.all_simple() && b.all_simple(),
            ExFormula::Exists(_, a) => a.all_simple(),
        }
    }
}

impl fmt::Display for ExFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(x: &ExFormula) -> u8 {
            match x {
                ExFormula::Or(..) => 3,
                ExFormula::And(..) => 4,
                ExFormula::Exists(..) => 2,
                _ => 6,
            }
        }
        let child = |c: &ExFormula, parens: bool, f: &mut fmt::Formatter<'_>| {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            ExFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            ExFormula::Le(a, b) => write!(f, "{a} <= {b}"),
            ExFormula::NotEq(a, b) => write!(f, "~{a} = {b}"),
            ExFormula::NotLe(a, b) => write!(f, "~{a} <= {b}"),
            // A binder's scope extends as far right as possible.
            ExFormula::Exists(v, a) => write!(f, "ex {v}. {a}"),
            ExFormula::And(a, b) | ExFormula::Or(a, b) => {
                let p = prec(self);
                child(a, prec(a) < p, f)?;
                write!(f, " {} ", if p == 3 { "|" } else { "&" })?;
                child(b, prec(b) <= p, f)
            }
        }
    }
}

/// Deterministic fresh names avoiding every name of the input. Comparison
/// and splitting variables come from `z, u, v, w, z1, u1, …`; flattening
/// variables from `y1, y2, …`.
#[derive(Clone, Debug)]
pub struct FreshNames {
    used: BTreeSet<String>,
    y: usize,
    z: usize,
}

impl FreshNames {
    pub fn avoiding(names: impl IntoIterator<Item = String>) -> Self {
        FreshNames {
            used: names.into_iter().collect(),
            y: 0,
            z: 0,
        }
    }

    fn take(&mut self, name: String) -> Option<String> {
        self.used.insert(name.clone()).then_some(name)
    }

    pub fn next_y(&mut self) -> String {
        loop {
            self.y += 1;
            if let Some(n) = self.take(format!("y{}", self.y)) {
                return n;
            }
        }
    }

    pub fn next_z(&mut self) -> String {
        const BASES: [&str; 4] = ["z", "u", "v", "w"];
        loop {
            let (round, base) = (self.z / 4, BASES[self.z % 4]);
            self.z += 1;
            let name = if round == 0 {
                base.to_string()
            } else {
                format!("{base}{round}")
            };
            if let Some(n) = self.take(name) {
                return n;
            }
        }
    }
}

/// Negations pushed onto atoms.
pub fn nnf(f: &QfFormula) -> ExFormula {
    fn go(f: &QfFormula, neg: bool) -> ExFormula {
        match (f, neg) {
            (QfFormula::Eq(a, b), false) => ExFormula::Eq(a.clone(), b.clone()),
            (QfFormula::Eq(a, b), true) => ExFormula::NotEq(a.clone(), b.clone()),
            (QfFormula::Le(a, b), false) => ExFormula::Le(a.clone(), b.clone()),
            (QfFormula::Le(a, b), true) => ExFormula::NotLe(a.clone(), b.clone()),
            (QfFormula::Not(a), _) => go(a, !neg),
            (QfFormula::And(a, b), false) | (QfFormula::Or(a, b), true) => ExFormula::and(go(a, neg), go(b, neg)),
            (QfFormula::Or(a, b), false) | (QfFormula::And(a, b), true) => ExFormula::or(go(a, neg), go(b, neg)),
        }
    }
    go(f, false)
}

/// `t₀ ≠ t₁` becomes `t₀ ≰ t₁ ∨ t₁ ≰ t₀`; then `t₀ ≤ t₁` becomes
/// `∃z (t₀ + z = t₁)` and `t₀ ≰ t₁` becomes `∃z (t₁ + s(z) = t₀)`.
/// Expects negation normal form.
pub fn eliminate_comparisons(f: ExFormula, fresh: &mut FreshNames) -> ExFormula {
    fn not_le(a: Term, b: Term, fresh: &mut FreshNames) -> ExFormula {
        let z = fresh.next_z();
        ExFormula::exists(z.clone(), ExFormula::Eq(Term::plus(b, Term::succ(Term::Var(z))), a))
    }
    f.map_atoms(&mut |atom| match atom {
        ExFormula::Le(a, b) => {
            let z = fresh.next_z();
            ExFormula::exists(z.clone(), ExFormula::Eq(Term::plus(a, Term::Var(z)), b))
        }
        ExFormula::NotLe(a, b) => not_le(a, b, fresh),
        ExFormula::NotEq(a, b) => {
            let l = not_le(a.clone(), b.clone(), fresh);
            let r = not_le(b, a, fresh);
            ExFormula::or(l, r)
        }
        other => other,
    })
}

fn flatten_term(t: &Term, defs: &mut Vec<ExFormula>, fresh: &mut FreshNames) -> Term {
    if is_simple(t) {
        return t.clone();
    }
    let mut arg = |a: &Term, defs: &mut Vec<ExFormula>| -> Term {
        if a.as_var().is_some() {
            return a.clone();
        }
        let y = fresh.next_y();
        let body = flatten_term(a, defs, fresh);
        defs.push(ExFormula::Eq(Term::Var(y.clone()), body));
        Term::Var(y)
    };
    match t {
        Term::Succ(a) => Term::succ(arg(a, defs)),
        Term::Plus(a, b) => {
            let a = arg(a, defs);
            Term::plus(a, arg(b, defs))
        }
        Term::Times(a, b) => {
            let a = arg(a, defs);
            Term::times(a, arg(b, defs))
        }
        Term::Zero | Term::Var(_) => unreachable!("degree <= 1"),
    }
}

/// Replaces non-variable arguments of non-simple terms by fresh `y`s with
/// defining equations: `s(s(x)) = y` becomes `∃y1 (y1 = s(x) ∧ s(y1) = y)`.
/// Expects an equational formula.
pub fn flatten_terms(f: ExFormula, fresh: &mut FreshNames) -> ExFormula {
    f.map_atoms(&mut |atom| match atom {
        ExFormula::Eq(a, b) => {
            let mut defs = Vec::new();
            let a = flatten_term(&a, &mut defs, fresh);
            let b = flatten_term(&b, &mut defs, fresh);
            let names: Vec<String> = defs
                .iter()
                .map(|d| match d {
                    ExFormula::Eq(Term::Var(y), _) => y.clone(),
                    _ => unreachable!("definitions are equations"),
                })
                .collect();
            let mut body = defs
                .into_iter()
                .chain(std::iter::once(ExFormula::Eq(a, b)))
                .reduce(ExFormula::and)
                .expect("at least the atom itself");
            // Binders in allocation order, outermost first.
            let mut sorted = names;
            sorted.sort_by_key(|n| n[1..].parse::<usize>().unwrap_or(usize::MAX));
            for y in sorted.into_iter().rev() {
                body = ExFormula::exists(y, body);
            }
            body
        }
        other => other,
    })
}

/// `t₀ = t₁` becomes `∃z (z = t₀ ∧ z = t₁)` unless `t₀` is a variable.
fn split_equalities(f: ExFormula, fresh: &mut FreshNames) -> ExFormula {
    f.map_atoms(&mut |atom| match atom {
        ExFormula::Eq(a, b) if a.as_var().is_none() => {
            let z = fresh.next_z();
            ExFormula::exists(
                z.clone(),
                ExFormula::and(ExFormula::Eq(Term::Var(z.clone()), a), ExFormula::Eq(Term::Var(z), b)),
            )
        }
        other => other,
    })
}

/// Pulls every binder to the front, outermost and leftmost first. All bound
/// names are fresh, so nothing is captured.
fn prenex(f: ExFormula, prefix: &mut Vec<String>) -> ExFormula {
    match f {
        ExFormula::Exists(v, a) => {
            prefix.push(v);
            prenex(*a, prefix)
        }
        ExFormula::And(a, b) => {
            let a = prenex(*a, prefix);
            ExFormula::and(a, prenex(*b, prefix))
        }
        ExFormula::Or(a, b) => {
            let a = prenex(*a, prefix);
            ExFormula::or(a, prenex(*b, prefix))
        }
        atom => atom,
    }
}

type Row = Vec<(String, Term)>;

fn dnf(f: &ExFormula) -> Vec<Row> {
    match f {
        ExFormula::Eq(Term::Var(z), t) => vec![vec![(z.clone(), t.clone())]],
        ExFormula::Or(a, b) => {
            let mut rows = dnf(a);
            rows.extend(dnf(b));
            rows
        }
        ExFormula::And(a, b) => {
            let (l, r) = (dnf(a), dnf(b));
            let mut rows = Vec::with_capacity(l.len() * r.len());
            for x in &l {
                for y in &r {
                    rows.push(x.iter().chain(y).cloned().collect());
                }
            }
            rows
        }
        other => unreachable!("quantifier-free split matrix expected, got {other}"),
    }
}

fn with_prefix(prefix: &[String], body: &str) -> String {
    if prefix.is_empty() {
        body.to_string()
    } else {
        format!("ex {}: {body}", prefix.join(", "))
    }
}

fn render_rows(rows: &[Row]) -> String {
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|(z, t)| format!("{z} = {t}")).collect();
            format!("({})", cells.join(" & "))
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

/// `∃ȳ ⋁ᵢ ⋀ⱼ z_ij = t_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExistentialDNF {
    /// Free variables of the source formula, sorted.
    pub free: Vec<String>,
    pub prefix: Vec<String>,
    pub rows: Vec<Vec<(String, Term)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("the matrix has no rows")]
    NoRows,
    #[error("row {row} has {found} conjuncts, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}, column {col}: term {term} is not simple")]
    NotSimple { row: usize, col: usize, term: Term },
    #[error("variable {0} is neither free nor bound by the prefix")]
    UnknownVariable(String),
    #[error("prefix variable {0} is bound twice or clashes with a free variable")]
    PrefixClash(String),
}

impl ExistentialDNF {
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn check_invariants(&self) -> Result<(), ShapeError> {
        let mut seen: BTreeSet<&str> = self.free.iter().map(String::as_str).collect();
        for y in &self.prefix {
            if !seen.insert(y) {
                return Err(ShapeError::PrefixClash(y.clone()));
            }
        }
        let width = self.rows.first().ok_or(ShapeError::NoRows)?.len();
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != width {
                return Err(ShapeError::Ragged {
                    row: i,
                    expected: width,
                    found: row.len(),
                });
            }
            for (j, (z, t)) in row.iter().enumerate() {
                if !is_simple(t) {
                    return Err(ShapeError::NotSimple {
                        row: i,
                        col: j,
                        term: t.clone(),
                    });
                }
                let mut vars = BTreeSet::new();
                t.vars(&mut vars);
                if let Some(v) = std::iter::once(z).chain(&vars).find(|v| !seen.contains(v.as_str())) {
                    return Err(ShapeError::UnknownVariable(v.clone()));
                }
            }
        }
        Ok(())
    }

    /// Whether some choice of prefix values in `[0, w]` satisfies a row.
    pub fn satisfiable_within(&self, env: &BTreeMap<String, u64>, w: u64) -> bool {
        self.rows.iter().any(|row| Solver::new(row, env, w).solve())
    }
}

impl fmt::Display for ExistentialDNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", with_prefix(&self.prefix, &render_rows(&self.rows)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub stage: &'static str,
    pub text: String,
}

pub fn to_existential_dnf(f: &QfFormula) -> ExistentialDNF {
    to_existential_dnf_traced(f).0
}

/// The full pipeline, with the formula after each stage.
pub fn to_existential_dnf_traced(f: &QfFormula) -> (ExistentialDNF, Vec<TraceStep>) {
    let mut trace = Vec::new();
    let mut note = |stage, text: String| trace.push(TraceStep { stage, text });
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let mut fresh = FreshNames::avoiding(free.iter().cloned());
    note("input", f.to_string());

    let g = nnf(f);
    note("nnf", g.to_string());
    let g = eliminate_comparisons(g, &mut fresh);
    note("eliminate_comparisons", g.to_string());
    let g = flatten_terms(g, &mut fresh);
    note("flatten_terms", g.to_string());
    let g = split_equalities(g, &mut fresh);
    note("split_equalities", g.to_string());
    let mut prefix = Vec::new();
    let g = prenex(g, &mut prefix);
    note("prenex", with_prefix(&prefix, &g.to_string()));
    let mut rows = dnf(&g);
    note("dnf", with_prefix(&prefix, &render_rows(&rows)));
    let width = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut rows {
        let last = row.last().cloned().expect("rows are nonempty");
        row.resize(width, last);
    }
    note("pad", with_prefix(&prefix, &render_rows(&rows)));
    (ExistentialDNF { free, prefix, rows }, trace)
}

/// Backtracking search for one row, propagating forced values through the
/// simple equations before branching.
struct Solver<'a> {
    eqs: Vec<(usize, &'a Term)>,
    slots: BTreeMap<&'a str, usize>,
    w: u64,
    init: Vec<Option<u64>>,
}

impl<'a> Solver<'a> {
    fn new(row: &'a [(String, Term)], env: &BTreeMap<String, u64>, w: u64) -> Self {
        let mut slots: BTreeMap<&'a str, usize> = BTreeMap::new();
        let mut names: Vec<&'a str> = Vec::new();
        let mut slot = |n: &'a str| {
            *slots.entry(n).or_insert_with(|| {
                names.push(n);
                names.len() - 1
            })
        };
        let mut eqs = Vec::new();
        for (z, t) in row {
            let s = slot(z);
            term_names(t, &mut |n| {
                slot(n);
            });
            eqs.push((s, t));
        }
        let init = names.iter().map(|n| env.get(*n).copied()).collect();
        Solver { eqs, slots, w, init }
    }

    fn solve(&self) -> bool {
        let mut vals = self.init.clone();
        self.search(&mut vals)
    }

    fn slot(&self, n: &str) -> usize {
        self.slots[n]
    }

    fn value(&self, t: &Term, vals: &[Option<u64>]) -> Option<u64> {
        match t {
            Term::Zero => Some(0),
            Term::Var(v) => vals[self.slot(v)],
            Term::Succ(a) => self.value(a, vals)?.checked_add(1),
            Term::Plus(a, b) => self.value(a, vals)?.checked_add(self.value(b, vals)?),
            Term::Times(a, b) => self.value(a, vals)?.checked_mul(self.value(b, vals)?),
        }
    }

    /// Assigns `n := v` if allowed; `false` on a conflict.
    fn force(&self, t: &Term, v: u64, vals: &mut [Option<u64>]) -> Option<bool> {
        match t {
            Term::Var(n) => {
                let s = self.slot(n);
                match vals[s] {
                    Some(x) => Some(x == v),
                    None if v <= self.w => {
                        vals[s] = Some(v);
                        Some(true)
                    }
                    None => Some(false),
                }
            }
            Term::Zero => Some(v == 0),
            _ => None,
        }
    }

    fn propagate(&self, vals: &mut [Option<u64>]) -> bool {
        loop {
            let mut changed = false;
            for &(z, t) in &self.eqs {
                let tv = self.value(t, vals);
                match (vals[z], tv) {
                    (Some(a), Some(b)) => {
                        if a != b {
                            return false;
                        }
                    }
                    (None, Some(b)) => {
                        if b > self.w {
                            return false;
                        }
                        vals[z] = Some(b);
                        changed = true;
                    }
                    (Some(zv), None) => {
                        let before = vals.to_vec();
                        let ok = match t {
                            Term::Var(_) | Term::Zero => self.force(t, zv, vals),
                            Term::Succ(a) => match zv.checked_sub(1) {
                                Some(p) => self.force(a, p, vals),
                                None => Some(false),
                            },
                            Term::Plus(a, b) => match (self.value(a, vals), self.value(b, vals)) {
                                (Some(x), None) => match zv.checked_sub(x) {
                                    Some(d) => self.force(b, d, vals),
                                    None => Some(false),
                                },
                                (None, Some(y)) => match zv.checked_sub(y) {
                                    Some(d) => self.force(a, d, vals),
                                    None => Some(false),
                                },
                                _ => None,
                            },
                            Term::Times(a, b) => match (self.value(a, vals), self.value(b, vals)) {
                                (Some(k), None) | (None, Some(k)) => {
                                    let other = if self.value(a, vals).is_some() { b } else { a };
                                    if k == 0 {
                                        Some(zv == 0)
                                    } else if zv % k == 0 {
                                        self.force(other, zv / k, vals)
                                    } else {
                                        Some(false)
                                    }
                                }
                                _ => None,
                            },
                        };
                        match ok {
                            Some(false) => return false,
                            Some(true) => changed |= vals != before.as_slice(),
                            None => {}
                        }
                    }
                    (None, None) => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&self, vals: &mut [Option<u64>]) -> bool {
        if !self.propagate(vals) {
            return false;
        }
        match vals.iter().position(Option::is_none) {
            None => true,
            Some(s) => (0..=self.w).any(|v| {
                let mut next = vals.to_vec();
                next[s] = Some(v);
                self.search(&mut next)
            }),
        }
    }
}

fn term_names<'a>(t: &'a Term, f: &mut impl FnMut(&'a str)) {
    match t {
        Term::Zero => {}
        Term::Var(v) => f(v),
        Term::Succ(a) => term_names(a, f),
        Term::Plus(a, b) | Term::Times(a, b) => {
            term_names(a, f);
            term_names(b, f);
        }
    }
}

/// Compares `f` and `g` on every assignment of the free variables into
/// `[0, bound]`, searching prefix witnesses in `[0, W]` where `W` is the
/// largest subterm value of `f` plus `bound + 2`. Bounded evidence only.
pub fn bounded_equiv(f: &QfFormula, g: &ExistentialDNF, bound: u64) -> bool {
    bounded_equiv_scaled(f, g, bound, 1)
}

/// [`bounded_equiv`] with the witness bound multiplied by `scale`.
pub fn bounded_equiv_scaled(f: &QfFormula, g: &ExistentialDNF, bound: u64, scale: u64) -> bool {
    let mut vars: BTreeSet<String> = f.free_vars();
    vars.extend(g.free.iter().cloned());
    let vars: Vec<String> = vars.into_iter().collect();
    let mut digits = vec![0u64; vars.len()];
    loop {
        let env: BTreeMap<String, u64> = vars.iter().cloned().zip(digits.iter().copied()).collect();
        let (Ok(lhs), Ok(top)) = (eval_qf(f, &env), f.max_subterm_value(&env)) else {
            return false;
        };
        let w = (top + bound + 2).saturating_mul(scale);
        if lhs != g.satisfiable_within(&env, w) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return true;
            }
            digits[i] += 1;
            if digits[i] <= bound {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_term;

    fn q(s: &str) -> QfFormula {
        QfFormula::parse(s).unwrap()
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn row(cells: &[(&str, &str)]) -> Vec<(String, Term)> {
        cells.iter().map(|(z, s)| (z.to_string(), t(s))).collect()
    }

    #[test]
    fn comparison_rewrites() {
        let mut fresh = FreshNames::avoiding(["x".to_string(), "y".to_string()]);
        let g = eliminate_comparisons(nnf(&q("~x = y")), &mut fresh);
        assert_eq!(g.to_string(), "(ex z. y + s(z) = x) | (ex u. x + s(u) = y)");
        let mut fresh = FreshNames::avoiding(["x".to_string(), "y".to_string()]);
        let g = eliminate_comparisons(nnf(&q("x <= y")), &mut fresh);
        assert_eq!(g.to_string(), "ex z. x + z = y");
        let mut fresh = FreshNames::avoiding([]);
        assert_eq!(eliminate_comparisons(nnf(&q("x = y")), &mut fresh), nnf(&q("x = y")));
    }

    #[test]
    fn flattening() {
        let mut fresh = FreshNames::avoiding(["x".to_string(), "y".to_string()]);
        let g = flatten_terms(nnf(&q("s(s(x)) = y")), &mut fresh);
        assert_eq!(g.to_string(), "ex y1. y1 = s(x) & s(y1) = y");
        let mut fresh = FreshNames::avoiding([]);
        assert_eq!(flatten_terms(nnf(&q("x + y = z")), &mut fresh), nnf(&q("x + y = z")));
        let mut fresh = FreshNames::avoiding(["x".to_string(), "y".to_string(), "w".to_string()]);
        let g = flatten_terms(nnf(&q("x * y + s(0) = w")), &mut fresh);
        assert!(g.all_simple(), "{g}");
        assert_eq!(
            g.to_string(),
            "ex y1. ex y2. ex y3. y1 = x * y & y3 = 0 & y2 = s(y3) & y1 + y2 = w"
        );
    }

    #[test]
    fn pipeline_examples() {
        let g = to_existential_dnf(&q("x <= y"));
        assert_eq!(g.prefix, ["z", "u"]);
        assert_eq!(g.rows, vec![row(&[("u", "x + z"), ("u", "y")])]);

        let g = to_existential_dnf(&q("0 = 0"));
        assert_eq!(g.prefix, ["z"]);
        assert_eq!(g.rows, vec![row(&[("z", "0"), ("z", "0")])]);

        let g = to_existential_dnf(&q("x = y | x <= y"));
        assert_eq!(g.rows.len(), 2);
        assert_eq!(g.rows[0], row(&[("x", "y"), ("x", "y")]));
        g.check_invariants().unwrap();
    }

    #[test]
    fn fresh_names_skip_inputs() {
        let g = to_existential_dnf(&q("z <= y1"));
        assert_eq!(g.prefix, ["u", "v"]);
        let mut fresh = FreshNames::avoiding([]);
        let names: Vec<String> = (0..6).map(|_| fresh.next_z()).collect();
        assert_eq!(names, ["z", "u", "v", "w", "z1", "u1"]);
    }

    #[test]
    fn bounded_equivalence() {
        for s in [
            "x <= y",
            "~x = y",
            "s(s(x)) = y",
            "x * y + s(0) = w",
            "x = y | x <= y",
            "~(x * x <= y + 1)",
        ] {
            let f = q(s);
            let g = to_existential_dnf(&f);
            g.check_invariants().unwrap();
            assert!(bounded_equiv(&f, &g, 4), "{s}: {g}");
        }
        let wrong = ExistentialDNF {
            free: vec!["x".into(), "y".into()],
            prefix: vec![],
            rows: vec![row(&[("x", "y")])],
        };
        assert!(!bounded_equiv(&q("x <= y"), &wrong, 4));
    }

    #[test]
    fn invariant_failures() {
        let base = || ExistentialDNF {
            free: vec!["x".into()],
            prefix: vec!["z".into()],
            rows: vec![row(&[("z", "x")])],
        };
        assert_eq!(base().check_invariants(), Ok(()));
        let mut g = base();
        g.rows.push(row(&[("z", "x"), ("z", "x")]));
        assert!(matches!(g.check_invariants(), Err(ShapeError::Ragged { .. })));
        let mut g = base();
        g.rows[0][0].1 = t("s(s(x))");
        assert!(matches!(g.check_invariants(), Err(ShapeError::NotSimple { .. })));
        let mut g = base();
        g.rows[0][0].0 = "q".into();
        assert_eq!(g.check_invariants(), Err(ShapeError::UnknownVariable("q".into())));
        let mut g = base();
        g.prefix.push("x".into());
        assert_eq!(g.check_invariants(), Err(ShapeError::PrefixClash("x".into())));
    }
}
