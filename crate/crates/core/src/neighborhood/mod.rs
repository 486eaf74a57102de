//! Finite neighborhood semantics.
//!
//! Worlds are indexed `0..n` with `n <= 6`; a set of worlds is a bitmask and
//! a neighborhood family is a bitmask over the `2^n` subsets, so
//! `X ∈ N(w)` is bit `X` of `N(w)`.

mod audit;
mod file;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::modal::Formula;

pub use audit::{admits, model_pool, semantic_violations, Violation};
pub use file::{parse_model, ModelFileError};
pub use search::{
    countermodel_search, ecd3_without_m, family_candidates, filters_refute_k, ros_without_d, SearchError, SearchSpec,
    MAX_SEARCH_WORLDS,
};

/// Set of worlds as a bitmask.
pub type WorldSet = u64;
/// Family of world sets as a bitmask over subsets.
pub type Family = u64;

pub const MAX_WORLDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("fixed-point constant #{0} has no semantics")]
    ConstantInSemantics(String),
    #[error("atom {0} has no valuation")]
    UnknownAtom(String),
    #[error("unknown world {0}")]
    UnknownWorld(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs between 1 and {MAX_WORLDS} worlds, got {0}")]
    WorldCount(usize),
    #[error("duplicate world name {0}")]
    DuplicateWorld(String),
    #[error("neighborhood map has {found} entries for {expected} worlds")]
    NeighborhoodArity { expected: usize, found: usize },
    #[error("set {0:#b} is not a subset of the worlds")]
    NotASubset(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NeighborhoodModel {
    worlds: Vec<String>,
    nbhd: Vec<Family>,
    val: BTreeMap<String, WorldSet>,
}

/// Canonical world names `a, b, c, ...`.
pub fn canonical_world_names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

impl NeighborhoodModel {
    /// Builds a model from neighborhood families given as lists of sets.
    pub fn new(
        worlds: Vec<String>,
        nbhd: Vec<Vec<WorldSet>>,
        val: BTreeMap<String, WorldSet>,
    ) -> Result<Self, ModelError> {
        let n = worlds.len();
        if n == 0 || n > MAX_WORLDS {
            return Err(ModelError::WorldCount(n));
        }
        for (k, w) in worlds.iter().enumerate() {
            if worlds[..k].contains(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        if nbhd.len() != n {
            return Err(ModelError::NeighborhoodArity {
                expected: n,
                found: nbhd.len(),
            });
        }
        let full = full_set(n);
        let mut fams = Vec::with_capacity(n);
        for sets in nbhd {
            let mut fam = 0u64;
            for x in sets {
                if x & !full != 0 {
                    return Err(ModelError::NotASubset(x));
                }
                fam |= 1u64 << x;
            }
            fams.push(fam);
        }
        for x in val.values() {
            if x & !full != 0 {
                return Err(ModelError::NotASubset(*x));
            }
        }
        Ok(Self {
            worlds,
            nbhd: fams,
            val,
        })
    }

    /// Builds a model from family bitmasks; world names are canonical.
    pub fn from_families(n: usize, nbhd: Vec<Family>, val: BTreeMap<String, WorldSet>) -> Result<Self, ModelError> {
        if n == 0 || n > MAX_WORLDS {
            return Err(ModelError::WorldCount(n));
        }
        if nbhd.len() != n {
            return Err(ModelError::NeighborhoodArity {
                expected: n,
                found: nbhd.len(),
            });
        }
        let universe = family_universe(n);
        for fam in &nbhd {
            if fam & !universe != 0 {
                return Err(ModelError::NotASubset(*fam));
            }
        }
        let full = full_set(n);
        for x in val.values() {
            if x & !full != 0 {
                return Err(ModelError::NotASubset(*x));
            }
        }
        Ok(Self {
            worlds: canonical_world_names(n),
            nbhd,
            val,
        })
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn family(&self, w: usize) -> Family {
        self.nbhd[w]
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.val
    }

    /// The sets in `N(w)`, in increasing bitmask order.
    pub fn neighborhoods(&self, w: usize) -> Vec<WorldSet> {
        members(self.nbhd[w])
    }

    pub fn full(&self) -> WorldSet {
        full_set(self.worlds.len())
    }

    /// Worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula) -> Result<WorldSet, SemanticsError> {
        let full = self.full();
        Ok(match f {
            Formula::Bot => 0,
            Formula::Top => full,
            Formula::Atom(a) => *self.val.get(a).ok_or_else(|| SemanticsError::UnknownAtom(a.clone()))?,
            Formula::Const(c) => return Err(SemanticsError::ConstantInSemantics(c.clone())),
            Formula::Not(a) => full & !self.truth_set(a)?,
            Formula::And(a, b) => self.truth_set(a)? & self.truth_set(b)?,
            Formula::Or(a, b) => self.truth_set(a)? | self.truth_set(b)?,
            Formula::Imp(a, b) => (full & !self.truth_set(a)?) | self.truth_set(b)?,
            Formula::Iff(a, b) => full & !(self.truth_set(a)? ^ self.truth_set(b)?),
            Formula::Box(a) => box_set(&self.nbhd, self.truth_set(a)?),
        })
    }

    pub fn eval(&self, w: usize, f: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.truth_set(f)? >> w & 1 == 1)
    }

    pub fn eval_at(&self, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
        let w = self
            .world_index(world)
            .ok_or_else(|| SemanticsError::UnknownWorld(world.to_string()))?;
        self.eval(w, f)
    }

    pub fn globally_valid(&self, f: &Formula) -> Result<bool, SemanticsError> {
        Ok(self.truth_set(f)? == self.full())
    }

    pub fn closure_report(&self) -> ClosureReport {
        let n = self.worlds.len();
        let mut r = ClosureReport::all();
        for &fam in &self.nbhd {
            r = r.meet(family_report(fam, n));
        }
        r
    }

    pub fn format_set(&self, x: WorldSet) -> String {
        let names: Vec<&str> = (0..self.worlds.len())
            .filter(|i| x >> i & 1 == 1)
            .map(|i| self.worlds[i].as_str())
            .collect();
        format!("{{{}}}", names.join(" "))
    }
}

pub(crate) fn full_set(n: usize) -> WorldSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Bitmask of all subset indices for `n` worlds.
pub(crate) fn family_universe(n: usize) -> Family {
    let subsets = 1usize << n;
    if subsets >= 64 {
        u64::MAX
    } else {
        (1u64 << subsets) - 1
    }
}

pub(crate) fn members(fam: Family) -> Vec<WorldSet> {
    (0..64).filter(|x| fam >> x & 1 == 1).collect()
}

pub(crate) fn box_set(nbhd: &[Family], x: WorldSet) -> WorldSet {
    let mut out = 0;
    for (w, fam) in nbhd.iter().enumerate() {
        out |= (fam >> x & 1) << w;
    }
    out
}

/// Closure properties of a neighborhood function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClosureReport {
    /// Superset-closed; validates M.
    pub supplemented: bool,
    /// Closed under binary intersection; validates C.
    pub intersection_closed: bool,
    /// `W ∈ N(w)` everywhere; validates necessitation.
    pub contains_unit: bool,
    /// `∅ ∉ N(w)` everywhere; validates Ros and `~[]bot`.
    pub empty_free: bool,
    /// Never both a set and its complement; validates `[]A -> ~[]~A`.
    pub d_consistent: bool,
}

impl ClosureReport {
    fn all() -> Self {
        Self {
            supplemented: true,
            intersection_closed: true,
            contains_unit: true,
            empty_free: true,
            d_consistent: true,
        }
    }

    fn meet(self, o: Self) -> Self {
        Self {
            supplemented: self.supplemented && o.supplemented,
            intersection_closed: self.intersection_closed && o.intersection_closed,
            contains_unit: self.contains_unit && o.contains_unit,
            empty_free: self.empty_free && o.empty_free,
            d_consistent: self.d_consistent && o.d_consistent,
        }
    }

    pub fn has(&self, flag: ClosureFlag) -> bool {
        match flag {
            ClosureFlag::Supplemented => self.supplemented,
            ClosureFlag::IntersectionClosed => self.intersection_closed,
            ClosureFlag::ContainsUnit => self.contains_unit,
            ClosureFlag::EmptyFree => self.empty_free,
            ClosureFlag::DConsistent => self.d_consistent,
        }
    }

    pub fn covers(&self, flags: &[ClosureFlag]) -> bool {
        flags.iter().all(|f| self.has(*f))
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, flag) in ClosureFlag::ALL.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{flag}\t{}", self.has(*flag))?;
        }
        Ok(())
    }
}

/// The closure report of one family over `n` worlds.
pub fn family_report(fam: Family, n: usize) -> ClosureReport {
    let full = full_set(n);
    let sets = members(fam);
    let has = |x: WorldSet| fam >> x & 1 == 1;
    ClosureReport {
        supplemented: sets.iter().all(|&x| (0..=full).filter(|y| y & x == x).all(has)),
        intersection_closed: sets.iter().all(|&x| sets.iter().all(|&y| has(x & y))),
        contains_unit: has(full),
        empty_free: !has(0),
        d_consistent: sets.iter().all(|&x| !has(full & !x)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClosureFlag {
    Supplemented,
    IntersectionClosed,
    ContainsUnit,
    EmptyFree,
    DConsistent,
}

impl ClosureFlag {
    pub const ALL: [ClosureFlag; 5] = [
        ClosureFlag::Supplemented,
        ClosureFlag::IntersectionClosed,
        ClosureFlag::ContainsUnit,
        ClosureFlag::EmptyFree,
        ClosureFlag::DConsistent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClosureFlag::Supplemented => "supplemented",
            ClosureFlag::IntersectionClosed => "intersection_closed",
            ClosureFlag::ContainsUnit => "contains_unit",
            ClosureFlag::EmptyFree => "empty_free",
            ClosureFlag::DConsistent => "d_consistent",
        }
    }
}

impl fmt::Display for ClosureFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown closure flag {0:?}")]
pub struct UnknownFlag(pub String);

impl FromStr for ClosureFlag {
    type Err = UnknownFlag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        ClosureFlag::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFlag(s.to_string()))
    }
}

/// Parses a comma-separated flag list; the empty string is the empty list.
pub fn parse_flags(text: &str) -> Result<Vec<ClosureFlag>, UnknownFlag> {
    let mut out: Vec<ClosureFlag> = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

impl fmt::Display for NeighborhoodModel {
    /// The model file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "worlds: {}", self.worlds.join(" "))?;
        for (atom, x) in &self.val {
            let names: Vec<&str> = (0..self.worlds.len())
                .filter(|i| x >> i & 1 == 1)
                .map(|i| self.worlds[i].as_str())
                .collect();
            writeln!(f, "atom {atom}: {}", names.join(" "))?;
        }
        for (w, name) in self.worlds.iter().enumerate() {
            let sets: Vec<String> = self.neighborhoods(w).into_iter().map(|x| self.format_set(x)).collect();
            writeln!(f, "nbhd {name}: {}", sets.join(" "))?;
        }
        Ok(())
    }
}
