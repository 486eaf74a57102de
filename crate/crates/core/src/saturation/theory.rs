//! Toy theories and their file format:
//!
//! ```text
//! atoms : a0 a1 a2 a3 a4     # optional; fixes the numbering order
//! proof 2 : a0
//! proof 4 : a1 <-> a0
//! xi : a3
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use super::{GodelNumbering, SatFormula};
use crate::modal::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToyError {
    #[error("proof code {0} is used twice")]
    DuplicateCode(u64),
    #[error("the excluded formula must be an atom, got {0}")]
    XiNotAtom(SatFormula),
    #[error("the excluded formula is proved by code {0}")]
    XiProved(u64),
    #[error("the excluded formula occurs as a side of the biconditional proved by code {0}")]
    XiInBiconditional(u64),
    #[error("symbol {0} is not in the declared numbering")]
    Undeclared(String),
}

/// A finite proof table with a designated excluded atom `ξ`.
///
/// `ξ` may be neither proved nor either side of a proved biconditional, so
/// no stratum can ever contain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyTheory {
    proofs: BTreeMap<u64, SatFormula>,
    xi: SatFormula,
    numbering: GodelNumbering,
}

impl ToyTheory {
    /// Numbers symbols by first occurrence: proofs in the given order, then `ξ`.
    pub fn new(proofs: Vec<(u64, SatFormula)>, xi: SatFormula) -> Result<Self, ToyError> {
        let mut symbols = Vec::new();
        for (_, f) in &proofs {
            f.symbols_in_order(&mut symbols);
        }
        xi.symbols_in_order(&mut symbols);
        Self::with_numbering(proofs, xi, GodelNumbering::new(symbols))
    }

    pub fn with_numbering(
        proofs: Vec<(u64, SatFormula)>,
        xi: SatFormula,
        numbering: GodelNumbering,
    ) -> Result<Self, ToyError> {
        if !matches!(xi, SatFormula::Atom(_)) {
            return Err(ToyError::XiNotAtom(xi));
        }
        let mut table = BTreeMap::new();
        for (p, f) in proofs {
            if let Some(s) = f.symbols().into_iter().find(|s| !numbering.declares(s)) {
                return Err(ToyError::Undeclared(s));
            }
            if f == xi {
                return Err(ToyError::XiProved(p));
            }
            if let Some((l, r)) = f.as_iff() {
                if *l == xi || *r == xi {
                    return Err(ToyError::XiInBiconditional(p));
                }
            }
            if table.insert(p, f).is_some() {
                return Err(ToyError::DuplicateCode(p));
            }
        }
        if let Some(s) = xi.symbols().into_iter().find(|s| !numbering.declares(s)) {
            return Err(ToyError::Undeclared(s));
        }
        Ok(ToyTheory {
            proofs: table,
            xi,
            numbering,
        })
    }

    pub fn proofs(&self) -> &BTreeMap<u64, SatFormula> {
        &self.proofs
    }

    pub fn xi(&self) -> &SatFormula {
        &self.xi
    }

    pub fn numbering(&self) -> &GodelNumbering {
        &self.numbering
    }

    pub fn gn(&self, f: &SatFormula) -> u128 {
        self.numbering.gn(f)
    }

    /// `gn(f) < m`.
    pub fn in_universe(&self, f: &SatFormula, m: u64) -> bool {
        self.gn(f) < m as u128
    }

    /// Proved biconditionals `(code, lhs, rhs)`.
    pub fn biconditionals(&self) -> impl Iterator<Item = (u64, &SatFormula, &SatFormula)> {
        self.proofs
            .iter()
            .filter_map(|(p, f)| f.as_iff().map(|(l, r)| (*p, l, r)))
    }

    /// The five-proof table used throughout the tests and examples.
    pub fn sample() -> Self {
        parse_toy_theory(SAMPLE).expect("built-in toy theory")
    }
}

pub(crate) const SAMPLE: &str = "\
atoms : a0 a1 a2 a3 a4
proof 2 : a0
proof 4 : a1 <-> a0
proof 9 : a2 <-> a1
proof 12 : bot -> bot
proof 25 : a4 <-> P(a0)
xi : a3
";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToyFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error(transparent)]
    Theory(#[from] ToyError),
}

pub fn parse_toy_theory(text: &str) -> Result<ToyTheory, ToyFileError> {
    let mut proofs = Vec::new();
    let mut xi = None;
    let mut atoms: Option<Vec<String>> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let syntax = |message: String| ToyFileError::Syntax { line, message };
        let (head, rest) = body
            .split_once(':')
            .ok_or_else(|| syntax("expected 'KEY : VALUE'".into()))?;
        // Trailing comments on a line.
        let rest = match rest.find(" #") {
            Some(i) if rest[i + 2..].starts_with(' ') || rest[i + 2..].is_empty() => &rest[..i],
            _ => rest,
        };
        let formula = || SatFormula::parse(rest.trim()).map_err(|source| ToyFileError::Formula { line, source });
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["proof", code] => {
                let p = code
                    .parse::<u64>()
                    .map_err(|_| syntax(format!("bad proof code {code:?}")))?;
                proofs.push((p, formula()?));
            }
            ["xi"] => {
                if xi.is_some() {
                    return Err(syntax("xi declared twice".into()));
                }
                xi = Some(formula()?);
            }
            ["atoms"] => {
                if atoms.is_some() {
                    return Err(syntax("atoms declared twice".into()));
                }
                atoms = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            _ => return Err(syntax(format!("unknown key {:?}", head.join(" ")))),
        }
    }
    let xi = xi.ok_or(ToyFileError::Syntax {
        line: 0,
        message: "missing xi line".into(),
    })?;
    Ok(match atoms {
        Some(a) => ToyTheory::with_numbering(proofs, xi, GodelNumbering::new(a))?,
        None => ToyTheory::new(proofs, xi)?,
    })
}

impl std::fmt::Display for ToyTheory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "atoms : {}", self.numbering.symbols().join(" "))?;
        for (p, phi) in &self.proofs {
            writeln!(f, "proof {p} : {phi}")?;
        }
        writeln!(f, "xi : {}", self.xi)
    }
}
