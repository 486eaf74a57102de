//! Derivability conditions as axiom schemata and rules.
//!
//! D1 (necessitation) is always available and is not a flag. `E`, `M` and
//! `Ros` are rules consumed by the kernel; `C`, `K`, `D3(n,m)`, `S1C` and
//! `S1Cm` are axiom schemata instantiated by [`axiom_instance`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::{BuildError, Proof, ProofBuilder};
use crate::modal::{EnvError, FixedPointEnv, Formula, TAU};

/// A single derivability condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    E,
    M,
    C,
    /// The distribution axiom D2.
    K,
    Ros,
    S1C,
    S1Cm,
    /// `[]^n A -> []^m A`.
    D3(u32, u32),
}

impl Condition {
    /// The usual D3, `[]A -> [][]A`.
    pub const D3_USUAL: Condition = Condition::D3(1, 2);

    pub fn is_rule(self) -> bool {
        matches!(self, Condition::E | Condition::M | Condition::Ros)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::E => write!(f, "E"),
            Condition::M => write!(f, "M"),
            Condition::C => write!(f, "C"),
            Condition::K => write!(f, "K"),
            Condition::Ros => write!(f, "Ros"),
            Condition::S1C => write!(f, "S1C"),
            Condition::S1Cm => write!(f, "S1Cm"),
            Condition::D3(n, m) => write!(f, "D3({n},{m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("unknown condition tag {0:?}")]
    UnknownTag(String),
    #[error("bad D3 arity in {0:?}: need n >= 1 and m >= 0")]
    BadArity(String),
}

impl FromStr for Condition {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = s.trim();
        Ok(match tag {
            "E" => Condition::E,
            "M" => Condition::M,
            "C" => Condition::C,
            "K" => Condition::K,
            "Ros" => Condition::Ros,
            "S1C" => Condition::S1C,
            "S1Cm" => Condition::S1Cm,
            "D3" => Condition::D3_USUAL,
            _ => {
                let inner = tag
                    .strip_prefix("D3(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| ConditionError::UnknownTag(tag.to_string()))?;
                let (n, m) = inner
                    .split_once(',')
                    .ok_or_else(|| ConditionError::BadArity(tag.to_string()))?;
                let bad = || ConditionError::BadArity(tag.to_string());
                let n: u32 = n.trim().parse().map_err(|_| bad())?;
                let m: u32 = m.trim().parse().map_err(|_| bad())?;
                if n < 1 {
                    return Err(bad());
                }
                Condition::D3(n, m)
            }
        })
    }
}

/// Which conditions a proof may use besides D1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConditionSet {
    members: BTreeSet<Condition>,
}

impl ConditionSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn of(items: impl IntoIterator<Item = Condition>) -> Self {
        Self {
            members: items.into_iter().collect(),
        }
    }

    pub fn contains(&self, c: Condition) -> bool {
        self.members.contains(&c)
    }

    pub fn insert(&mut self, c: Condition) {
        self.members.insert(c);
    }

    pub fn without(&self, c: Condition) -> Self {
        let mut out = self.clone();
        out.members.remove(&c);
        out
    }

    pub fn union(&self, other: &ConditionSet) -> Self {
        Self {
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn is_superset(&self, other: &ConditionSet) -> bool {
        self.members.is_superset(&other.members)
    }

    pub fn iter(&self) -> impl Iterator<Item = Condition> + '_ {
        self.members.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn d3_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.members.iter().filter_map(|c| match c {
            Condition::D3(n, m) => Some((*n, *m)),
            _ => None,
        })
    }
}

impl FromIterator<Condition> for ConditionSet {
    fn from_iter<I: IntoIterator<Item = Condition>>(iter: I) -> Self {
        Self::of(iter)
    }
}

/// Parses a comma-separated list such as `E,C,D3` or `K,D3(2,3)`.
pub fn parse_condition_set(text: &str) -> Result<ConditionSet, ConditionError> {
    // Split on commas that are not inside a D3(...) argument list.
    let mut out = ConditionSet::empty();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut pieces = Vec::new();
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&text[start..]);
    if pieces.len() == 1 && pieces[0].trim().is_empty() {
        return Ok(out);
    }
    for piece in pieces {
        out.insert(piece.parse()?);
    }
    Ok(out)
}

impl FromStr for ConditionSet {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_condition_set(s)
    }
}

impl fmt::Display for ConditionSet {
    /// Canonical form: tags sorted alphabetically, `D3` pairs numerically.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tags: Vec<(String, Condition)> = self.members.iter().map(|c| (sort_key(*c), *c)).collect();
        tags.sort();
        let text: Vec<String> = tags.iter().map(|(_, c)| c.to_string()).collect();
        write!(f, "{}", text.join(","))
    }
}

fn sort_key(c: Condition) -> String {
    match c {
        Condition::D3(n, m) => format!("D3({n:010},{m:010})"),
        other => other.to_string(),
    }
}

/// Axiom schemata the kernel can instantiate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomTag {
    C,
    K,
    D3(u32, u32),
    S1C,
    S1Cm,
}

impl AxiomTag {
    pub fn arity(self) -> usize {
        match self {
            AxiomTag::C | AxiomTag::K => 2,
            AxiomTag::D3(..) | AxiomTag::S1C | AxiomTag::S1Cm => 1,
        }
    }

    /// The condition flag that enables this schema.
    pub fn condition(self) -> Condition {
        match self {
            AxiomTag::C => Condition::C,
            AxiomTag::K => Condition::K,
            AxiomTag::D3(n, m) => Condition::D3(n, m),
            AxiomTag::S1C => Condition::S1C,
            AxiomTag::S1Cm => Condition::S1Cm,
        }
    }
}

impl TryFrom<Condition> for AxiomTag {
    type Error = ConditionError;

    fn try_from(c: Condition) -> Result<Self, Self::Error> {
        Ok(match c {
            Condition::C => AxiomTag::C,
            Condition::K => AxiomTag::K,
            Condition::D3(n, m) => AxiomTag::D3(n, m),
            Condition::S1C => AxiomTag::S1C,
            Condition::S1Cm => AxiomTag::S1Cm,
            other => return Err(ConditionError::UnknownTag(format!("{other} is a rule"))),
        })
    }
}

impl FromStr for AxiomTag {
    type Err = ConditionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomTag::try_from(s.parse::<Condition>()?)
    }
}

impl fmt::Display for AxiomTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.condition())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("{tag} takes {expected} argument(s), got {found}")]
    ArityMismatch {
        tag: AxiomTag,
        expected: usize,
        found: usize,
    },
    #[error("{0} is not in the boxed Sigma_1 class")]
    NotSigmaBox(Formula),
    #[error(transparent)]
    Env(#[from] EnvError),
}

/// Instantiates an axiom schema at the given formulas.
pub fn axiom_instance(tag: AxiomTag, args: &[Formula], env: &FixedPointEnv) -> Result<Formula, InstanceError> {
    if args.len() != tag.arity() {
        return Err(InstanceError::ArityMismatch {
            tag,
            expected: tag.arity(),
            found: args.len(),
        });
    }
    let b = |f: &Formula| Formula::boxed(f.clone());
    Ok(match tag {
        AxiomTag::C => {
            let (a, c) = (&args[0], &args[1]);
            Formula::imp(
                Formula::and(b(a), b(c)),
                Formula::boxed(Formula::and(a.clone(), c.clone())),
            )
        }
        AxiomTag::K => {
            let (a, c) = (&args[0], &args[1]);
            Formula::imp(
                Formula::boxed(Formula::imp(a.clone(), c.clone())),
                Formula::imp(b(a), b(c)),
            )
        }
        AxiomTag::D3(n, m) => Formula::imp(
            Formula::boxed_n(args[0].clone(), n),
            Formula::boxed_n(args[0].clone(), m),
        ),
        AxiomTag::S1C | AxiomTag::S1Cm => {
            let sigma = &args[0];
            if !env.is_sigma_box(sigma)? {
                return Err(InstanceError::NotSigmaBox(sigma.clone()));
            }
            if tag == AxiomTag::S1C {
                Formula::imp(sigma.clone(), b(sigma))
            } else {
                Formula::imp(
                    sigma.clone(),
                    Formula::boxed(Formula::imp(Formula::constant(TAU), sigma.clone())),
                )
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SubsumeError {
    #[error("no registered derivation of {weak} from {{{strong}}}")]
    UnknownImplication { strong: ConditionSet, weak: Condition },
    #[error("{weak} needs {expected} probe formula(s), got {found}")]
    ProbeArity {
        weak: Condition,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Derives an instance of the `weak` condition at `probe` from conditions in
/// `strong`.
///
/// Registered derivations: `K => C`, `K => M`, `K => E` (through M),
/// `M => E`, `M,C => K`, `S1C => D3(1,2)` and `S1C => S1Cm`. The returned
/// proof's declared conditions are the ones it actually uses. For the rules
/// `M` and `E` the side premise (`a -> b`, resp. `a <-> b`) is a hypothesis
/// named `side`. The `S1Cm` instance is the one for the empty subtheory,
/// whose conjunction is `top`.
pub fn subsumes(strong: &ConditionSet, weak: Condition, probe: &[Formula]) -> Result<Proof, SubsumeError> {
    use Condition as C;
    let unknown = || SubsumeError::UnknownImplication {
        strong: strong.clone(),
        weak,
    };
    let arity = match weak {
        C::C | C::K | C::M | C::E => 2,
        C::D3(1, 2) | C::S1Cm => 1,
        _ => return Err(unknown()),
    };
    if probe.len() != arity {
        return Err(SubsumeError::ProbeArity {
            weak,
            expected: arity,
            found: probe.len(),
        });
    }
    let route = match weak {
        C::C | C::M if strong.contains(C::K) => ConditionSet::of([C::K]),
        C::E if strong.contains(C::M) => ConditionSet::of([C::M]),
        C::E if strong.contains(C::K) => ConditionSet::of([C::K]),
        C::K if strong.contains(C::M) && strong.contains(C::C) => ConditionSet::of([C::M, C::C]),
        C::D3(1, 2) | C::S1Cm if strong.contains(C::S1C) => ConditionSet::of([C::S1C]),
        _ => return Err(unknown()),
    };
    let mut b = ProofBuilder::new(route, FixedPointEnv::new());
    match weak {
        C::C => {
            let line = b.conj_axiom(&probe[0], &probe[1])?;
            Ok(b.finish_at(line))
        }
        C::M => {
            b.declare_hyp("side", Formula::imp(probe[0].clone(), probe[1].clone()));
            let side = b.hyp("side")?;
            let line = b.box_imp(side)?;
            Ok(b.finish_at(line))
        }
        C::E => {
            b.declare_hyp("side", Formula::iff(probe[0].clone(), probe[1].clone()));
            let side = b.hyp("side")?;
            let line = b.box_iff(side)?;
            Ok(b.finish_at(line))
        }
        C::K => {
            let (a, c) = (&probe[0], &probe[1]);
            let ac = Formula::imp(a.clone(), c.clone());
            let conj = b.ax(AxiomTag::C, vec![ac.clone(), a.clone()])?;
            let mp = b.taut(Formula::imp(Formula::and(ac.clone(), a.clone()), c.clone()))?;
            let lifted = b.rm(mp)?;
            let goal = axiom_instance(AxiomTag::K, probe, &FixedPointEnv::new()).expect("K instance");
            let line = b.prop_close(goal, &[conj, lifted])?;
            Ok(b.finish_at(line))
        }
        C::D3(1, 2) => {
            let line = b.ax(AxiomTag::S1C, vec![Formula::boxed(probe[0].clone())])?;
            Ok(b.finish_at(line))
        }
        C::S1Cm => {
            let sigma = &probe[0];
            let weakened = Formula::imp(Formula::Top, sigma.clone());
            let ax = b.ax(AxiomTag::S1C, vec![weakened.clone()])?;
            let goal = Formula::imp(sigma.clone(), Formula::boxed(weakened));
            let line = b.prop_close(goal, &[ax])?;
            Ok(b.finish_at(line))
        }
        _ => unreachable!("filtered above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_proof;

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn parses_condition_sets() {
        let cs = parse_condition_set("E,C,D3").unwrap();
        assert_eq!(cs, ConditionSet::of([Condition::E, Condition::C, Condition::D3(1, 2)]));
        let cs = parse_condition_set("K,D3(2,3)").unwrap();
        assert_eq!(cs, ConditionSet::of([Condition::K, Condition::D3(2, 3)]));
        assert_eq!(
            parse_condition_set("D3(0,1)"),
            Err(ConditionError::BadArity("D3(0,1)".into()))
        );
        assert_eq!(parse_condition_set("E,Q"), Err(ConditionError::UnknownTag("Q".into())));
        assert!(parse_condition_set("").unwrap().is_empty());
        assert!(parse_condition_set("D3(1)").is_err());
    }

    #[test]
    fn canonical_printing() {
        let cs = parse_condition_set("S1Cm, Ros,E,D3(10,2),D3(2,3),C").unwrap();
        assert_eq!(cs.to_string(), "C,D3(2,3),D3(10,2),E,Ros,S1Cm");
        assert_eq!(parse_condition_set(&cs.to_string()).unwrap(), cs);
    }

    #[test]
    fn instances() {
        let env = FixedPointEnv::new();
        let c = axiom_instance(AxiomTag::C, &[f("p"), f("q")], &env).unwrap();
        assert_eq!(c, f("[]p & []q -> [](p & q)"));
        let d3 = axiom_instance(AxiomTag::D3(1, 2), &[f("p")], &env).unwrap();
        assert_eq!(d3.to_string(), "[]p -> [][]p");
        let k = axiom_instance(AxiomTag::K, &[f("p"), f("q")], &env).unwrap();
        assert_eq!(k.to_string(), "[](p -> q) -> []p -> []q");
        assert_eq!(
            axiom_instance(AxiomTag::S1C, &[f("p")], &env),
            Err(InstanceError::NotSigmaBox(f("p")))
        );
        let s = axiom_instance(AxiomTag::S1Cm, &[f("[]p")], &env).unwrap();
        assert_eq!(s.to_string(), "[]p -> [](#tau -> []p)");
        assert!(matches!(
            axiom_instance(AxiomTag::C, &[f("p")], &env),
            Err(InstanceError::ArityMismatch {
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn subsumption_proofs_check() {
        let p = f("p");
        let q = f("q");
        let cases: Vec<(ConditionSet, Condition, Vec<Formula>)> = vec![
            (
                ConditionSet::of([Condition::K]),
                Condition::C,
                vec![p.clone(), q.clone()],
            ),
            (
                ConditionSet::of([Condition::K]),
                Condition::M,
                vec![p.clone(), q.clone()],
            ),
            (
                ConditionSet::of([Condition::K]),
                Condition::E,
                vec![p.clone(), q.clone()],
            ),
            (
                ConditionSet::of([Condition::M]),
                Condition::E,
                vec![p.clone(), q.clone()],
            ),
            (
                ConditionSet::of([Condition::M, Condition::C]),
                Condition::K,
                vec![p.clone(), q.clone()],
            ),
            (ConditionSet::of([Condition::S1C]), Condition::D3(1, 2), vec![p.clone()]),
            (ConditionSet::of([Condition::S1C]), Condition::S1Cm, vec![f("[]p")]),
        ];
        for (strong, weak, probe) in cases {
            let proof = subsumes(&strong, weak, &probe).unwrap();
            let report = check_proof(&proof, &strong);
            assert!(report.accepted(), "{weak} from {strong}: {report:?}");
            for used in proof.conditions.iter() {
                let reduced = strong.without(used);
                assert!(!check_proof(&proof, &reduced).accepted());
            }
        }
    }

    #[test]
    fn k_to_c_uses_nec_and_two_k_lines() {
        let proof = subsumes(&ConditionSet::of([Condition::K]), Condition::C, &[f("p"), f("q")]).unwrap();
        assert_eq!(proof.goal, f("[]p & []q -> [](p & q)"));
        assert!(!check_proof(&proof, &ConditionSet::empty()).accepted());
    }

    #[test]
    fn unknown_implications() {
        assert!(matches!(
            subsumes(&ConditionSet::of([Condition::E]), Condition::C, &[f("p"), f("q")]),
            Err(SubsumeError::UnknownImplication { .. })
        ));
        assert!(matches!(
            subsumes(&ConditionSet::of([Condition::S1C]), Condition::D3(2, 3), &[f("p")]),
            Err(SubsumeError::UnknownImplication { .. })
        ));
        assert!(matches!(
            subsumes(&ConditionSet::of([Condition::S1C]), Condition::S1Cm, &[f("p")]),
            Err(SubsumeError::Build(_))
        ));
    }
}
