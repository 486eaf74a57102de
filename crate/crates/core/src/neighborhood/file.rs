//! Model files:
//!
//! ```text
//! worlds: a b c
//! atom p: a
//! nbhd a: {a} {a b c}
//! ```
//!
//! One `nbhd` line per world; `{}` is the empty set. Atoms not listed have
//! no valuation. `#` starts a comment line.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{ModelError, NeighborhoodModel, WorldSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub fn parse_model(text: &str) -> Result<NeighborhoodModel, ModelFileError> {
    let mut worlds: Option<Vec<String>> = None;
    let mut val = BTreeMap::new();
    let mut nbhd: BTreeMap<usize, Vec<WorldSet>> = BTreeMap::new();

    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| ModelFileError::Syntax { line: ln, message };
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| err("expected 'KEY: VALUES'".into()))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        match head.as_slice() {
            ["worlds"] => {
                if worlds.is_some() {
                    return Err(err("worlds declared twice".into()));
                }
                let names: Vec<String> = body.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = names.iter().find(|w| !is_name(w)) {
                    return Err(err(format!("bad world name {bad:?}")));
                }
                if let Some(k) = (1..names.len()).find(|&k| names[..k].contains(&names[k])) {
                    return Err(ModelError::DuplicateWorld(names[k].clone()).into());
                }
                worlds = Some(names);
            }
            ["atom", name] => {
                let ws = worlds.as_ref().ok_or_else(|| err("atom before worlds".into()))?;
                if !is_name(name) {
                    return Err(err(format!("bad atom name {name:?}")));
                }
                let set = world_set(body.split_whitespace(), ws).map_err(err)?;
                if val.insert(name.to_string(), set).is_some() {
                    return Err(err(format!("atom {name} declared twice")));
                }
            }
            ["nbhd", world] => {
                let ws = worlds.as_ref().ok_or_else(|| err("nbhd before worlds".into()))?;
                let w = ws
                    .iter()
                    .position(|x| x == world)
                    .ok_or_else(|| err(format!("unknown world {world}")))?;
                let sets = parse_sets(body, ws).map_err(err)?;
                if nbhd.insert(w, sets).is_some() {
                    return Err(err(format!("nbhd for {world} declared twice")));
                }
            }
            _ => return Err(err(format!("unknown key {:?}", head.join(" ")))),
        }
    }
    let worlds = worlds.ok_or(ModelFileError::Syntax {
        line: 0,
        message: "missing worlds line".into(),
    })?;
    if let Some(missing) = (0..worlds.len()).find(|w| !nbhd.contains_key(w)) {
        return Err(ModelFileError::Syntax {
            line: 0,
            message: format!("missing nbhd line for world {}", worlds[missing]),
        });
    }
    let families = nbhd.into_values().collect();
    Ok(NeighborhoodModel::new(worlds, families, val)?)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn world_set<'a>(names: impl Iterator<Item = &'a str>, worlds: &[String]) -> Result<WorldSet, String> {
    let mut set = 0;
    for name in names {
        let i = worlds
            .iter()
            .position(|w| w == name)
            .ok_or_else(|| format!("unknown world {name}"))?;
        set |= 1 << i;
    }
    Ok(set)
}

fn parse_sets(body: &str, worlds: &[String]) -> Result<Vec<WorldSet>, String> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('{')
            .ok_or_else(|| format!("expected '{{' at {rest:?}"))?;
        let close = inner.find('}').ok_or("unclosed '{'")?;
        out.push(world_set(inner[..close].split_whitespace(), worlds)?);
        rest = inner[close + 1..].trim_start();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::Formula;

    const SAMPLE: &str = "\
# modal analog model
worlds: a b c
atom p: a
atom q: b
nbhd a: {a} {a b c}
nbhd b: {a} {a b c}
nbhd c: {a}   {a b c}
";

    #[test]
    fn parses_and_round_trips() {
        let m = parse_model(SAMPLE).unwrap();
        assert_eq!(m.world_count(), 3);
        assert_eq!(m.neighborhoods(2), vec![0b001, 0b111]);
        assert!(m.eval_at("a", &Formula::parse("[]p").unwrap()).unwrap());
        assert_eq!(parse_model(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn empty_sets_and_atoms() {
        let m = parse_model("worlds: w\natom p:\nnbhd w: {}\n").unwrap();
        assert_eq!(m.neighborhoods(0), vec![0]);
        assert_eq!(m.valuation()["p"], 0);
        let m = parse_model("worlds: w\nnbhd w:\n").unwrap();
        assert!(m.neighborhoods(0).is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_model("worlds: a\n"), Err(ModelFileError::Syntax { .. })));
        assert!(matches!(
            parse_model("worlds: a\nnbhd a: {b}\n"),
            Err(ModelFileError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_model("worlds: a\nnbhd a: {a\n"),
            Err(ModelFileError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_model("worlds: a a\nnbhd a: {}\n"),
            Err(ModelFileError::Model(ModelError::DuplicateWorld(_)))
        ));
        assert!(matches!(
            parse_model("frob: x\n"),
            Err(ModelFileError::Syntax { line: 1, .. })
        ));
    }
}
