use super::{is_modalized, Formula};
use thiserror::Error;

/// The reserved constant standing for the conjunction of a finite subtheory.
/// It never has a definition.
pub const TAU: &str = "tau";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("constant #{0} is reserved and cannot be defined")]
    Reserved(String),
    #[error("constant #{0} is already defined")]
    Redefined(String),
    #[error("definition of #{name} refers to #{other}, which is not defined earlier")]
    ForwardReference { name: String, other: String },
    #[error("#{0} occurs outside the scope of a box in its own definition")]
    NotModalized(String),
    #[error("unresolved constant #{0}")]
    UnresolvedConstant(String),
}

/// Fixed-point definitions `#c := def`, in declaration order.
///
/// Every definition mentions its own constant only under a box, and any
/// other constant it mentions is either `#tau` or defined earlier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixedPointEnv {
    defs: Vec<(String, Formula)>,
}

impl FixedPointEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, def: Formula) -> Result<Self, EnvError> {
        self.define(name, def)?;
        Ok(self)
    }

    pub fn define(&mut self, name: &str, def: Formula) -> Result<(), EnvError> {
        if name == TAU {
            return Err(EnvError::Reserved(name.to_string()));
        }
        if self.get(name).is_some() {
            return Err(EnvError::Redefined(name.to_string()));
        }
        for other in def.constants() {
            if other != name && other != TAU && self.get(&other).is_none() {
                return Err(EnvError::ForwardReference {
                    name: name.to_string(),
                    other,
                });
            }
        }
        if !is_modalized(name, &def) {
            return Err(EnvError::NotModalized(name.to_string()));
        }
        self.defs.push((name.to_string(), def));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.defs.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// The fixed-point axiom `#c <-> def(c)`.
    pub fn fix_axiom(&self, name: &str) -> Option<Formula> {
        self.get(name)
            .map(|def| Formula::iff(Formula::constant(name), def.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.defs.iter().map(|(n, d)| (n.as_str(), d))
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    /// Checks that every constant in `f` is `#tau` or defined here.
    pub fn resolve(&self, f: &Formula) -> Result<(), EnvError> {
        for c in f.constants() {
            if c != TAU && self.get(&c).is_none() {
                return Err(EnvError::UnresolvedConstant(c));
            }
        }
        Ok(())
    }

    /// Membership in the boxed analogue of the Sigma_1 sentences: the least
    /// class containing `bot`, `top`, every `[]g`, every constant whose
    /// definition is in the class, closed under `&` and `|`. Variable-free
    /// formulas (built from `bot`/`top` alone) also belong, as do implications
    /// `d -> s` with `d` variable-free and `s` in the class.
    pub fn is_sigma_box(&self, f: &Formula) -> Result<bool, EnvError> {
        Ok(match f {
            Formula::Bot | Formula::Top | Formula::Box(_) => true,
            Formula::Atom(_) => false,
            Formula::Const(c) if c == TAU => false,
            Formula::Const(c) => {
                let def = self.get(c).ok_or_else(|| EnvError::UnresolvedConstant(c.clone()))?;
                // Self-occurrences are boxed, so this recursion terminates.
                self.is_sigma_box(def)?
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                // Resolve both sides so unresolved constants always surface.
                let l = self.is_sigma_box(a)?;
                let r = self.is_sigma_box(b)?;
                l && r
            }
            Formula::Imp(a, b) => {
                self.resolve(a)?;
                is_variable_free(a) && self.is_sigma_box(b)?
            }
            Formula::Not(_) | Formula::Iff(..) => {
                self.resolve(f)?;
                is_variable_free(f)
            }
        })
    }
}

fn is_variable_free(f: &Formula) -> bool {
    match f {
        Formula::Bot | Formula::Top => true,
        Formula::Atom(_) | Formula::Const(_) | Formula::Box(_) => false,
        Formula::Not(a) => is_variable_free(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            is_variable_free(a) && is_variable_free(b)
        }
    }
}
