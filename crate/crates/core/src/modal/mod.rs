//! The modal object language.
//!
//! Formulas are propositional formulas with a single unary modality `[]`
//! (read as the provability predicate) and fixed-point constants `#c`,
//! whose meaning is supplied by a [`FixedPointEnv`].

mod env;
mod parse;
mod taut;

use std::collections::BTreeSet;
use std::fmt;

pub use env::{EnvError, FixedPointEnv, TAU};
pub use parse::{parse_formula, ParseError};
pub(crate) use parse::{Lexer, Token};
pub use taut::{opaque_atoms, taut_check};

/// A propositional modal formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bot,
    Top,
    Atom(String),
    /// Fixed-point constant, written `#name`.
    Const(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Formula::Const(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    /// `[]^n f`.
    pub fn boxed_n(f: Formula, n: u32) -> Self {
        (0..n).fold(f, |acc, _| Formula::boxed(acc))
    }

    /// Left-nested conjunction of a non-empty list; `top` for an empty one.
    pub fn conj_all(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::Top,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Parses the ASCII surface syntax.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_formula(text)
    }

    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Iff(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(a) => Some(a),
            _ => None,
        }
    }

    /// Names of all fixed-point constants occurring in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Const(c) = f {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Names of all propositional atoms occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn has_constants(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Const(_)));
        found
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Const(_) => {}
            Formula::Not(a) | Formula::Box(a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Number of nested boxes on the deepest branch.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Top | Formula::Atom(_) | Formula::Const(_) => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::Box(a) => 1 + a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Imp(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) | Formula::Box(_) => 5,
            _ => 6,
        }
    }
}

/// True iff every occurrence of `#name` in `f` lies under at least one box.
pub fn is_modalized(name: &str, f: &Formula) -> bool {
    fn go(name: &str, f: &Formula, under_box: bool) -> bool {
        match f {
            Formula::Const(c) => under_box || c != name,
            Formula::Bot | Formula::Top | Formula::Atom(_) => true,
            Formula::Box(a) => go(name, a, true),
            Formula::Not(a) => go(name, a, under_box),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                go(name, a, under_box) && go(name, b, under_box)
            }
        }
    }
    go(name, f, false)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f)
    }
}

fn write_child(child: &Formula, needs_parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if needs_parens {
        write!(f, "(")?;
        write_formula(child, f)?;
        write!(f, ")")
    } else {
        write_formula(child, f)
    }
}

fn write_formula(formula: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let prec = formula.precedence();
    match formula {
        Formula::Bot => write!(f, "bot"),
        Formula::Top => write!(f, "top"),
        Formula::Atom(a) => write!(f, "{a}"),
        Formula::Const(c) => write!(f, "#{c}"),
        Formula::Not(a) => {
            write!(f, "~")?;
            write_child(a, a.precedence() < 5, f)
        }
        Formula::Box(a) => {
            write!(f, "[]")?;
            write_child(a, a.precedence() < 5, f)
        }
        // `->` associates to the right, the other binary connectives to the left.
        Formula::Imp(a, b) => {
            write_child(a, a.precedence() <= prec, f)?;
            write!(f, " -> ")?;
            write_child(b, b.precedence() < prec, f)
        }
        Formula::Iff(a, b) | Formula::Or(a, b) | Formula::And(a, b) => {
            let op = match formula {
                Formula::Iff(..) => "<->",
                Formula::Or(..) => "|",
                _ => "&",
            };
            write_child(a, a.precedence() < prec, f)?;
            write!(f, " {op} ")?;
            write_child(b, b.precedence() <= prec, f)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn prints_minimal_parentheses() {
        assert_eq!(Formula::boxed(Formula::atom("p")).to_string(), "[]p");
        assert_eq!(Formula::not(Formula::boxed(Formula::Bot)).to_string(), "~[]bot");
        let c = Formula::and(Formula::boxed(Formula::atom("p")), Formula::boxed(Formula::atom("q")));
        assert_eq!(c.to_string(), "[]p & []q");
        assert_eq!(p("(p -> q) -> r").to_string(), "(p -> q) -> r");
        assert_eq!(p("p -> (q -> r)").to_string(), "p -> q -> r");
        assert_eq!(p("p & (q & r)").to_string(), "p & (q & r)");
        assert_eq!(p("(p & q) & r").to_string(), "p & q & r");
        assert_eq!(p("~(p | q)").to_string(), "~(p | q)");
        assert_eq!(p("[](p <-> q) <-> (r <-> s)").to_string(), "[](p <-> q) <-> (r <-> s)");
    }

    #[test]
    fn modalized_occurrences() {
        assert!(is_modalized("c", &p("~[]#c")));
        assert!(!is_modalized("c", &p("#c -> []#c")));
        assert!(is_modalized("c", &p("[](#c & []#c)")));
        assert!(is_modalized("c", &p("#d & p")));
    }

    #[test]
    fn structural_queries() {
        let f = p("[]#c & [][]p -> q");
        assert_eq!(f.modal_depth(), 2);
        assert!(f.has_constants());
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
        assert_eq!(Formula::boxed_n(Formula::atom("p"), 3).to_string(), "[][][]p");
        assert_eq!(Formula::conj_all(vec![]).to_string(), "top");
    }
}
