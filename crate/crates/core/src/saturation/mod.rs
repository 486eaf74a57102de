//! Stratified closure sets over a finite toy proof table, and the
//! predicate `P(·)` defined from them.
//!
//! Formulas are modal formulas with one extra unary former `P(φ)`, which is
//! inserted syntactically and never evaluated.

mod closure;
mod numbering;
mod theory;

use std::collections::BTreeSet;
use std::fmt;

pub use closure::{
    oracle_closure, pr_dagger, saturate, saturate_range, soundness_audit, step, stratum0, AuditReport, SaturationState,
    StepError,
};
pub use numbering::{cantor_pair, cantor_unpair, GodelNumbering, UNCODED};
pub use theory::{parse_toy_theory, ToyError, ToyFileError, ToyTheory};

use crate::modal::{Lexer, ParseError, Token};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SatFormula {
    Bot,
    Top,
    Atom(String),
    /// An opaque constant `#c`; numbered alongside atoms.
    Const(String),
    Not(Box<SatFormula>),
    And(Box<SatFormula>, Box<SatFormula>),
    Or(Box<SatFormula>, Box<SatFormula>),
    Imp(Box<SatFormula>, Box<SatFormula>),
    Iff(Box<SatFormula>, Box<SatFormula>),
    Box(Box<SatFormula>),
    P(Box<SatFormula>),
}

impl SatFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        SatFormula::Atom(name.into())
    }

    pub fn not(f: SatFormula) -> Self {
        SatFormula::Not(Box::new(f))
    }

    pub fn and(a: SatFormula, b: SatFormula) -> Self {
        SatFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: SatFormula, b: SatFormula) -> Self {
        SatFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: SatFormula, b: SatFormula) -> Self {
        SatFormula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: SatFormula, b: SatFormula) -> Self {
        SatFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: SatFormula) -> Self {
        SatFormula::Box(Box::new(f))
    }

    pub fn dagger(f: SatFormula) -> Self {
        SatFormula::P(Box::new(f))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_sat_formula(text)
    }

    pub fn as_iff(&self) -> Option<(&SatFormula, &SatFormula)> {
        match self {
            SatFormula::Iff(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Atom and constant names in order of first occurrence (left to right);
    /// constants carry their `#`.
    pub fn symbols_in_order(&self, out: &mut Vec<String>) {
        match self {
            SatFormula::Bot | SatFormula::Top => {}
            SatFormula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            SatFormula::Const(c) => {
                let name = format!("#{c}");
                if !out.contains(&name) {
                    out.push(name);
                }
            }
            SatFormula::Not(a) | SatFormula::Box(a) | SatFormula::P(a) => a.symbols_in_order(out),
            SatFormula::And(a, b) | SatFormula::Or(a, b) | SatFormula::Imp(a, b) | SatFormula::Iff(a, b) => {
                a.symbols_in_order(out);
                b.symbols_in_order(out);
            }
        }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        let mut v = Vec::new();
        self.symbols_in_order(&mut v);
        v.into_iter().collect()
    }

    fn precedence(&self) -> u8 {
        match self {
            SatFormula::Iff(..) => 1,
            SatFormula::Imp(..) => 2,
            SatFormula::Or(..) => 3,
            SatFormula::And(..) => 4,
            SatFormula::Not(_) | SatFormula::Box(_) => 5,
            _ => 6,
        }
    }
}

impl fmt::Display for SatFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &SatFormula, parens: bool, f: &mut fmt::Formatter<'_>| {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        let prec = self.precedence();
        match self {
            SatFormula::Bot => write!(f, "bot"),
            SatFormula::Top => write!(f, "top"),
            SatFormula::Atom(a) => write!(f, "{a}"),
            SatFormula::Const(c) => write!(f, "#{c}"),
            SatFormula::P(a) => write!(f, "P({a})"),
            SatFormula::Not(a) => {
                write!(f, "~")?;
                child(a, a.precedence() < 5, f)
            }
            SatFormula::Box(a) => {
                write!(f, "[]")?;
                child(a, a.precedence() < 5, f)
            }
            SatFormula::Imp(a, b) => {
                child(a, a.precedence() <= prec, f)?;
                write!(f, " -> ")?;
                child(b, b.precedence() < prec, f)
            }
            SatFormula::Iff(a, b) | SatFormula::Or(a, b) | SatFormula::And(a, b) => {
                let op = match self {
                    SatFormula::Iff(..) => "<->",
                    SatFormula::Or(..) => "|",
                    _ => "&",
                };
                child(a, a.precedence() < prec, f)?;
                write!(f, " {op} ")?;
                child(b, b.precedence() <= prec, f)
            }
        }
    }
}

/// Same grammar as modal formulas, plus `P(φ)` as a primary.
pub fn parse_sat_formula(text: &str) -> Result<SatFormula, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = p.iff()?;
    if let Some((off, tok)) = p.tokens.get(p.pos) {
        return Err(ParseError::syntax(
            *off,
            format!("unexpected {} after formula", tok.describe()),
        ));
    }
    Ok(f)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.tokens.get(self.pos).map(|(_, t)| t) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Token) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.offset(),
                format!("expected {}", tok.describe()),
            ))
        }
    }

    fn iff(&mut self) -> Result<SatFormula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Token::Iff) {
            lhs = SatFormula::iff(lhs, self.imp()?);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<SatFormula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Imp) {
            return Ok(SatFormula::imp(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<SatFormula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = SatFormula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<SatFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = SatFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SatFormula, ParseError> {
        if self.eat(&Token::Tilde) {
            return Ok(SatFormula::not(self.unary()?));
        }
        if self.eat(&Token::BoxOp) {
            return Ok(SatFormula::boxed(self.unary()?));
        }
        self.prim()
    }

    fn prim(&mut self) -> Result<SatFormula, ParseError> {
        let off = self.offset();
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(ParseError::syntax(off, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Token::Bot => Ok(SatFormula::Bot),
            Token::Top => Ok(SatFormula::Top),
            Token::Ident(name) => Ok(SatFormula::Atom(name)),
            Token::Const(name) => Ok(SatFormula::Const(name)),
            Token::Dagger => {
                self.expect(&Token::LParen)?;
                let f = self.iff()?;
                self.expect(&Token::RParen)?;
                Ok(SatFormula::dagger(f))
            }
            Token::LParen => {
                let f = self.iff()?;
                self.expect(&Token::RParen)?;
                Ok(f)
            }
            other => Err(ParseError::syntax(off, format!("unexpected {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in [
            "a0",
            "a4 <-> P(a0)",
            "P(P(a & b))",
            "~P(a) | []#c",
            "(a -> b) -> c",
            "bot -> bot",
        ] {
            let f = SatFormula::parse(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(SatFormula::parse(&f.to_string()).unwrap(), f);
        }
        assert!(SatFormula::parse("P a").is_err());
        assert!(SatFormula::parse("P(a").is_err());
        assert!(SatFormula::parse("a = b").is_err());
    }

    #[test]
    fn symbol_order() {
        let f = SatFormula::parse("b & #c -> a & b").unwrap();
        let mut v = Vec::new();
        f.symbols_in_order(&mut v);
        assert_eq!(v, ["b", "#c", "a"]);
    }
}
