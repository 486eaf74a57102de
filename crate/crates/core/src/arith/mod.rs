//! Quantifier-free arithmetic over `0, s, +, ×, ≤` and its existential
//! normal form with simple terms.

mod normal;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use normal::{
    bounded_equiv, bounded_equiv_scaled, eliminate_comparisons, flatten_terms, nnf, to_existential_dnf,
    to_existential_dnf_traced, ExFormula, ExistentialDNF, ShapeError, TraceStep,
};

use crate::modal::{Lexer, ParseError, Token};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Zero,
    Var(String),
    Succ(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn succ(t: Term) -> Self {
        Term::Succ(Box::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Self {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Self {
        Term::Times(Box::new(a), Box::new(b))
    }

    pub fn numeral(n: u64) -> Self {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Zero => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Succ(a) => a.vars(out),
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }

    /// Value under `env`, with the largest value of any subterm.
    fn eval_max(&self, env: &BTreeMap<String, u64>) -> Result<(u64, u64), EvalError> {
        let over = || EvalError::Overflow(self.to_string());
        Ok(match self {
            Term::Zero => (0, 0),
            Term::Var(v) => {
                let x = *env.get(v).ok_or_else(|| EvalError::UnboundVariable(v.clone()))?;
                (x, x)
            }
            Term::Succ(a) => {
                let (x, m) = a.eval_max(env)?;
                let y = x.checked_add(1).ok_or_else(over)?;
                (y, m.max(y))
            }
            Term::Plus(a, b) | Term::Times(a, b) => {
                let (x, mx) = a.eval_max(env)?;
                let (y, my) = b.eval_max(env)?;
                let v = match self {
                    Term::Plus(..) => x.checked_add(y),
                    _ => x.checked_mul(y),
                }
                .ok_or_else(over)?;
                (v, v.max(mx).max(my))
            }
        })
    }

    pub fn eval(&self, env: &BTreeMap<String, u64>) -> Result<u64, EvalError> {
        self.eval_max(env).map(|(v, _)| v)
    }
}

/// Occurrences of `0`, `s`, `+` and `×`.
pub fn term_degree(t: &Term) -> usize {
    match t {
        Term::Zero => 1,
        Term::Var(_) => 0,
        Term::Succ(a) => 1 + term_degree(a),
        Term::Plus(a, b) | Term::Times(a, b) => 1 + term_degree(a) + term_degree(b),
    }
}

/// Degree at most one.
pub fn is_simple(t: &Term) -> bool {
    term_degree(t) <= 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QfFormula {
    Eq(Term, Term),
    Le(Term, Term),
    Not(Box<QfFormula>),
    And(Box<QfFormula>, Box<QfFormula>),
    Or(Box<QfFormula>, Box<QfFormula>),
}

impl QfFormula {
    pub fn eq(a: Term, b: Term) -> Self {
        QfFormula::Eq(a, b)
    }

    pub fn le(a: Term, b: Term) -> Self {
        QfFormula::Le(a, b)
    }

    pub fn not(f: QfFormula) -> Self {
        QfFormula::Not(Box::new(f))
    }

    pub fn and(a: QfFormula, b: QfFormula) -> Self {
        QfFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: QfFormula, b: QfFormula) -> Self {
        QfFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_qf(text)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.vars(&mut out));
        out
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            QfFormula::Eq(a, b) | QfFormula::Le(a, b) => {
                f(a);
                f(b);
            }
            QfFormula::Not(a) => a.visit_terms(f),
            QfFormula::And(a, b) | QfFormula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            QfFormula::Eq(..) | QfFormula::Le(..) => 0,
            QfFormula::Not(a) => 1 + a.depth(),
            QfFormula::And(a, b) | QfFormula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            QfFormula::Or(..) => 3,
            QfFormula::And(..) => 4,
            QfFormula::Not(_) => 5,
            _ => 6,
        }
    }

    /// Largest value of any subterm under `env`.
    pub fn max_subterm_value(&self, env: &BTreeMap<String, u64>) -> Result<u64, EvalError> {
        let mut best = 0;
        let mut err = None;
        self.visit_terms(&mut |t| match t.eval_max(env) {
            Ok((_, m)) => best = best.max(m),
            Err(e) => {
                err.get_or_insert(e);
            }
        });
        err.map_or(Ok(best), Err)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is not assigned")]
    UnboundVariable(String),
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),
}

/// Truth over the naturals.
pub fn eval_qf(f: &QfFormula, env: &BTreeMap<String, u64>) -> Result<bool, EvalError> {
    Ok(match f {
        QfFormula::Eq(a, b) => a.eval(env)? == b.eval(env)?,
        QfFormula::Le(a, b) => a.eval(env)? <= b.eval(env)?,
        QfFormula::Not(a) => !eval_qf(a, env)?,
        QfFormula::And(a, b) => eval_qf(a, env)? && eval_qf(b, env)?,
        QfFormula::Or(a, b) => eval_qf(a, env)? || eval_qf(b, env)?,
    })
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `+` binds looser than `*`; both are printed left-associated.
        fn prec(t: &Term) -> u8 {
            match t {
                Term::Plus(..) => 1,
                Term::Times(..) => 2,
                _ => 3,
            }
        }
        let child = |t: &Term, parens: bool, f: &mut fmt::Formatter<'_>| {
            if parens {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Zero => write!(f, "0"),
            Term::Var(v) => write!(f, "{v}"),
            Term::Succ(a) => write!(f, "s({a})"),
            Term::Plus(a, b) | Term::Times(a, b) => {
                let p = prec(self);
                child(a, prec(a) < p, f)?;
                write!(f, " {} ", if p == 1 { "+" } else { "*" })?;
                child(b, prec(b) <= p, f)
            }
        }
    }
}

impl fmt::Display for QfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &QfFormula, parens: bool, f: &mut fmt::Formatter<'_>| {
            if parens {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            QfFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            QfFormula::Le(a, b) => write!(f, "{a} <= {b}"),
            QfFormula::Not(a) => {
                write!(f, "~")?;
                child(a, a.precedence() < 5, f)
            }
            QfFormula::And(a, b) | QfFormula::Or(a, b) => {
                let p = self.precedence();
                child(a, a.precedence() < p, f)?;
                write!(f, " {} ", if p == 3 { "|" } else { "&" })?;
                child(b, b.precedence() <= p, f)
            }
        }
    }
}

/// Terms: `0 | IDENT | NUMERAL | s(t) | t + t | t * t`, with `*` binding
/// tighter and parentheses optional. Formulas: atoms `t = t` and `t <= t`
/// under `~`, `&` and `|`.
pub fn parse_qf(text: &str) -> Result<QfFormula, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = p.or()?;
    if let Some((off, tok)) = p.tokens.get(p.pos) {
        return Err(ParseError::syntax(
            *off,
            format!("unexpected {} after formula", tok.describe()),
        ));
    }
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let t = p.sum()?;
    if let Some((off, tok)) = p.tokens.get(p.pos) {
        return Err(ParseError::syntax(
            *off,
            format!("unexpected {} after term", tok.describe()),
        ));
    }
    Ok(t)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
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

    fn or(&mut self) -> Result<QfFormula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = QfFormula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<QfFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = QfFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<QfFormula, ParseError> {
        if self.eat(&Token::Tilde) {
            return Ok(QfFormula::not(self.unary()?));
        }
        // `(` opens either a term or a formula; try the atom reading first.
        let start = self.pos;
        match self.atom() {
            Ok(a) => Ok(a),
            Err(atom_err) if self.tokens.get(start).map(|(_, t)| t) == Some(&Token::LParen) => {
                self.pos = start + 1;
                let f = self.or().map_err(|_| atom_err)?;
                self.expect(&Token::RParen)?;
                Ok(f)
            }
            Err(e) => Err(e),
        }
    }

    fn atom(&mut self) -> Result<QfFormula, ParseError> {
        let lhs = self.sum()?;
        if self.eat(&Token::Eq) {
            return Ok(QfFormula::eq(lhs, self.sum()?));
        }
        if self.eat(&Token::Le) {
            return Ok(QfFormula::le(lhs, self.sum()?));
        }
        Err(ParseError::syntax(self.offset(), "expected '=' or '<='"))
    }

    fn sum(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.product()?;
        while self.eat(&Token::Plus) {
            lhs = Term::plus(lhs, self.product()?);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut lhs = self.term_prim()?;
        while self.eat(&Token::Star) {
            lhs = Term::times(lhs, self.term_prim()?);
        }
        Ok(lhs)
    }

    fn term_prim(&mut self) -> Result<Term, ParseError> {
        let off = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::syntax(off, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Token::Number(n) => Ok(Term::numeral(n)),
            Token::Ident(name) if name == "s" && self.peek() == Some(&Token::LParen) => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(&Token::RParen)?;
                Ok(Term::succ(t))
            }
            Token::Ident(name) => Ok(Term::Var(name)),
            Token::LParen => {
                let t = self.sum()?;
                self.expect(&Token::RParen)?;
                Ok(t)
            }
            other => Err(ParseError::syntax(off, format!("unexpected {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn q(s: &str) -> QfFormula {
        QfFormula::parse(s).unwrap()
    }

    fn env(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(term_degree(&t("x")), 0);
        assert_eq!(term_degree(&t("s(x)")), 1);
        assert_eq!(term_degree(&t("s(x) + 0")), 3);
        assert!(is_simple(&t("x")));
        assert!(is_simple(&t("x + y")));
        assert!(!is_simple(&t("s(s(x))")));
        assert_eq!(t("2"), t("s(s(0))"));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_qf(&q("s(0) + s(0) = s(s(0))"), &env(&[])), Ok(true));
        assert_eq!(eval_qf(&q("x <= y"), &env(&[("x", 3), ("y", 2)])), Ok(false));
        assert_eq!(eval_qf(&q("x * y = 0"), &env(&[("x", 0), ("y", 7)])), Ok(true));
        assert_eq!(
            eval_qf(&q("x = y"), &env(&[("x", 0)])),
            Err(EvalError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "x = y",
            "~(x <= y) | x = s(0)",
            "(x + y) * z = x * y + z",
            "x + (y + z) = w & ~x = 0",
            "(x = y | y = z) & z <= x",
            "~~x = y",
        ] {
            let f = q(s);
            assert_eq!(q(&f.to_string()), f, "{s}");
        }
        assert_eq!(q("(x + y) = z"), QfFormula::eq(t("x + y"), t("z")));
        assert_eq!(q("((x = y))"), q("x = y"));
        assert!(QfFormula::parse("x").is_err());
        assert!(QfFormula::parse("x = ").is_err());
        assert!(QfFormula::parse("(x = y").is_err());
    }

    #[test]
    fn max_subterm() {
        let f = q("x * (y + 1) <= 2");
        assert_eq!(f.max_subterm_value(&env(&[("x", 3), ("y", 2)])), Ok(9));
    }
}
