use super::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown token {found:?} at byte {offset}")]
    UnknownToken { offset: usize, found: char },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownToken { offset, .. } => *offset,
        }
    }

    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            offset,
            message: message.into(),
        }
    }
}

/// Tokens shared by the modal, toy-theory and arithmetic grammars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Tilde,
    BoxOp,
    LParen,
    RParen,
    And,
    Or,
    Imp,
    Iff,
    Bot,
    Top,
    Ident(String),
    Const(String),
    /// Upper-case `P`, the toy-theory predicate former.
    Dagger,
    Number(u64),
    Plus,
    Star,
    Eq,
    Le,
    Comma,
}

impl Token {
    pub(crate) fn describe(&self) -> String {
        match self {
            Token::Tilde => "'~'".into(),
            Token::BoxOp => "'[]'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Imp => "'->'".into(),
            Token::Iff => "'<->'".into(),
            Token::Bot => "'bot'".into(),
            Token::Top => "'top'".into(),
            Token::Ident(s) => format!("identifier '{s}'"),
            Token::Const(s) => format!("constant '#{s}'"),
            Token::Dagger => "'P'".into(),
            Token::Number(n) => format!("numeral {n}"),
            Token::Plus => "'+'".into(),
            Token::Star => "'*'".into(),
            Token::Eq => "'='".into(),
            Token::Le => "'<='".into(),
            Token::Comma => "','".into(),
        }
    }
}

pub(crate) struct Lexer;

impl Lexer {
    /// Splits `text` into `(byte offset, token)` pairs.
    pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let rest = &text[i..];
            let tok = match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'~' => {
                    i += 1;
                    Token::Tilde
                }
                b'(' => {
                    i += 1;
                    Token::LParen
                }
                b')' => {
                    i += 1;
                    Token::RParen
                }
                b'&' => {
                    i += 1;
                    Token::And
                }
                b'|' => {
                    i += 1;
                    Token::Or
                }
                b'+' => {
                    i += 1;
                    Token::Plus
                }
                b'*' => {
                    i += 1;
                    Token::Star
                }
                b'=' => {
                    i += 1;
                    Token::Eq
                }
                b',' => {
                    i += 1;
                    Token::Comma
                }
                b'P' => {
                    i += 1;
                    Token::Dagger
                }
                b'[' if rest.starts_with("[]") => {
                    i += 2;
                    Token::BoxOp
                }
                b'-' if rest.starts_with("->") => {
                    i += 2;
                    Token::Imp
                }
                b'<' if rest.starts_with("<->") => {
                    i += 3;
                    Token::Iff
                }
                b'<' if rest.starts_with("<=") => {
                    i += 2;
                    Token::Le
                }
                b'#' => {
                    i += 1;
                    let len = ident_len(&bytes[i..]);
                    if len == 0 {
                        return Err(ParseError::syntax(start, "expected identifier after '#'"));
                    }
                    let name = &text[i..i + len];
                    i += len;
                    Token::Const(name.to_string())
                }
                b'a'..=b'z' => {
                    let len = ident_len(&bytes[i..]);
                    let name = &text[i..i + len];
                    i += len;
                    match name {
                        "bot" => Token::Bot,
                        "top" => Token::Top,
                        _ => Token::Ident(name.to_string()),
                    }
                }
                b'0'..=b'9' => {
                    let len = bytes[i..].iter().take_while(|b| b.is_ascii_digit()).count();
                    let n = text[i..i + len]
                        .parse::<u64>()
                        .map_err(|_| ParseError::syntax(start, "numeral out of range"))?;
                    i += len;
                    Token::Number(n)
                }
                _ => {
                    let found = rest.chars().next().unwrap_or('?');
                    return Err(ParseError::UnknownToken { offset: start, found });
                }
            };
            out.push((start, tok));
        }
        Ok(out)
    }
}

fn ident_len(bytes: &[u8]) -> usize {
    match bytes.first() {
        Some(b'a'..=b'z') => {
            1 + bytes[1..]
                .iter()
                .take_while(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || **b == b'_')
                .count()
        }
        _ => 0,
    }
}

/// Parses a modal formula.
///
/// Precedence, loosest first: `<->` (left), `->` (right), `|` (left),
/// `&` (left), then the prefix operators `~` and `[]`.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
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

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while self.eat(&Token::Iff) {
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Token::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Token::BoxOp) {
            return Ok(Formula::boxed(self.unary()?));
        }
        self.prim()
    }

    fn prim(&mut self) -> Result<Formula, ParseError> {
        let off = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::syntax(off, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Token::Bot => Ok(Formula::Bot),
            Token::Top => Ok(Formula::Top),
            Token::Ident(name) => Ok(Formula::Atom(name)),
            Token::Const(name) => Ok(Formula::Const(name)),
            Token::LParen => {
                let f = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(ParseError::syntax(self.offset(), "expected ')'"));
                }
                Ok(f)
            }
            other => Err(ParseError::syntax(off, format!("unexpected {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::Formula as F;

    #[test]
    fn grammar_examples() {
        let p = || F::atom("p");
        assert_eq!(
            parse_formula("[]p -> [][]p").unwrap(),
            F::imp(F::boxed(p()), F::boxed(F::boxed(p())))
        );
        assert_eq!(
            parse_formula("#c <-> ~[]#c").unwrap(),
            F::iff(F::constant("c"), F::not(F::boxed(F::constant("c"))))
        );
        let q = F::atom("q");
        assert_eq!(
            parse_formula("[]p & []q -> [](p & q)").unwrap(),
            F::imp(F::and(F::boxed(p()), F::boxed(q.clone())), F::boxed(F::and(p(), q)))
        );
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(parse_formula(" [] p->[ ]p ").err().map(|e| e.offset()), Some(7));
        assert_eq!(
            parse_formula("[]p->p").unwrap(),
            parse_formula("  []p   ->\n p ").unwrap()
        );
    }

    #[test]
    fn associativity() {
        let f = parse_formula("p -> q -> r").unwrap();
        assert_eq!(f, F::imp(F::atom("p"), F::imp(F::atom("q"), F::atom("r"))));
        let g = parse_formula("p <-> q <-> r").unwrap();
        assert_eq!(g, F::iff(F::iff(F::atom("p"), F::atom("q")), F::atom("r")));
        let h = parse_formula("p | q & r").unwrap();
        assert_eq!(h, F::or(F::atom("p"), F::and(F::atom("q"), F::atom("r"))));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_formula("p & $"),
            Err(ParseError::UnknownToken { offset: 4, found: '$' })
        );
        assert!(matches!(
            parse_formula("(p & q"),
            Err(ParseError::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse_formula("p q"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(parse_formula(""), Err(ParseError::Syntax { offset: 0, .. })));
        assert!(matches!(parse_formula("#"), Err(ParseError::Syntax { .. })));
        assert!(parse_formula("P").is_err());
    }

    #[test]
    fn keywords_and_identifiers() {
        assert_eq!(parse_formula("bot").unwrap(), F::Bot);
        assert_eq!(parse_formula("bottom").unwrap(), F::atom("bottom"));
        assert_eq!(parse_formula("#tau").unwrap(), F::constant("tau"));
        assert_eq!(parse_formula("x_1").unwrap(), F::atom("x_1"));
    }
}
