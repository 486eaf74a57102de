use super::SatFormula;

/// Code given to formulas too large to number; it exceeds every `m`.
pub const UNCODED: u128 = u128::MAX;

// Constructor tags. Tag 9 is shared by the nullary formers, told apart by
// the payload (0 for bot, 1 for top).
const NOT: u128 = 2;
const AND: u128 = 3;
const OR: u128 = 4;
const IMP: u128 = 5;
const IFF: u128 = 6;
const BOX: u128 = 7;
const DAGGER: u128 = 8;
const NULLARY: u128 = 9;

pub fn cantor_pair(a: u128, b: u128) -> Option<u128> {
    let s = a.checked_add(b)?;
    let t = s.checked_mul(s.checked_add(1)?)? / 2;
    t.checked_add(b)
}

pub fn cantor_unpair(z: u128) -> (u128, u128) {
    // Largest w with w(w+1)/2 <= z.
    let mut w = ((z.saturating_mul(8).saturating_add(1)).isqrt() - 1) / 2;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// The concrete Gödel numbering: declared symbol `i` gets `2i + 1`; a
/// composite node with tag `t` and payload `x` (the pair of its children's
/// codes, `<a, 0>` for unary nodes) gets `2 (8x + t - 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GodelNumbering {
    /// Atom names, and constant names with a leading `#`.
    symbols: Vec<String>,
}

impl GodelNumbering {
    pub fn new(symbols: Vec<String>) -> Self {
        GodelNumbering { symbols }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn declares(&self, name: &str) -> bool {
        self.symbols.iter().any(|s| s == name)
    }

    fn node(tag: u128, payload: Option<u128>) -> u128 {
        payload
            .and_then(|x| x.checked_mul(8))
            .and_then(|x| x.checked_add(tag - 2))
            .and_then(|x| x.checked_mul(2))
            .unwrap_or(UNCODED)
    }

    fn symbol(&self, name: &str) -> u128 {
        match self.symbols.iter().position(|s| s == name) {
            Some(i) => 2 * i as u128 + 1,
            None => UNCODED,
        }
    }

    /// `UNCODED` for undeclared symbols and for codes beyond `u128`.
    pub fn gn(&self, f: &SatFormula) -> u128 {
        let bin = |tag, a: &SatFormula, b: &SatFormula| {
            let (x, y) = (self.gn(a), self.gn(b));
            if x == UNCODED || y == UNCODED {
                return UNCODED;
            }
            Self::node(tag, cantor_pair(x, y))
        };
        let un = |tag, a: &SatFormula| {
            let x = self.gn(a);
            if x == UNCODED {
                return UNCODED;
            }
            Self::node(tag, cantor_pair(x, 0))
        };
        match f {
            SatFormula::Bot => Self::node(NULLARY, Some(0)),
            SatFormula::Top => Self::node(NULLARY, Some(1)),
            SatFormula::Atom(a) => self.symbol(a),
            SatFormula::Const(c) => self.symbol(&format!("#{c}")),
            SatFormula::Not(a) => un(NOT, a),
            SatFormula::Box(a) => un(BOX, a),
            SatFormula::P(a) => un(DAGGER, a),
            SatFormula::And(a, b) => bin(AND, a, b),
            SatFormula::Or(a, b) => bin(OR, a, b),
            SatFormula::Imp(a, b) => bin(IMP, a, b),
            SatFormula::Iff(a, b) => bin(IFF, a, b),
        }
    }

    /// Inverse of [`gn`](Self::gn); `None` if `code` numbers no formula.
    pub fn decode(&self, code: u128) -> Option<SatFormula> {
        if code == UNCODED {
            return None;
        }
        if code % 2 == 1 {
            let name = self.symbols.get(usize::try_from(code / 2).ok()?)?;
            return Some(match name.strip_prefix('#') {
                Some(c) => SatFormula::Const(c.to_string()),
                None => SatFormula::Atom(name.clone()),
            });
        }
        let half = code / 2;
        let (payload, tag) = (half / 8, half % 8 + 2);
        let (a, b) = cantor_unpair(payload);
        // Children have smaller codes except at 0, which would be ~(code 0).
        if a >= code || b >= code {
            return None;
        }
        let unary = |k: fn(Box<SatFormula>) -> SatFormula| {
            if b != 0 {
                return None;
            }
            Some(k(Box::new(self.decode(a)?)))
        };
        let binary = |k: fn(Box<SatFormula>, Box<SatFormula>) -> SatFormula| {
            Some(k(Box::new(self.decode(a)?), Box::new(self.decode(b)?)))
        };
        match tag {
            NOT => unary(SatFormula::Not),
            BOX => unary(SatFormula::Box),
            DAGGER => unary(SatFormula::P),
            AND => binary(SatFormula::And),
            OR => binary(SatFormula::Or),
            IMP => binary(SatFormula::Imp),
            IFF => binary(SatFormula::Iff),
            _ => match payload {
                0 => Some(SatFormula::Bot),
                1 => Some(SatFormula::Top),
                _ => None,
            },
        }
    }

    /// Every formula with code below `m`, in code order.
    pub fn universe_below(&self, m: u64) -> Vec<SatFormula> {
        (0..m as u128).filter_map(|c| self.decode(c)).collect()
    }
}
