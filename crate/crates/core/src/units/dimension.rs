//! Unit exponent vectors over the seven SI base units, and a parser for
//! unit strings such as `kg*m^3/(s^3*A^2)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, Signed, Zero};

use super::matrix::{format_rational, rat, Rational};
use crate::{Error, Result};

/// SI base units, in the order of the SI table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseUnit {
    Length,
    Mass,
    Time,
    Current,
    Temperature,
    Amount,
    Luminosity,
}

impl BaseUnit {
    pub const ALL: [BaseUnit; 7] = [
        BaseUnit::Length,
        BaseUnit::Mass,
        BaseUnit::Time,
        BaseUnit::Current,
        BaseUnit::Temperature,
        BaseUnit::Amount,
        BaseUnit::Luminosity,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BaseUnit::Length => "m",
            BaseUnit::Mass => "kg",
            BaseUnit::Time => "s",
            BaseUnit::Current => "A",
            BaseUnit::Temperature => "K",
            BaseUnit::Amount => "mol",
            BaseUnit::Luminosity => "cd",
        }
    }

    /// Dimension letter (`L`, `M`, `T`, ...).
    pub fn label(self) -> &'static str {
        match self {
            BaseUnit::Length => "L",
            BaseUnit::Mass => "M",
            BaseUnit::Time => "T",
            BaseUnit::Current => "C",
            BaseUnit::Temperature => "Theta",
            BaseUnit::Amount => "N",
            BaseUnit::Luminosity => "J",
        }
    }

    pub fn from_symbol(s: &str) -> Option<BaseUnit> {
        BaseUnit::ALL.into_iter().find(|u| u.symbol() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Exact exponent vector; the unit function of a quantity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dimension {
    exponents: [Rational; 7],
}

impl Dimension {
    pub fn unitless() -> Self {
        Self {
            exponents: std::array::from_fn(|_| Rational::zero()),
        }
    }

    pub fn base(unit: BaseUnit) -> Self {
        let mut d = Self::unitless();
        d.exponents[unit.index()] = rat(1);
        d
    }

    pub fn from_exponents(exponents: [Rational; 7]) -> Self {
        Self { exponents }
    }

    pub fn from_integers(exponents: [i64; 7]) -> Self {
        Self {
            exponents: exponents.map(rat),
        }
    }

    pub fn exponent(&self, unit: BaseUnit) -> &Rational {
        &self.exponents[unit.index()]
    }

    pub fn exponents(&self) -> &[Rational; 7] {
        &self.exponents
    }

    pub fn is_unitless(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    pub fn pow(&self, p: &Rational) -> Self {
        Self {
            exponents: std::array::from_fn(|i| &self.exponents[i] * p),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_unit_expression(text)
    }
}

impl Add for &Dimension {
    type Output = Dimension;

    fn add(self, rhs: &Dimension) -> Dimension {
        Dimension {
            exponents: std::array::from_fn(|i| &self.exponents[i] + &rhs.exponents[i]),
        }
    }
}

impl Sub for &Dimension {
    type Output = Dimension;

    fn sub(self, rhs: &Dimension) -> Dimension {
        Dimension {
            exponents: std::array::from_fn(|i| &self.exponents[i] - &rhs.exponents[i]),
        }
    }
}

impl Neg for &Dimension {
    type Output = Dimension;

    fn neg(self) -> Dimension {
        Dimension {
            exponents: std::array::from_fn(|i| -&self.exponents[i]),
        }
    }
}

impl Mul<&Rational> for &Dimension {
    type Output = Dimension;

    fn mul(self, rhs: &Rational) -> Dimension {
        self.pow(rhs)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = BaseUnit::ALL
            .iter()
            .filter(|u| !self.exponent(**u).is_zero())
            .map(|u| {
                let e = self.exponent(*u);
                if e == &rat(1) {
                    u.symbol().to_string()
                } else if e.is_integer() {
                    format!("{}^{}", u.symbol(), format_rational(e))
                } else {
                    format!("{}^({})", u.symbol(), format_rational(e))
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dimension({self})")
    }
}

/// Parses a product of SI base-unit symbols.
///
/// Grammar: `expr := term (('*' | '/') term)*`, `term := atom ('^' exp)?`,
/// `atom := symbol | '1' | '(' expr ')'`, `exp := int | '(' int ('/' int)? ')'`.
/// Integers may carry a sign. The empty string and `1` are unitless.
pub fn parse_unit_expression(text: &str) -> Result<Dimension> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Ok(Dimension::unitless());
    }
    let mut parser = Parser { tokens, pos: 0 };
    let dim = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.error(tok, "unexpected trailing input"));
    }
    Ok(dim)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Symbol(String),
    Int(String),
    Star,
    Slash,
    Caret,
    Minus,
    Plus,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    position: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let single = |tok: Tok| Token {
            tok,
            text: c.to_string(),
            position: pos,
        };
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '*' | '·' => out.push(single(Tok::Star)),
            '/' => out.push(single(Tok::Slash)),
            '^' => out.push(single(Tok::Caret)),
            '-' => out.push(single(Tok::Minus)),
            '+' => out.push(single(Tok::Plus)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push(Token {
                    tok: Tok::Int(s.clone()),
                    text: s,
                    position: pos,
                });
                continue;
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_alphanumeric() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
                out.push(Token {
                    tok: Tok::Symbol(s.clone()),
                    text: s,
                    position: pos,
                });
                continue;
            }
            other => {
                return Err(Error::UnitParse {
                    token: other.to_string(),
                    position: pos,
                    message: "unexpected character".into(),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn end_position(&self) -> usize {
        self.tokens
            .last()
            .map_or(0, |t| t.position + t.text.chars().count())
    }

    fn error(&self, tok: &Token, message: &str) -> Error {
        Error::UnitParse {
            token: tok.text.clone(),
            position: tok.position,
            message: message.into(),
        }
    }

    fn eof(&self, message: &str) -> Error {
        Error::UnitParse {
            token: "<end>".into(),
            position: self.end_position(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Dimension> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t.tok {
                Tok::Star => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Slash => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Dimension> {
        let base = self.atom()?;
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::Caret,
                ..
            })
        ) {
            self.next();
            let e = self.exponent()?;
            return Ok(base.pow(&e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Dimension> {
        let Some(t) = self.next() else {
            return Err(self.eof("expected a unit symbol"));
        };
        match &t.tok {
            Tok::Symbol(s) => BaseUnit::from_symbol(s)
                .map(Dimension::base)
                .ok_or_else(|| self.error(&t, "unknown unit symbol")),
            Tok::Int(s) if s == "1" => Ok(Dimension::unitless()),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token {
                        tok: Tok::RParen, ..
                    }) => Ok(inner),
                    Some(other) => Err(self.error(&other, "expected `)`")),
                    None => Err(self.eof("unclosed `(`")),
                }
            }
            _ => Err(self.error(&t, "expected a unit symbol")),
        }
    }

    fn exponent(&mut self) -> Result<Rational> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::LParen, ..
            }) => {
                self.next();
                let num = self.signed_int()?;
                let mut value = Rational::from_integer(num);
                if matches!(
                    self.peek(),
                    Some(Token {
                        tok: Tok::Slash,
                        ..
                    })
                ) {
                    self.next();
                    let den_tok = self.next().ok_or_else(|| self.eof("missing denominator"))?;
                    let den = match &den_tok.tok {
                        Tok::Int(s) => s.parse::<BigInt>().expect("digits"),
                        _ => return Err(self.error(&den_tok, "malformed exponent denominator")),
                    };
                    if den.is_zero() {
                        return Err(self.error(&den_tok, "zero exponent denominator"));
                    }
                    value /= Rational::from_integer(den);
                }
                match self.next() {
                    Some(Token {
                        tok: Tok::RParen, ..
                    }) => Ok(value),
                    Some(other) => Err(self.error(&other, "expected `)` after exponent")),
                    None => Err(self.eof("unclosed exponent")),
                }
            }
            Some(_) => Ok(Rational::from_integer(self.signed_int()?)),
            None => Err(self.eof("missing exponent")),
        }
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let t = self.next().ok_or_else(|| self.eof("missing exponent"))?;
        let (negative, t) = match t.tok {
            Tok::Minus | Tok::Plus => {
                let neg = t.tok == Tok::Minus;
                let n = self
                    .next()
                    .ok_or_else(|| self.eof("missing exponent digits"))?;
                (neg, n)
            }
            _ => (false, t),
        };
        match &t.tok {
            Tok::Int(s) => {
                let v: BigInt = s.parse().expect("digits");
                Ok(if negative { v.neg() } else { v.abs() })
            }
            _ => Err(self.error(&t, "malformed exponent")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::matrix::ratio;

    fn dim(l: i64, m: i64, t: i64, c: i64) -> Dimension {
        Dimension::from_integers([l, m, t, c, 0, 0, 0])
    }

    #[test]
    fn velocity() {
        assert_eq!(parse_unit_expression("m*s^-1").unwrap(), dim(1, 0, -1, 0));
        assert_eq!(parse_unit_expression("m/s").unwrap(), dim(1, 0, -1, 0));
    }

    #[test]
    fn magnetic_resistivity() {
        let d = parse_unit_expression("kg*m^3/(s^3*A^2)").unwrap();
        assert_eq!(d, dim(3, 1, -3, -2));
    }

    #[test]
    fn unitless_forms() {
        assert!(parse_unit_expression("1").unwrap().is_unitless());
        assert!(parse_unit_expression("").unwrap().is_unitless());
        assert!(parse_unit_expression("  ").unwrap().is_unitless());
        assert!(parse_unit_expression("m/m").unwrap().is_unitless());
        assert_eq!(parse_unit_expression("1/s").unwrap(), dim(0, 0, -1, 0));
    }

    #[test]
    fn rational_exponents() {
        let d = parse_unit_expression("m^(1/2)*kg^(-3/2)").unwrap();
        assert_eq!(d.exponent(BaseUnit::Length), &ratio(1, 2));
        assert_eq!(d.exponent(BaseUnit::Mass), &ratio(-3, 2));
        let g = parse_unit_expression("(m/s)^2").unwrap();
        assert_eq!(g, dim(2, 0, -2, 0));
    }

    #[test]
    fn all_symbols() {
        let d = parse_unit_expression("m*kg*s*A*K*mol*cd").unwrap();
        assert!(d.exponents().iter().all(|e| e == &rat(1)));
    }

    #[test]
    fn unknown_symbol_names_token_and_position() {
        match parse_unit_expression("kg*ft/s") {
            Err(Error::UnitParse {
                token, position, ..
            }) => {
                assert_eq!(token, "ft");
                assert_eq!(position, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_exponents() {
        for bad in ["m^", "m^x", "m^(1/0)", "m^(1/2", "m*", "(m", "m s", "m^1.5"] {
            assert!(
                matches!(parse_unit_expression(bad), Err(Error::UnitParse { .. })),
                "{bad} should fail"
            );
        }
        match parse_unit_expression("m^x") {
            Err(Error::UnitParse {
                token, position, ..
            }) => {
                assert_eq!((token.as_str(), position), ("x", 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn display_round_trips() {
        let d = parse_unit_expression("kg*m^3/(s^3*A^2)").unwrap();
        assert_eq!(parse_unit_expression(&d.to_string()).unwrap(), d);
    }
}
