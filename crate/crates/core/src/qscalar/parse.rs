//! Parser for the rendering produced by `Display`, plus the obvious
//! generalizations: `q` (meaning `u^4`), implicit multiplication, nested
//! parentheses and negative exponents.

use super::{ScalarError, UScalar};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Int(i128),
    U,
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(msg: impl Into<String>) -> ScalarError {
    ScalarError::Parse(msg.into())
}

fn lex(s: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut v: i128 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d as i128))
                        .ok_or_else(|| err("integer literal too large"))?;
                    chars.next();
                }
                out.push(Tok::Int(v));
            }
            _ => {
                chars.next();
                out.push(match c {
                    'u' => Tok::U,
                    'q' => Tok::Q,
                    '+' => Tok::Plus,
                    '-' | '\u{2212}' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    other => return Err(err(format!("unexpected character {other:?}"))),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<UScalar, ScalarError> {
        let mut acc = UScalar::zero();
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                sign = -1;
            }
            Some(Tok::Plus) => {
                self.next();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.next();
        }
    }

    fn term(&mut self) -> Result<UScalar, ScalarError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = acc.checked_div(&self.power()?)?;
                }
                Some(Tok::Int(_) | Tok::U | Tok::Q | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<UScalar, ScalarError> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.next();
        let mut neg = false;
        let mut t = self.next();
        if t == Some(Tok::Minus) {
            neg = true;
            t = self.next();
        }
        let Some(Tok::Int(e)) = t else {
            return Err(err("expected integer exponent"));
        };
        let e = i32::try_from(e).map_err(|_| err("exponent too large"))?;
        let e = if neg { -e } else { e };
        if e < 0 && base.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<UScalar, ScalarError> {
        match self.next() {
            Some(Tok::Int(v)) => Ok(UScalar::from_int(v)),
            Some(Tok::U) => Ok(UScalar::u_pow(1)),
            Some(Tok::Q) => Ok(UScalar::u_pow(4)),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(err("expected ')'"));
                }
                Ok(v)
            }
            Some(Tok::Minus) => Ok(-self.power()?),
            other => Err(err(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(s: &str) -> Result<UScalar, ScalarError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(err("empty input"));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_both_orders_and_q() {
        let a = parse("(-u^2 + 3)/(u^4 - 1)").unwrap();
        let b = parse("(3 - u^2)/(-1 + u^4)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse("q^-1").unwrap(), UScalar::u_pow(-4));
        assert_eq!(parse("2u").unwrap(), UScalar::monomial(2, 1));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("").is_err());
        assert!(parse("u^").is_err());
        assert!(parse("(u").is_err());
        assert!(parse("x").is_err());
        assert!(matches!(parse("1/0"), Err(ScalarError::DivisionByZero)));
    }
}
