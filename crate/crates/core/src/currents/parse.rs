//! Textual grammar for current expressions.
//!
//! ```text
//! expr    := ['-'] product (('+' | '-') product)*
//! product := postfix ('*' postfix)*           (normal-ordered product)
//! postfix := primary ['@' scale]              (argument rescaling)
//! primary := '[' scalar ']' | 'z' ['^' quarter] | 'nprod(' expr {',' expr} ')'
//!          | 'diff(' expr ')' | 'X+' | 'X-' | generator | '(' expr ')'
//! scale   := ['-'] ('1' | 'u' ['^' int] | 'q' ['^' (int | '(' int '/' int ')')])
//! ```

use super::{generator, nproduct, parse_quarter, qdifference, x_minus, x_plus, CurrentError, CurrentExpr, Generator, Scale};
use crate::qscalar::UScalar;

fn err(msg: impl Into<String>) -> CurrentError {
    CurrentError::Parse(msg.into())
}

struct P<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> P<'a> {
    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().unwrap().len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), CurrentError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(err(format!("expected {tok:?} at offset {}", self.pos)))
        }
    }

    fn int(&mut self) -> Result<i32, CurrentError> {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .char_indices()
            .take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && *c == '-'))
            .count();
        let v = r[..len].parse().map_err(|_| err(format!("expected integer at offset {}", self.pos)))?;
        self.pos += len;
        Ok(v)
    }

    fn expr(&mut self) -> Result<CurrentExpr, CurrentError> {
        let mut acc = if self.eat("-") {
            self.product()?.scale(&UScalar::from_int(-1))
        } else {
            self.product()?
        };
        loop {
            if self.eat("+") {
                acc = acc.add(&self.product()?);
            } else if self.eat("-") {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<CurrentExpr, CurrentError> {
        let mut parts = vec![self.postfix()?];
        while self.eat("*") {
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { nproduct(&parts) })
    }

    fn postfix(&mut self) -> Result<CurrentExpr, CurrentError> {
        let e = self.primary()?;
        if self.eat("@") {
            let c = self.scale()?;
            return e.rescale(c);
        }
        Ok(e)
    }

    fn scale(&mut self) -> Result<Scale, CurrentError> {
        let sign = if self.eat("-") { -1 } else { 1 };
        let upow = if self.eat("1") {
            0
        } else if self.eat("u") {
            if self.eat("^") {
                self.int()?
            } else {
                1
            }
        } else if self.eat("q") {
            if self.eat("^") {
                if self.eat("(") {
                    let n = self.int()?;
                    self.expect("/")?;
                    let d = self.int()?;
                    self.expect(")")?;
                    if d == 0 || (4 * n) % d != 0 {
                        return Err(err("scale must be a power of q^(1/4)"));
                    }
                    4 * n / d
                } else {
                    4 * self.int()?
                }
            } else {
                4
            }
        } else {
            return Err(err(format!("expected scale at offset {}", self.pos)));
        };
        Ok(Scale { sign, upow })
    }

    fn primary(&mut self) -> Result<CurrentExpr, CurrentError> {
        self.skip_ws();
        if self.eat("[") {
            let close = self.rest().find(']').ok_or_else(|| err("unclosed '['"))?;
            let text = &self.rest()[..close];
            let c: UScalar = text.parse()?;
            self.pos += close + 1;
            return Ok(CurrentExpr::identity().scale(&c));
        }
        if self.eat("nprod(") {
            let mut parts = vec![self.expr()?];
            while self.eat(",") {
                parts.push(self.expr()?);
            }
            self.expect(")")?;
            return Ok(nproduct(&parts));
        }
        if self.eat("diff(") {
            let e = self.expr()?;
            self.expect(")")?;
            return qdifference(&e);
        }
        if self.eat("(") {
            let e = self.expr()?;
            self.expect(")")?;
            return Ok(e);
        }
        if self.eat("X+") {
            return Ok(x_plus());
        }
        if self.eat("X-") {
            return Ok(x_minus());
        }
        for name in ["Ya+", "Ya-", "Yb+", "Yb-", "J+", "J-", "Psi", "Phi"] {
            if self.eat(name) {
                return Ok(generator(name.parse::<Generator>()?, Scale::ONE));
            }
        }
        if self.eat("z") {
            if !self.eat("^") {
                return Ok(CurrentExpr::z_power(4));
            }
            self.skip_ws();
            let r = self.rest();
            let len = if r.starts_with('(') {
                r.find(')').map(|i| i + 1).ok_or_else(|| err("unclosed '('"))?
            } else {
                r.char_indices().take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && *c == '-')).count()
            };
            let e4 = parse_quarter(&r[..len]).ok_or_else(|| err("bad z exponent"))?;
            self.pos += len;
            return Ok(CurrentExpr::z_power(e4));
        }
        Err(err(format!("unexpected input at offset {}: {:?}", self.pos, self.rest())))
    }
}

pub fn parse_expr(s: &str) -> Result<CurrentExpr, CurrentError> {
    let mut p = P { s, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::m_plus_1;

    #[test]
    fn parses_m_current() {
        assert_eq!(parse_expr("nprod(Ya+@1, Yb+@q, Yb+@1)").unwrap(), m_plus_1());
        assert_eq!(parse_expr("Ya+ * Yb+@u^4 * Yb+").unwrap(), m_plus_1());
        assert_eq!(parse_expr("J+@q^(3/2)").unwrap(), generator(Generator::JPlus, Scale::u(6)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_expr("Yc+").is_err());
        assert!(parse_expr("Ya+@q^(1/3)").is_err());
        assert!(parse_expr("nprod(Ya+").is_err());
    }
}
