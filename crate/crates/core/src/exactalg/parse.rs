//! Expression grammar for rational functions:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' exponent)?
//! exponent := '-'? integer | '(' '-'? integer ')'
//! atom  := integer | 'x' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::ratfun::RatFun;
use super::AlgError;

pub fn parse_ratfun(src: &str) -> Result<RatFun, AlgError> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgError {
        AlgError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFun, AlgError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, AlgError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| AlgError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFun, AlgError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun, AlgError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let at = self.pos;
        let n = self.integer()?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected ')' after exponent"));
        }
        let e: i32 = i32::try_from(n)
            .ok()
            .filter(|e| *e <= 256)
            .ok_or_else(|| AlgError::Parse {
                pos: at,
                msg: "exponent too large".into(),
            })?;
        base.pow(if neg { -e } else { e }).map_err(|_| AlgError::Parse {
            pos: at,
            msg: "negative power of zero".into(),
        })
    }

    fn atom(&mut self) -> Result<RatFun, AlgError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RatFun::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().unwrap();
                Ok(RatFun::constant(n.into()))
            }
            Some(_) => Err(self.err("expected number, 'x' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<i64, AlgError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| AlgError::Parse {
                pos: start,
                msg: "exponent too large".into(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::Poly;

    #[test]
    fn precedence() {
        let f = parse_ratfun("-x^2 + 3*x - 1/2").unwrap();
        let g = RatFun::from_poly(Poly::from_coeffs(vec![
            crate::exactalg::rat::rat(-1, 2),
            crate::exactalg::rat::int(3),
            crate::exactalg::rat::int(-1),
        ]));
        assert_eq!(f, g);
        assert_eq!(parse_ratfun("2^-1*x").unwrap(), parse_ratfun("x/2").unwrap());
        assert_eq!(parse_ratfun("x^(-2)").unwrap(), parse_ratfun("1/x^2").unwrap());
    }

    #[test]
    fn errors_carry_position() {
        match parse_ratfun("1 + y") {
            Err(AlgError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_ratfun("1/(x-x)") {
            Err(AlgError::Parse { pos, msg }) => {
                assert_eq!(pos, 1);
                assert!(msg.contains("division"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_ratfun("(x+1").is_err());
        assert!(parse_ratfun("").is_err());
        assert!(parse_ratfun("x x").is_err());
    }
}
