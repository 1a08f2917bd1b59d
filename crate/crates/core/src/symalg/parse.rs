//! Recursive-descent parser for rational expressions such as
//! `(1 - d)/c`, `x0^-1`, `1/2*b*c - 3`.

use num_bigint::BigInt;

use super::monomial::{Monomial, Variable};
use super::polynomial::Polynomial;
use super::rational_function::RationalFunction;
use super::{SymError, Q};

pub fn parse_rational_function(s: &str) -> Result<RationalFunction, SymError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, SymError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, SymError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.power()?;
                    let inv = d.inv().map_err(|_| self.err("division by zero"))?;
                    acc = &acc * &inv;
                }
                // implicit multiplication: `2x`, `b(c+1)`
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunction, SymError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int_exponent()?;
            return base.powi(e).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn int_exponent(&mut self) -> Result<i32, SymError> {
        self.skip_ws();
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer exponent"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: i32 = s.parse().map_err(|_| self.err("exponent overflow"))?;
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<RationalFunction, SymError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = s.parse().map_err(|_| self.err("bad integer"))?;
                Ok(RationalFunction::from_q(Q::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(RationalFunction::from_poly(Polynomial::term(
                    Q::from_integer(1.into()),
                    Monomial::var(Variable::new(s)),
                )))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let a = parse_rational_function("(1 - d)/c").unwrap();
        assert_eq!(a.to_string(), "c^-1 - c^-1*d");
        let b = parse_rational_function("-(d-1)/c").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_rational_function("2x0^2").unwrap().to_string(), "2*x0^2");
        assert!(parse_rational_function("1/0").is_err());
        assert!(parse_rational_function("x +").is_err());
    }
}
