//! Parser for binary forms written as `x^3 - 3*x*y^2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Divisors must be nonzero constants. The result must be a nonzero
//! homogeneous polynomial of positive degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::BinaryForm;

/// Largest exponent and largest total degree accepted.
pub const MAX_DEGREE: u32 = 64;
const MAX_DIGITS: usize = 256;
const MAX_NESTING: usize = 64;

type Poly2 = BTreeMap<(u32, u32), BigRational>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { position, message: message.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn is_minus(c: char) -> bool {
        c == '-' || c == '\u{2212}'
    }

    fn expr(&mut self) -> Result<Poly2> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    let t = self.term()?;
                    add_into(&mut acc, &t, false);
                }
                Some(c) if Self::is_minus(c) => {
                    self.bump();
                    let t = self.term()?;
                    add_into(&mut acc, &t, true);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly2> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    let start = self.pos;
                    let rhs = self.unary()?;
                    acc = mul(&acc, &rhs).or_else(|_| err(start, format!("degree exceeds {MAX_DEGREE}")))?;
                }
                Some('/') => {
                    self.bump();
                    self.skip_ws();
                    let start = self.pos;
                    let rhs = self.unary()?;
                    let divisor = match rhs.get(&(0, 0)) {
                        Some(c) if rhs.len() == 1 => c.clone(),
                        _ => return err(start, "divisor must be a nonzero constant"),
                    };
                    for v in acc.values_mut() {
                        *v /= &divisor;
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly2> {
        match self.peek() {
            Some('+') => {
                self.bump();
                self.nested(|p| p.unary())
            }
            Some(c) if Self::is_minus(c) => {
                self.bump();
                let mut p = self.nested(|p| p.unary())?;
                for v in p.values_mut() {
                    *v = -std::mem::take(v);
                }
                Ok(p)
            }
            _ => self.power(),
        }
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return err(self.pos, "expression nested too deeply");
        }
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn power(&mut self) -> Result<Poly2> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.bump();
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return err(start, "expected a nonnegative integer exponent");
        }
        let e: u32 = match digits.parse() {
            Ok(e) if e <= MAX_DEGREE => e,
            _ => return err(start, format!("exponent larger than {MAX_DEGREE}")),
        };
        let mut acc: Poly2 = BTreeMap::from([((0, 0), BigRational::one())]);
        for _ in 0..e {
            acc = mul(&acc, &base).or_else(|_| err(start, format!("degree exceeds {MAX_DEGREE}")))?;
        }
        Ok(acc)
    }

    fn digits(&mut self) -> &'a str {
        let rest = &self.src[self.pos..];
        let len = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
        self.pos += len;
        &rest[..len]
    }

    fn atom(&mut self) -> Result<Poly2> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('x') => {
                self.bump();
                Ok(BTreeMap::from([((1, 0), BigRational::one())]))
            }
            Some('y') => {
                self.bump();
                Ok(BTreeMap::from([((0, 1), BigRational::one())]))
            }
            Some('(') => {
                self.bump();
                let inner = self.nested(|p| p.expr())?;
                if self.bump() != Some(')') {
                    return err(self.pos, "expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                if digits.len() > MAX_DIGITS {
                    return err(start, "integer literal too long");
                }
                let v: BigInt = digits.parse().expect("ascii digits");
                let mut p = BTreeMap::new();
                if !v.is_zero() {
                    p.insert((0, 0), BigRational::from_integer(v));
                }
                Ok(p)
            }
            Some(c) => err(start, format!("unexpected character {c:?}")),
            None => err(start, "unexpected end of input"),
        }
    }
}

fn add_into(acc: &mut Poly2, rhs: &Poly2, negate: bool) {
    for (k, v) in rhs {
        let e = acc.entry(*k).or_insert_with(BigRational::zero);
        if negate {
            *e -= v;
        } else {
            *e += v;
        }
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

fn mul(a: &Poly2, b: &Poly2) -> std::result::Result<Poly2, ()> {
    let mut out = Poly2::new();
    for ((ax, ay), av) in a {
        for ((bx, by), bv) in b {
            let key = (ax + bx, ay + by);
            if key.0 + key.1 > MAX_DEGREE {
                return Err(());
            }
            *out.entry(key).or_insert_with(BigRational::zero) += av * bv;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

pub fn parse_binary_form(src: &str) -> Result<BinaryForm> {
    let mut p = Parser { src, pos: 0, depth: 0 };
    let poly = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected character {c:?}"));
    }
    let mut degrees = poly.keys().map(|(a, b)| a + b);
    let Some(d) = degrees.next() else {
        return err(0, "the zero polynomial has no degree");
    };
    if degrees.any(|e| e != d) {
        return err(0, "polynomial is not homogeneous");
    }
    if d == 0 {
        return err(0, "form must have positive degree");
    }
    let coeffs = (0..=d).map(|i| poly.get(&(d - i, i)).cloned().unwrap_or_else(BigRational::zero)).collect();
    BinaryForm::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(f: &BinaryForm) -> Vec<i64> {
        use num_traits::ToPrimitive;
        f.coeffs().iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(ints(&parse_binary_form("x^3 - 3*x*y^2").unwrap()), vec![1, 0, -3, 0]);
        assert_eq!(ints(&parse_binary_form("x^3*y").unwrap()), vec![0, 1, 0, 0, 0]);
        assert_eq!(ints(&parse_binary_form("x*y").unwrap()), vec![0, 1, 0]);
        assert_eq!(ints(&parse_binary_form("(x+y)^2").unwrap()), vec![1, 2, 1]);
        assert_eq!(ints(&parse_binary_form("x^3 \u{2212} 3*x*y^2").unwrap()), vec![1, 0, -3, 0]);
        assert_eq!(ints(&parse_binary_form(" - y^2 + 2 * x * y ").unwrap()), vec![0, 2, -1]);
        let f = parse_binary_form("x^2 + (3/4)*y^2 - x*y/6").unwrap();
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(f.coeffs(), &[q(1, 1), q(-1, 6), q(3, 4)]);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "",
            "x +",
            "x^2 + y",
            "3",
            "x - x",
            "x^",
            "x^999",
            "(x+y",
            "x ** 2",
            "z",
            "x^40*y^40",
            "x/0",
            "x^2/y",
            "x/",
        ] {
            assert!(parse_binary_form(bad).is_err(), "{bad:?} should fail");
        }
        let deep = format!("{}x{}", "(".repeat(500), ")".repeat(500));
        assert!(parse_binary_form(&deep).is_err());
    }

    #[test]
    fn error_position_points_at_offender() {
        match parse_binary_form("x^2 + 2*q") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
