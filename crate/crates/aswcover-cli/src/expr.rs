//! Expression syntax for rational functions over F_{p^k}.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := [scalar '*'] atom ['^' sint] | scalar
//! atom   := 'x' | '(' 'x' '-' scalar ')' | '1/' atom
//! scalar := ['-'] digits | '[' int (',' int)* ']'
//! ```
//!
//! A bracket scalar `[c0,c1,...]` denotes the field element with the given
//! coefficients over the prime field; a bare integer is reduced mod p.
//! Negative exponents put the factor in the denominator, so `1/x + x`,
//! `(x-1)^-2`, and `1/x^5` all parse.

use std::fmt;

use aswcover::gf::{FieldDesc, FqElem};
use aswcover::ratfunc::RatFunc;

use crate::report::fmt_elem;

/// A syntax error with the byte offset of the offending character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a FieldDesc,
}

/// The multiplicative base of a term.
enum Atom {
    X,
    Linear(FqElem),
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, want: u8) -> Result<(), ParseError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            got => Err(self.err_at(
                self.pos.saturating_sub(got.map_or(0, |_| 1)),
                format!("expected '{}'", want as char),
            )),
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        self.err_at(self.pos, msg)
    }

    fn err_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let val: i64 = digits
            .parse()
            .map_err(|_| self.err_at(start, "integer out of range"))?;
        Ok(if neg { -val } else { val })
    }

    fn scalar(&mut self) -> Result<FqElem, ParseError> {
        if self.peek() == Some(b'[') {
            let start = self.pos;
            self.pos += 1;
            let mut coeffs = Vec::new();
            loop {
                coeffs.push(self.integer()?);
                match self.bump() {
                    Some(b',') => continue,
                    Some(b']') => break,
                    _ => return Err(self.err("expected ',' or ']' in bracket scalar")),
                }
            }
            self.field
                .parse_elem(&coeffs)
                .map_err(|e| self.err_at(start, e.to_string()))
        } else {
            Ok(self.field.from_int(self.integer()?))
        }
    }

    /// True when the upcoming token can begin a scalar.
    fn at_scalar(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'[' || c == b'-')
    }

    /// True when a literal `1/` follows, which is the reciprocal atom rather
    /// than the scalar one.
    fn at_reciprocal(&mut self) -> bool {
        let save = self.pos;
        let is = self.peek() == Some(b'1') && {
            self.pos += 1;
            self.peek() == Some(b'/')
        };
        self.pos = save;
        is
    }

    fn atom(&mut self) -> Result<(Atom, i64), ParseError> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok((Atom::X, 1))
            }
            Some(b'(') => {
                self.pos += 1;
                self.expect(b'x')?;
                self.expect(b'-')?;
                let a = self.scalar()?;
                self.expect(b')')?;
                Ok((Atom::Linear(a), 1))
            }
            Some(b'1') => {
                self.pos += 1;
                self.expect(b'/')?;
                let (base, sign) = self.atom()?;
                Ok((base, -sign))
            }
            _ => Err(self.err("expected 'x', '(x - a)', or '1/...'")),
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let f = self.field;
        let coeff = if self.at_scalar() && !self.at_reciprocal() {
            let c = self.scalar()?;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(RatFunc::constant(c));
            }
            c
        } else {
            f.one()
        };
        let (base, sign) = self.atom()?;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.integer()?
        } else {
            1
        };
        let exp = sign * exp;
        let powered = match base {
            Atom::X => RatFunc::x_pow(f, exp),
            Atom::Linear(a) => RatFunc::linear_pow(f, &a, exp),
        };
        Ok(powered.mul_scalar(f, &coeff))
    }
}

/// Parses the expression grammar above into an exact rational function.
pub fn parse_ratfunc_expr(src: &str, field: &FieldDesc) -> Result<RatFunc, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        field,
    };
    let mut acc = RatFunc::zero();
    let mut negate = false;
    if p.peek() == Some(b'-') {
        // A leading '-' negates the first term ("-x + 1"); a scalar sign is
        // handled inside term(), so only consume when an atom follows.
        let save = p.pos;
        p.pos += 1;
        if p.at_scalar() && !p.at_reciprocal() {
            p.pos = save;
        } else {
            negate = true;
        }
    }
    loop {
        let t = p.term()?;
        acc = if negate {
            acc.sub(field, &t)
        } else {
            acc.add(field, &t)
        };
        match p.peek() {
            None => return Ok(acc),
            Some(b'+') => {
                p.pos += 1;
                negate = false;
            }
            Some(b'-') => {
                p.pos += 1;
                negate = true;
            }
            Some(c) => return Err(p.err(format!("unexpected character '{}'", c as char))),
        }
    }
}

fn push_term(out: &mut Vec<String>, f: &FieldDesc, c: &FqElem, base: Option<(String, i64)>) {
    if c.is_zero() {
        return;
    }
    let coeff = fmt_elem(c);
    match base {
        None => out.push(coeff),
        Some((b, e)) => {
            let pow = if e == 1 { b } else { format!("{b}^{e}") };
            if c == &f.one() {
                out.push(pow);
            } else {
                out.push(format!("{coeff}*{pow}"));
            }
        }
    }
}

/// Renders a rational function in the expression grammar (partial-fraction
/// form), so that `parse(print(r)) == r`.
pub fn print_ratfunc(f: &FieldDesc, r: &RatFunc) -> String {
    let pf = r.pf_decompose(f);
    let mut terms = Vec::new();
    for (i, c) in pf.polypart.coeffs().iter().enumerate() {
        let base = (i > 0).then(|| ("x".to_string(), i as i64));
        push_term(&mut terms, f, c, base);
    }
    for (a, coeffs) in &pf.principal {
        for (j, c) in coeffs.iter().enumerate() {
            let base = if a.is_zero() {
                "x".to_string()
            } else {
                format!("(x-{})", fmt_elem(a))
            };
            push_term(&mut terms, f, c, Some((base, -(j as i64) - 1)));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}
