//! Polynomial input syntax.
//!
//! ```text
//! poly  := ["-"] term (("+" | "-") term)*
//! term  := coef ["*"] [mono] | mono
//! mono  := VAR ["^" INT]
//! coef  := INT | "[" DIGITS "]"
//! ```
//!
//! `INT` is reduced into the prime field. A bracketed coefficient is an
//! element of F_{p^m} written as base-p digits, lowest first, as printed by
//! [`Poly::display`]. Whitespace is ignored; `VAR` is `T` unless stated.

use crate::ffpoly::{decode_elem, Field, FqElem, Poly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse polynomial {input:?} at byte {pos}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

struct Cursor<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    i: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.src.len(), |&(p, _)| p)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { input: self.src.to_string(), pos: self.pos(), msg: msg.into() }
    }

    fn int(&mut self) -> Option<u64> {
        let start = self.i;
        let mut v: u64 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            v = v.checked_mul(10)?.checked_add(d as u64)?;
            self.i += 1;
        }
        (self.i > start).then_some(v)
    }
}

/// Parses `s` as a polynomial in `var` over `field`.
pub fn parse_poly(field: &Field, s: &str, var: char) -> Result<Poly, ParseError> {
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut cur = Cursor { src: s, chars, i: 0 };
    if cur.peek().is_none() {
        return Err(cur.err("empty input"));
    }
    let mut coeffs: Vec<FqElem> = Vec::new();
    let mut sign = FqElem::ONE;
    if cur.peek() == Some('-') {
        sign = field.neg(FqElem::ONE);
        cur.i += 1;
    }
    loop {
        let mut coef = None;
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = cur.int().ok_or_else(|| cur.err("integer overflow"))?;
                coef = Some(field.from_int((n % field.p() as u64) as i64));
            }
            Some('[') => {
                cur.i += 1;
                let start = cur.i;
                while cur.peek().is_some_and(|c| c != ']') {
                    cur.i += 1;
                }
                if cur.peek() != Some(']') {
                    return Err(cur.err("unterminated '['"));
                }
                let digits: String = cur.chars[start..cur.i].iter().map(|&(_, c)| c).collect();
                cur.i += 1;
                coef = Some(decode_elem(field, &digits).ok_or_else(|| cur.err(format!("invalid field element [{digits}]")))?);
            }
            _ => {}
        }
        if coef.is_some() && cur.peek() == Some('*') {
            cur.i += 1;
            if cur.peek() != Some(var) {
                return Err(cur.err(format!("expected {var} after '*'")));
            }
        }
        let mut exp = 0usize;
        if cur.peek() == Some(var) {
            cur.i += 1;
            exp = 1;
            if cur.peek() == Some('^') {
                cur.i += 1;
                exp = cur.int().ok_or_else(|| cur.err("expected exponent"))? as usize;
                if exp > 1 << 20 {
                    return Err(cur.err("exponent too large"));
                }
            }
        } else if coef.is_none() {
            return Err(cur.err(format!("expected a coefficient or {var}")));
        }
        let c = field.mul(sign, coef.unwrap_or(FqElem::ONE));
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, FqElem::ZERO);
        }
        coeffs[exp] = field.add(coeffs[exp], c);
        match cur.peek() {
            None => break,
            Some('+') => sign = FqElem::ONE,
            Some('-') => sign = field.neg(FqElem::ONE),
            Some(c) => return Err(cur.err(format!("unexpected {c:?}"))),
        }
        cur.i += 1;
    }
    Ok(Poly::new(field, coeffs))
}
