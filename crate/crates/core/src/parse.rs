//! Text grammar for polynomials.
//!
//! Accepts sums of products of numeric literals, `i`, generators `x3`/`w2`
//! (1-based), parameter names, powers `^n`, parentheses and division by
//! nonzero constants. Canonical output from [`Polynomial::format`] parses
//! back to the same value.

use alloc::format;
use alloc::string::{String, ToString};

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::scalar::Scalar;

/// Parses `text` with no named parameters.
pub fn parse_poly<S: Scalar>(text: &str, dim: usize, kind: GeneratorKind) -> Result<Polynomial<S>> {
    parse_poly_with(text, dim, kind, &|_| None)
}

/// Parses `text`, resolving identifiers through `params`.
pub fn parse_poly_with<S: Scalar>(
    text: &str,
    dim: usize,
    kind: GeneratorKind,
    params: &dyn Fn(&str) -> Option<S>,
) -> Result<Polynomial<S>> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, dim, kind, params };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a, S: Scalar> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
    kind: GeneratorKind,
    params: &'a dyn Fn(&str) -> Option<S>,
}

impl<S: Scalar> Parser<'_, S> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn constant(&self, c: S) -> Polynomial<S> {
        Polynomial::constant(self.dim, self.kind, c)
    }

    fn expr(&mut self) -> Result<Polynomial<S>> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
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

    fn term(&mut self) -> Result<Polynomial<S>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.power()?;
                    let c = match rhs.max_degree() {
                        None => None,
                        Some(0) => rhs.coeff(&MultiIndex::zero(self.dim)).inv(),
                        Some(_) => None,
                    };
                    match c {
                        Some(inv) => acc = acc.scale(&inv),
                        None => {
                            return Err(Error::Parse {
                                pos: at,
                                msg: "division by a zero or non-constant expression".into(),
                            })
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial<S>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected an unsigned exponent"));
            }
            let e: u32 = core::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { pos: start, msg: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<S>> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn number(&mut self) -> Result<Polynomial<S>> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
                p += 1;
            }
            if p < s.len() && s[p].is_ascii_digit() {
                digits(&mut p);
                self.pos = p;
            }
        } else if self.pos + 1 < s.len()
            && s[self.pos] == b'/'
            && s[self.pos + 1].is_ascii_digit()
            && s[start..self.pos].iter().all(|b| b.is_ascii_digit())
        {
            // `a/b` written without spaces is one rational literal, so that
            // `1/3i` means `(1/3)i`.
            self.pos += 1;
            digits(&mut self.pos);
        }
        let text = core::str::from_utf8(&s[start..self.pos]).unwrap_or("");
        let value = S::parse_literal(text)
            .ok_or_else(|| Error::Parse { pos: start, msg: format!("bad number `{text}`") })?;
        let imaginary = self.pos < s.len()
            && s[self.pos] == b'i'
            && !s.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
        if imaginary {
            self.pos += 1;
            return Ok(self.constant(value.times(&S::imag_unit())));
        }
        Ok(self.constant(value))
    }

    fn identifier(&mut self) -> Result<Polynomial<S>> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if name == "i" {
            return Ok(self.constant(S::imag_unit()));
        }
        let bytes = name.as_bytes();
        let generator = bytes.len() >= 2
            && (bytes[0] == b'x' || bytes[0] == b'w')
            && bytes[1..].iter().all(|b| b.is_ascii_digit());
        if generator {
            let kind = if bytes[0] == b'x' { GeneratorKind::X } else { GeneratorKind::W };
            let index: usize = name[1..]
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: "generator index too large".into() })?;
            if kind != self.kind {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("generator `{name}` does not match {}-coordinates", self.kind.symbol()),
                });
            }
            if index == 0 {
                return Err(Error::Parse { pos: start, msg: "generator indices start at 1".into() });
            }
            if index > self.dim {
                return Err(Error::GeneratorOutOfRange { index, dim: self.dim });
            }
            return Ok(Polynomial::generator(self.dim, self.kind, index - 1));
        }
        match (self.params)(name) {
            Some(v) => Ok(self.constant(v)),
            None => Err(Error::Parse { pos: start, msg: format!("unknown identifier `{name}`") }),
        }
    }
}

/// Canonical text of `f` (round-trip float precision when `full`).
pub fn format_poly<S: Scalar>(f: &Polynomial<S>, full: bool) -> String {
    f.format(full)
}
