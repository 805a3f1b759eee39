//! Shared tokenizer and term parser for the univariate and bivariate
//! polynomial text grammars.
//!
//! A polynomial is a `+`/`-` separated sum of terms; a term is a
//! `*`-separated product of factors, each factor a coefficient (decimal
//! residue, bracketed element, `g` or `g^i`) or a variable power (`x`, `x^k`,
//! and `y`, `y^k` when two variables are allowed). Whitespace is ignored.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

pub(crate) struct Term {
    pub coeff: FieldElem,
    pub xpow: usize,
    pub ypow: usize,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn exponent(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.bump();
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return self.err("expected exponent after `^`");
        }
        d.parse().or_else(|_| self.err("exponent too large"))
    }

    fn bracketed(&mut self) -> Result<&'a str> {
        let start = self.pos;
        let mut depth = 0;
        while let Some(c) = self.bump() {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(&self.src[start..self.pos]);
                    }
                }
                _ => {}
            }
        }
        Err(Error::Syntax {
            pos: start,
            msg: "unclosed `[`".into(),
        })
    }
}

pub(crate) fn parse_terms(text: &str, ctx: &FieldCtx, allow_y: bool) -> Result<Vec<Term>> {
    let mut cur = Cursor { src: text, pos: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut negate = false;
        match cur.peek() {
            None if first => return cur.err("empty polynomial"),
            None => return cur.err("expected a term after sign"),
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                negate = true;
            }
            Some(_) if first => {}
            Some(c) => return cur.err(format!("unexpected `{c}`")),
        }
        first = false;
        let mut term = parse_term(&mut cur, ctx, allow_y)?;
        if negate {
            term.coeff = -term.coeff;
        }
        terms.push(term);
        cur.skip_ws();
        if cur.peek().is_none() {
            return Ok(terms);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>, ctx: &FieldCtx, allow_y: bool) -> Result<Term> {
    let mut term = Term {
        coeff: ctx.one(),
        xpow: 0,
        ypow: 0,
    };
    loop {
        cur.skip_ws();
        let start = cur.pos;
        match cur.peek() {
            Some('x') => {
                cur.bump();
                term.xpow += cur.exponent()?;
            }
            Some('y') if allow_y => {
                cur.bump();
                term.ypow += cur.exponent()?;
            }
            Some('g') => {
                cur.bump();
                let e = cur.exponent()?;
                let v = ctx
                    .parse_elem(&format!("g^{e}"))
                    .map_err(|e| relocate(e, start))?;
                term.coeff = &term.coeff * &v;
            }
            Some('[') => {
                let lit = cur.bracketed()?;
                let v = ctx.parse_elem(lit).map_err(|e| relocate(e, start))?;
                term.coeff = &term.coeff * &v;
            }
            Some(c) if c.is_ascii_digit() => {
                let d = cur.digits();
                let v = ctx.parse_elem(d).map_err(|e| relocate(e, start))?;
                term.coeff = &term.coeff * &v;
            }
            Some(c) => return cur.err(format!("unexpected `{c}`")),
            None => return cur.err("unexpected end of input"),
        }
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.bump();
        } else {
            return Ok(term);
        }
    }
}

fn relocate(e: Error, pos: usize) -> Error {
    match e {
        Error::Syntax { msg, .. } => Error::Syntax { pos, msg },
        other => other,
    }
}

/// `c*v1*v2` with unit coefficients omitted unless the monomial is empty.
pub(crate) fn format_monomial(coeff: &FieldElem, vars: &[(char, usize)]) -> String {
    let mut parts = Vec::new();
    let has_var = vars.iter().any(|&(_, e)| e > 0);
    if !coeff.is_one() || !has_var {
        parts.push(coeff.to_string());
    }
    for &(v, e) in vars {
        match e {
            0 => {}
            1 => parts.push(v.to_string()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

macro_rules! serialize_as_text {
    ($($t:ty),*) => {$(
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
    )*};
}

serialize_as_text!(
    crate::field::FieldElem,
    crate::poly::Poly,
    crate::diamond::BivarPoly,
    crate::diamond::DiamondOp
);
