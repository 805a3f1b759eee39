//! Prime fields and towers of extensions over them.
//!
//! A [`FieldCtx`] is either `F_p` or `B[t]/(h(t))` for a base context `B` and a
//! monic irreducible `h` over `B`. Elements are stored as flat coordinate
//! vectors over the prime field: an element of a degree-`d` extension of `B` is
//! `d` consecutive chunks, each chunk the coordinates of one `B`-coefficient,
//! constant coefficient first. Because towers are strict, an element of an
//! ancestor context embeds by zero padding, and an element lies in an ancestor
//! exactly when its coordinates past that ancestor's width vanish.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::ntheory;
use crate::poly::Poly;

type BinOp<'a> = dyn Fn(&[u64], &[u64], &mut [u64]) + 'a;

/// Default cap on field cardinality for operations that factor `|F| - 1` or
/// enumerate the whole field.
pub const DEFAULT_CAP: u128 = 1 << 64;

#[derive(Clone)]
pub struct FieldCtx(Arc<CtxInner>);

struct CtxInner {
    p: u64,
    degree: usize,
    abs_degree: usize,
    cardinality: u128,
    base: Option<FieldCtx>,
    /// Non-leading coefficients of the monic modulus, flattened.
    modulus: Vec<u64>,
    /// `p - modulus[i]` per prime coordinate; only used over prime bases.
    neg_modulus: Vec<u64>,
    /// Products of `2 * degree` terms below `p^2` fit in a u64 accumulator.
    narrow: bool,
    /// Operation tables by element index, built on first use for small fields.
    tables: OnceLock<Option<Tables>>,
}

/// Addition, subtraction and multiplication tables of a field with at most
/// [`TABLE_LIMIT`] elements, indexed by `a * size + b`.
struct Tables {
    size: usize,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
}

const TABLE_LIMIT: u128 = 256;

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<FieldCtx> {
        if !ntheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx(Arc::new(CtxInner {
            p,
            degree: 1,
            abs_degree: 1,
            cardinality: p as u128,
            base: None,
            modulus: Vec::new(),
            neg_modulus: Vec::new(),
            narrow: true,
            tables: OnceLock::new(),
        })))
    }

    /// Extends `self` by a monic irreducible `modulus` of degree at least two.
    pub fn extend(&self, modulus: &Poly) -> Result<FieldCtx> {
        if modulus.ctx() != self {
            return Err(Error::CtxMismatch);
        }
        let d = modulus.degree().unwrap_or(0);
        if d < 2 {
            return Err(Error::ModulusDegree(d));
        }
        if !modulus.is_monic() {
            return Err(Error::NotMonic);
        }
        if !modulus.is_irreducible()? {
            return Err(Error::NotIrreducible);
        }
        Ok(self.extend_unchecked(modulus))
    }

    /// Same as [`extend`](Self::extend) but trusts the caller on irreducibility.
    pub(crate) fn extend_unchecked(&self, modulus: &Poly) -> FieldCtx {
        let d = modulus.degree().expect("nonzero modulus");
        let cardinality = self
            .cardinality()
            .checked_pow(d as u32)
            .expect("tower cardinality overflows u128");
        let flat: Vec<u64> = modulus.coeffs()[..d]
            .iter()
            .flat_map(|c| c.coords().iter().copied())
            .collect();
        let p = self.p();
        let neg_modulus = if self.is_prime() {
            flat.iter().map(|&c| (p - c) % p).collect()
        } else {
            Vec::new()
        };
        let narrow = (p as u128 - 1)
            .pow(2)
            .checked_mul(2 * d as u128 + 2)
            .is_some_and(|v| v < u64::MAX as u128);
        FieldCtx(Arc::new(CtxInner {
            p,
            degree: d,
            abs_degree: self.abs_degree() * d,
            cardinality,
            base: Some(self.clone()),
            modulus: flat,
            neg_modulus,
            narrow,
            tables: OnceLock::new(),
        }))
    }

    /// Extends by the first monic irreducible of `degree` in canonical order.
    /// Degree 1 returns `self`.
    pub fn extension_of_degree(&self, degree: usize) -> Result<FieldCtx> {
        if degree == 0 {
            return Err(Error::DegreeZero);
        }
        if degree == 1 {
            return Ok(self.clone());
        }
        self.cardinality()
            .checked_pow(degree as u32)
            .ok_or(Error::CardinalityOverflow)?;
        let h = crate::poly::first_irreducible(self, degree)?;
        Ok(self.extend_unchecked(&h))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn is_prime(&self) -> bool {
        self.0.base.is_none()
    }

    /// Degree over the immediate base.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Degree over the prime field.
    pub fn abs_degree(&self) -> usize {
        self.0.abs_degree
    }

    pub fn cardinality(&self) -> u128 {
        self.0.cardinality
    }

    pub fn base(&self) -> Option<&FieldCtx> {
        self.0.base.as_ref()
    }

    /// The defining modulus over the base, or `None` for a prime field.
    pub fn modulus(&self) -> Option<Poly> {
        let base = self.base()?;
        let w = base.abs_degree();
        let mut coeffs: Vec<FieldElem> = self
            .0
            .modulus
            .chunks(w)
            .map(|c| FieldElem::from_coords(base, c.to_vec()))
            .collect();
        coeffs.push(base.one());
        Some(Poly::new(base, coeffs))
    }

    /// Tower contexts from `self` down to the prime field.
    pub fn tower(&self) -> Vec<FieldCtx> {
        let mut out = vec![self.clone()];
        while let Some(b) = out.last().unwrap().base() {
            out.push(b.clone());
        }
        out
    }

    /// True if `self` is `other` or one of its ancestors.
    pub fn is_subfield_of(&self, other: &FieldCtx) -> bool {
        let mut cur = Some(other);
        while let Some(c) = cur {
            if c.abs_degree() == self.abs_degree() {
                return c == self;
            }
            if c.abs_degree() < self.abs_degree() {
                return false;
            }
            cur = c.base();
        }
        false
    }

    /// The tower member with the given cardinality.
    pub fn subfield_ctx(&self, q: u128) -> Result<FieldCtx> {
        let s = self.subfield_exponent(q)?;
        self.tower()
            .into_iter()
            .find(|c| c.abs_degree() == s)
            .ok_or(Error::SubfieldNotInTower(q))
    }

    /// `s` with `q = p^s` and `s | abs_degree`.
    pub fn subfield_exponent(&self, q: u128) -> Result<usize> {
        match ntheory::log_exact(self.p(), q) {
            Some(s) if s >= 1 && self.abs_degree().is_multiple_of(s as usize) => Ok(s as usize),
            _ => Err(Error::NotASubfieldCardinality(q)),
        }
    }

    pub fn check_cap(&self, cap: u128) -> Result<()> {
        if self.cardinality() > cap {
            Err(Error::CardinalityCapExceeded { cap })
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::from_coords(self, vec![0; self.abs_degree()])
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// The image of an integer under `Z -> F_p -> self`.
    pub fn from_int(&self, n: i64) -> FieldElem {
        let p = self.p() as i128;
        let r = (n as i128).rem_euclid(p) as u64;
        let mut c = vec![0; self.abs_degree()];
        c[0] = r;
        FieldElem::from_coords(self, c)
    }

    /// Residue class of the tower variable; `1` for a prime field.
    pub fn generator(&self) -> FieldElem {
        match self.base() {
            None => self.one(),
            Some(b) if self.degree() > 1 => {
                let mut c = vec![0; self.abs_degree()];
                c[b.abs_degree()] = 1;
                FieldElem::from_coords(self, c)
            }
            Some(_) => self.one(),
        }
    }

    /// Element from base-field coefficients, constant first.
    pub fn from_base_coeffs(&self, coeffs: &[FieldElem]) -> Result<FieldElem> {
        let base = self.base().ok_or(Error::CtxMismatch)?;
        if coeffs.len() != self.degree() {
            return Err(Error::PreconditionViolated(format!(
                "expected {} coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        let mut c = Vec::with_capacity(self.abs_degree());
        for e in coeffs {
            if e.ctx() != base {
                return Err(Error::CtxMismatch);
            }
            c.extend_from_slice(e.coords());
        }
        Ok(FieldElem::from_coords(self, c))
    }

    /// The element with canonical index `idx` (prime coordinates as base-`p`
    /// digits, constant coordinate least significant).
    pub fn element_from_index(&self, mut idx: u128) -> FieldElem {
        let p = self.p() as u128;
        let mut c = vec![0u64; self.abs_degree()];
        for slot in c.iter_mut() {
            *slot = (idx % p) as u64;
            idx /= p;
        }
        FieldElem::from_coords(self, c)
    }

    /// Every element in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.cardinality()).map(move |i| self.element_from_index(i))
    }

    /// Lifts an element of an ancestor context into `self`.
    pub fn embed(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.ctx() == self {
            return Ok(a.clone());
        }
        if !a.ctx().is_subfield_of(self) {
            return Err(Error::CtxMismatch);
        }
        let mut c = a.coords().to_vec();
        c.resize(self.abs_degree(), 0);
        Ok(FieldElem::from_coords(self, c))
    }

    /// Re-expresses `a` (living in an extension of `self`) as an element of `self`.
    pub fn descend(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.ctx() == self {
            return Ok(a.clone());
        }
        if !self.is_subfield_of(a.ctx()) {
            return Err(Error::CtxMismatch);
        }
        let w = self.abs_degree();
        if a.coords()[w..].iter().any(|&c| c != 0) {
            return Err(Error::CoefficientDescentFailure(format!(
                "{a} does not lie in the subfield of order {}",
                self.cardinality()
            )));
        }
        Ok(FieldElem::from_coords(self, a.coords()[..w].to_vec()))
    }

    /// Parses the element text format: a decimal residue (reduced mod `p` and
    /// embedded), `g` / `g^i` for powers of the tower generator, or a bracketed
    /// list of base-field coefficients, constant first.
    pub fn parse_elem(&self, text: &str) -> Result<FieldElem> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: "empty element".into(),
            });
        }
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| Error::Syntax {
                pos: t.len(),
                msg: "unclosed `[`".into(),
            })?;
            let base = self
                .base()
                .ok_or_else(|| Error::CoefficientOutOfField(t.to_string()))?;
            let parts = split_top_level(inner);
            if parts.len() != self.degree() {
                return Err(Error::CoefficientOutOfField(t.to_string()));
            }
            let coeffs = parts
                .iter()
                .map(|s| base.parse_elem(s))
                .collect::<Result<Vec<_>>>()?;
            return self.from_base_coeffs(&coeffs);
        }
        if let Some(rest) = t.strip_prefix('g') {
            if self.is_prime() {
                return Err(Error::CoefficientOutOfField(t.to_string()));
            }
            let e: u128 = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::Syntax {
                        pos: 1,
                        msg: format!("bad power `{t}`"),
                    })?
            };
            return Ok(self.generator().pow(e));
        }
        let (neg, digits) = match t.strip_prefix('-') {
            Some(d) => (true, d.trim()),
            None => (false, t),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("bad element `{t}`"),
            });
        }
        // reduce digit by digit so arbitrarily long literals are accepted
        let p = self.p() as u128;
        let r = digits
            .bytes()
            .fold(0u128, |acc, b| (acc * 10 + (b - b'0') as u128) % p) as u64;
        let mut c = vec![0; self.abs_degree()];
        c[0] = if neg { (self.p() - r) % self.p() } else { r };
        Ok(FieldElem::from_coords(self, c))
    }

    // ---- raw coordinate arithmetic -------------------------------------

    fn add_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p();
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            let s = x + y;
            *o = if s >= p || s < x {
                s.wrapping_sub(p)
            } else {
                s
            };
        }
    }

    fn sub_raw(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let p = self.p();
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = if x >= y { x - y } else { x.wrapping_add(p - y) };
        }
    }

    pub(crate) fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let inner = &*self.0;
        match &inner.base {
            None => vec![ntheory::mul_mod(a[0], b[0], inner.p)],
            Some(base) if base.is_prime() => {
                if inner.narrow {
                    self.mul_over_prime_narrow(a, b)
                } else {
                    self.mul_over_prime_wide(a, b)
                }
            }
            Some(base) => self.mul_over_ext(base, a, b),
        }
    }

    fn mul_over_prime_narrow(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.0.degree];
        self.narrow_into(a, b, &mut out, &mut Vec::new());
        out
    }

    /// `out = a * b` over a prime base, with `acc` as reusable scratch.
    fn narrow_into(&self, a: &[u64], b: &[u64], out: &mut [u64], acc: &mut Vec<u64>) {
        let inner = &*self.0;
        let (d, p) = (inner.degree, inner.p);
        acc.clear();
        acc.resize(2 * d - 1, 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..i + d].iter_mut().zip(b) {
                *slot += x * y;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for (slot, &m) in acc[k - d..k].iter_mut().zip(&inner.neg_modulus) {
                *slot += c * m;
            }
        }
        for (o, v) in out.iter_mut().zip(acc.iter()) {
            *o = v % p;
        }
    }

    fn mul_over_prime_wide(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let inner = &*self.0;
        let (d, p) = (inner.degree, inner.p as u128);
        let mut acc = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (slot, &y) in acc[i..i + d].iter_mut().zip(b) {
                *slot = (*slot + x as u128 * y as u128) % p;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            for (slot, &m) in acc[k - d..k].iter_mut().zip(&inner.neg_modulus) {
                *slot = (*slot + c * m as u128) % p;
            }
        }
        acc.truncate(d);
        acc.into_iter().map(|v| v as u64).collect()
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| {
                if self.is_prime() || self.cardinality() > TABLE_LIMIT {
                    return None;
                }
                let size = self.cardinality() as usize;
                let elems: Vec<FieldElem> = (0..size as u128)
                    .map(|i| self.element_from_index(i))
                    .collect();
                let table = |f: &BinOp| -> Vec<u8> {
                    let mut out = vec![0u64; self.abs_degree()];
                    let mut t = Vec::with_capacity(size * size);
                    for x in &elems {
                        for y in &elems {
                            f(&x.c, &y.c, &mut out);
                            t.push(self.index_of(&out) as u8);
                        }
                    }
                    t
                };
                Some(Tables {
                    size,
                    add: table(&|x, y, o| self.add_raw(x, y, o)),
                    sub: table(&|x, y, o| self.sub_raw(x, y, o)),
                    mul: table(&|x, y, o| o.copy_from_slice(&self.mul_raw(x, y))),
                })
            })
            .as_ref()
    }

    fn index_of(&self, coords: &[u64]) -> usize {
        let p = self.p() as usize;
        coords.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    fn mul_over_ext(&self, base: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<u64> {
        if let Some(t) = base.tables() {
            return self.mul_by_tables(base, t, a, b);
        }
        let two_level = base.base().is_some_and(|b| b.is_prime()) && base.0.narrow;
        if !two_level {
            return self.mul_over_ext_generic(base, a, b);
        }
        let d = self.degree();
        let w = base.abs_degree();
        let mut acc = vec![0u64; (2 * d - 1) * w];
        let mut prod = vec![0u64; w];
        let mut scratch = Vec::with_capacity(2 * w);
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..d {
                base.narrow_into(ai, &b[j * w..(j + 1) * w], &mut prod, &mut scratch);
                let slot = &mut acc[(i + j) * w..(i + j + 1) * w];
                add_mod_in_place(slot, &prod, self.0.p);
            }
        }
        let modulus = &self.0.modulus;
        let mut c = vec![0u64; w];
        for k in (d..2 * d - 1).rev() {
            c.copy_from_slice(&acc[k * w..(k + 1) * w]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for t in 0..d {
                base.narrow_into(&c, &modulus[t * w..(t + 1) * w], &mut prod, &mut scratch);
                let slot = &mut acc[(k - d + t) * w..(k - d + t + 1) * w];
                sub_mod_in_place(slot, &prod, self.0.p);
            }
        }
        acc.truncate(d * w);
        acc
    }

    fn mul_by_tables(&self, base: &FieldCtx, t: &Tables, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let w = base.abs_degree();
        let s = t.size;
        let idx = |v: &[u64]| -> Vec<usize> { v.chunks(w).map(|c| base.index_of(c)).collect() };
        let (ai, bi) = (idx(a), idx(b));
        let mut acc = vec![0usize; 2 * d - 1];
        for (i, &x) in ai.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &t.mul[x * s..(x + 1) * s];
            for (j, &y) in bi.iter().enumerate() {
                acc[i + j] = t.add[acc[i + j] * s + row[y] as usize] as usize;
            }
        }
        let modulus = idx(&self.0.modulus);
        for k in (d..2 * d - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            let row = &t.mul[c * s..(c + 1) * s];
            for (j, &m) in modulus.iter().enumerate() {
                acc[k - d + j] = t.sub[acc[k - d + j] * s + row[m] as usize] as usize;
            }
        }
        let p = self.p() as usize;
        let mut out = Vec::with_capacity(d * w);
        for &v in &acc[..d] {
            let mut v = v;
            for _ in 0..w {
                out.push((v % p) as u64);
                v /= p;
            }
        }
        out
    }

    fn mul_over_ext_generic(&self, base: &FieldCtx, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let w = base.abs_degree();
        let mut acc = vec![0u64; (2 * d - 1) * w];
        let mut tmp = vec![0u64; w];
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..d {
                let prod = base.mul_raw(ai, &b[j * w..(j + 1) * w]);
                let slot = &mut acc[(i + j) * w..(i + j + 1) * w];
                tmp.copy_from_slice(slot);
                base.add_raw(&tmp, &prod, slot);
            }
        }
        let modulus = &self.0.modulus;
        for k in (d..2 * d - 1).rev() {
            let c = acc[k * w..(k + 1) * w].to_vec();
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for t in 0..d {
                let prod = base.mul_raw(&c, &modulus[t * w..(t + 1) * w]);
                let slot = &mut acc[(k - d + t) * w..(k - d + t + 1) * w];
                tmp.copy_from_slice(slot);
                base.sub_raw(&tmp, &prod, slot);
            }
        }
        acc.truncate(d * w);
        acc
    }
}

fn add_mod_in_place(acc: &mut [u64], x: &[u64], p: u64) {
    for (a, &b) in acc.iter_mut().zip(x) {
        let s = *a + b;
        *a = if s >= p { s - p } else { s };
    }
}

fn sub_mod_in_place(acc: &mut [u64], x: &[u64], p: u64) {
    for (a, &b) in acc.iter_mut().zip(x) {
        *a = if *a >= b { *a - b } else { *a + p - b };
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &FieldCtx) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.p() == other.p()
            && self.degree() == other.degree()
            && self.abs_degree() == other.abs_degree()
            && self.0.modulus == other.0.modulus
            && self.base() == other.base()
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus() {
            None => write!(f, "GF({})", self.p()),
            Some(m) => write!(f, "{:?}[t]/({})", self.base().unwrap(), m),
        }
    }
}

/// An element of a [`FieldCtx`].
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    c: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub(crate) fn from_coords(ctx: &FieldCtx, c: Vec<u64>) -> FieldElem {
        debug_assert_eq!(c.len(), ctx.abs_degree());
        FieldElem {
            ctx: ctx.clone(),
            c,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Coordinates over the prime field.
    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    /// Coefficients over the immediate base field, constant first.
    pub fn coeffs(&self) -> Vec<FieldElem> {
        match self.ctx.base() {
            None => vec![self.clone()],
            Some(b) => self
                .c
                .chunks(b.abs_degree())
                .map(|ch| FieldElem::from_coords(b, ch.to_vec()))
                .collect(),
        }
    }

    /// Coordinates over an ancestor context `sub`, as elements of `sub`.
    pub fn coords_over(&self, sub: &FieldCtx) -> Result<Vec<FieldElem>> {
        if !sub.is_subfield_of(&self.ctx) {
            return Err(Error::CtxMismatch);
        }
        Ok(self
            .c
            .chunks(sub.abs_degree())
            .map(|ch| FieldElem::from_coords(sub, ch.to_vec()))
            .collect())
    }

    /// Position in the canonical enumeration of the field.
    pub fn index(&self) -> u128 {
        let p = self.ctx.p() as u128;
        self.c
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * p + d as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn arith(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        self.check(other)?;
        Ok(match op {
            ArithOp::Add => self + other,
            ArithOp::Sub => self - other,
            ArithOp::Mul => self * other,
            ArithOp::Div => self.checked_div(other)?,
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.ctx.is_prime() {
            let p = self.ctx.p() as i128;
            let (mut r0, mut r1) = (p, self.c[0] as i128);
            let (mut s0, mut s1) = (0i128, 1i128);
            while r1 != 0 {
                let q = r0 / r1;
                (r0, r1) = (r1, r0 - q * r1);
                (s0, s1) = (s1, s0 - q * s1);
            }
            return Ok(FieldElem::from_coords(
                &self.ctx,
                vec![s0.rem_euclid(p) as u64],
            ));
        }
        if self.is_one() {
            return Ok(self.clone());
        }
        // extended Euclid against the defining modulus, over the base field
        let base = self.ctx.base().expect("extension has a base");
        let (mut r0, mut r1) = (
            self.ctx.modulus().expect("extension has a modulus"),
            Poly::new(base, self.coeffs()),
        );
        let (mut s0, mut s1) = (Poly::zero(base), Poly::one(base));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let next = &s0 - &(&q * &s1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, next);
        }
        let s0 = s0.scale(&r0.coeff(0).inv()?);
        let mut coeffs = s0.coeffs().to_vec();
        coeffs.resize(self.ctx.degree(), base.zero());
        self.ctx.from_base_coeffs(&coeffs)
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut e: u128) -> FieldElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn square(&self) -> FieldElem {
        self * self
    }

    /// `self^q` for a subfield cardinality `q`.
    pub fn frobenius(&self, q: u128) -> Result<FieldElem> {
        self.ctx.subfield_exponent(q)?;
        Ok(self.pow(q))
    }

    /// `[self, self^q, self^(q^2), ...]` up to the first repetition.
    pub fn frobenius_orbit(&self, q: u128) -> Result<Vec<FieldElem>> {
        self.ctx.subfield_exponent(q)?;
        let mut orbit = vec![self.clone()];
        loop {
            let next = orbit.last().unwrap().pow(q);
            if next == *self {
                return Ok(orbit);
            }
            orbit.push(next);
        }
    }

    /// `[F_q(self) : F_q]`.
    pub fn subfield_degree(&self, q: u128) -> Result<usize> {
        self.ctx.subfield_exponent(q)?;
        let mut n = 1;
        let mut cur = self.pow(q);
        while cur != *self {
            cur = cur.pow(q);
            n += 1;
        }
        Ok(n)
    }

    /// Multiplicative order, found by factoring `|F| - 1` and stripping primes.
    pub fn mult_order(&self, cap: u128) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.ctx.check_cap(cap.min(DEFAULT_CAP))?;
        let n = (self.ctx.cardinality() - 1) as u64;
        let primes = ntheory::prime_divisors(n);
        Ok(ntheory::strip_order(n, &primes, |t| {
            self.pow(t as u128).is_one()
        }))
    }

    /// Trace down to the subfield of cardinality `q`.
    pub fn trace_to(&self, q: u128) -> Result<FieldElem> {
        let s = self.ctx.subfield_exponent(q)?;
        let d = self.ctx.abs_degree() / s;
        let mut acc = self.clone();
        let mut cur = self.clone();
        for _ in 1..d {
            cur = cur.pow(q);
            acc = &acc + &cur;
        }
        Ok(acc)
    }

    fn check_contains(&self, q: u128, m: usize) -> Result<usize> {
        let s = self.ctx.subfield_exponent(q)?;
        if m == 0 || !self.ctx.abs_degree().is_multiple_of(s * m) {
            let qm = q.checked_pow(m as u32).unwrap_or(u128::MAX);
            return Err(Error::NotASubfieldCardinality(qm));
        }
        Ok(s)
    }

    /// Membership in `F_m(q)`: the element lies in `F_{q^m}` and generates it
    /// over `F_q`, i.e. its `q`-Frobenius orbit has length exactly `m`.
    pub fn in_calf(&self, q: u128, m: usize) -> Result<bool> {
        self.check_contains(q, m)?;
        // the orbit cannot be longer than m unless the element is outside F_{q^m}
        let mut cur = self.pow(q);
        for n in 1..=m {
            if cur == *self {
                return Ok(n == m);
            }
            cur = cur.pow(q);
        }
        Ok(false)
    }

    /// Same predicate via `ord_{|a|}(q) = m`; zero is in `F_1(q)` only.
    pub fn in_calf_by_order(&self, q: u128, m: usize, cap: u128) -> Result<bool> {
        self.check_contains(q, m)?;
        if self.is_zero() {
            return Ok(m == 1);
        }
        let order = self.mult_order(cap)?;
        let r = (q % order as u128) as u64;
        Ok(ntheory::ord_mod(order, r)? == m as u64)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &FieldElem) -> bool {
        self.c == other.c && self.ctx == other.ctx
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &FieldElem) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: constant coordinate varies fastest.
impl Ord for FieldElem {
    fn cmp(&self, other: &FieldElem) -> Ordering {
        self.c.iter().rev().cmp(other.c.iter().rev())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.is_prime() {
            return write!(f, "{}", self.c[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operator impls panic on context mismatch; use `arith` for a checked variant.
macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl std::ops::$trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                assert!(self.ctx == rhs.ctx, "field context mismatch");
                #[allow(clippy::redundant_closure_call)]
                $body(self, rhs)
            }
        }
        impl std::ops::$trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &FieldElem, b: &FieldElem| {
    let mut out = vec![0; a.c.len()];
    a.ctx.add_raw(&a.c, &b.c, &mut out);
    FieldElem {
        ctx: a.ctx.clone(),
        c: out,
    }
});
binop!(Sub, sub, |a: &FieldElem, b: &FieldElem| {
    let mut out = vec![0; a.c.len()];
    a.ctx.sub_raw(&a.c, &b.c, &mut out);
    FieldElem {
        ctx: a.ctx.clone(),
        c: out,
    }
});
binop!(Mul, mul, |a: &FieldElem, b: &FieldElem| {
    FieldElem {
        ctx: a.ctx.clone(),
        c: a.ctx.mul_raw(&a.c, &b.c),
    }
});

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let p = self.ctx.p();
        FieldElem {
            ctx: self.ctx.clone(),
            c: self.c.iter().map(|&x| (p - x) % p).collect(),
        }
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldCtx {
        let f2 = FieldCtx::prime(2).unwrap();
        f2.extend(&Poly::parse("x^2+x+1", &f2).unwrap()).unwrap()
    }

    #[test]
    fn prime_contexts() {
        assert_eq!(FieldCtx::prime(2).unwrap().cardinality(), 2);
        assert_eq!(FieldCtx::prime(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(
            FieldCtx::prime(4294967311).unwrap().cardinality(),
            4294967311
        );
    }

    #[test]
    fn extension_rejects_reducible_and_non_monic() {
        let f2 = FieldCtx::prime(2).unwrap();
        let red = Poly::parse("x^2+1", &f2).unwrap();
        assert_eq!(f2.extend(&red).unwrap_err(), Error::NotIrreducible);
        let f3 = FieldCtx::prime(3).unwrap();
        let nm = Poly::parse("2*x^2+1", &f3).unwrap();
        assert_eq!(f3.extend(&nm).unwrap_err(), Error::NotMonic);
        assert_eq!(gf4().cardinality(), 4);
    }

    #[test]
    fn gf4_arithmetic() {
        let k = gf4();
        let g = k.generator();
        assert_eq!(&g * &g, &g + &k.one());
        assert!(g.pow(3).is_one());
        assert_eq!(g.frobenius(2).unwrap(), &g + &k.one());
        assert_eq!(g.trace_to(2).unwrap(), k.one());
        assert_eq!(k.one().trace_to(2).unwrap(), k.zero());
        assert_eq!(g.mult_order(DEFAULT_CAP).unwrap(), 3);
        assert_eq!(
            k.zero().mult_order(DEFAULT_CAP).unwrap_err(),
            Error::ZeroElement
        );
        assert_eq!(k.zero().inv().unwrap_err(), Error::DivisionByZero);
        let orbit = g.frobenius_orbit(2).unwrap();
        assert_eq!(orbit, vec![g.clone(), &g + &k.one()]);
        assert_eq!(
            g.frobenius(3).unwrap_err(),
            Error::NotASubfieldCardinality(3)
        );
    }

    #[test]
    fn prime_field_inverse() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
        let f = FieldCtx::prime(4294967311).unwrap();
        for a in [1i64, 2, 12345, 4294967310] {
            let x = f.from_int(a);
            assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn mismatch_is_an_error() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(
            f2.one().arith(&f3.one(), ArithOp::Add).unwrap_err(),
            Error::CtxMismatch
        );
    }

    #[test]
    fn element_text_format() {
        let k = gf4();
        let g = k.generator();
        assert_eq!(g.to_string(), "[0,1]");
        assert_eq!(k.parse_elem("[0,1]").unwrap(), g);
        assert_eq!(k.parse_elem("g^2").unwrap(), &g + &k.one());
        assert_eq!(k.parse_elem("3").unwrap(), k.one());
        assert!(matches!(
            k.parse_elem("[0,1,1]"),
            Err(Error::CoefficientOutOfField(_))
        ));
        assert!(matches!(k.parse_elem("x"), Err(Error::Syntax { .. })));
        let f2 = k.base().unwrap().clone();
        assert!(matches!(
            f2.parse_elem("[0,1]"),
            Err(Error::CoefficientOutOfField(_))
        ));
    }

    #[test]
    fn canonical_index_round_trips() {
        let k = gf4();
        for (i, e) in k.elements().enumerate() {
            assert_eq!(e.index(), i as u128);
        }
        let mut all: Vec<_> = k.elements().collect();
        all.reverse();
        all.sort();
        assert_eq!(all, k.elements().collect::<Vec<_>>());
    }

    #[test]
    fn subfield_membership_both_routes() {
        let k = gf4();
        let g = k.generator();
        assert!(g.in_calf(2, 2).unwrap());
        assert!(k.zero().in_calf(2, 1).unwrap());
        assert!(!k.zero().in_calf(2, 2).unwrap());
        assert!(!k.one().in_calf(2, 2).unwrap());
        for a in k.elements() {
            for m in [1, 2] {
                assert_eq!(
                    a.in_calf(2, m).unwrap(),
                    a.in_calf_by_order(2, m, DEFAULT_CAP).unwrap()
                );
            }
        }
    }
}
