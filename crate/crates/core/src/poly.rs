//! Dense univariate polynomials over a [`FieldCtx`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::ntheory;
use crate::text;

/// Fields at or below this size are searched for roots by scanning.
pub const SCAN_LIMIT: u128 = 1 << 16;

/// Default cap on the number of candidates an exhaustive enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Coefficients lowest degree first, never with a trailing zero; the zero
/// polynomial has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    Rem,
    Quot,
}

impl Poly {
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Poly {
        debug_assert!(coeffs.iter().all(|c| c.ctx() == ctx));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Poly {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> Poly {
        Poly::constant(ctx.one())
    }

    pub fn x(ctx: &FieldCtx) -> Poly {
        Poly::monomial(ctx.one(), 1)
    }

    pub fn constant(c: FieldElem) -> Poly {
        let ctx = c.ctx().clone();
        Poly::new(&ctx, vec![c])
    }

    pub fn monomial(c: FieldElem, k: usize) -> Poly {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![ctx.zero(); k];
        coeffs.push(c);
        Poly::new(&ctx, coeffs)
    }

    /// `x - a`.
    pub fn linear(a: &FieldElem) -> Poly {
        let ctx = a.ctx().clone();
        Poly {
            coeffs: vec![-a, ctx.one()],
            ctx,
        }
    }

    /// Monic polynomial `x^n + Σ c_i x^i` from its lower coefficients.
    pub fn monic_from_lower(ctx: &FieldCtx, lower: Vec<FieldElem>) -> Poly {
        let mut coeffs = lower;
        coeffs.push(ctx.one());
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn arith(&self, other: &Poly, op: PolyOp) -> Result<Poly> {
        self.check(other)?;
        Ok(match op {
            PolyOp::Add => self + other,
            PolyOp::Sub => self - other,
            PolyOp::Mul => self * other,
            PolyOp::Rem => self.div_rem(other)?.1,
            PolyOp::Quot => self.div_rem(other)?.0,
        })
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::new(&self.ctx, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Normalized to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d)?;
        let dn = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(n) = self.degree() else {
            return Ok((Poly::zero(&self.ctx), Poly::zero(&self.ctx)));
        };
        if n < dn {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let lead_inv = d.coeffs[dn].inv()?;
        let monic = lead_inv.is_one();
        let mut r = self.coeffs.clone();
        let mut q = vec![self.ctx.zero(); n - dn + 1];
        for k in (dn..=n).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = if monic {
                r[k].clone()
            } else {
                &r[k] * &lead_inv
            };
            for (j, dj) in d.coeffs[..dn].iter().enumerate() {
                if !dj.is_zero() {
                    r[k - dn + j] = &r[k - dn + j] - &(&c * dj);
                }
            }
            r[k] = self.ctx.zero();
            q[k - dn] = c;
        }
        r.truncate(dn);
        Ok((Poly::new(&self.ctx, q), Poly::new(&self.ctx, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        (self * other).rem(m)
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut e: u128, modulus: &Poly) -> Result<Poly> {
        self.check(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = modulus.monic();
        let mut acc = Poly::one(&self.ctx).rem(&m)?;
        let mut base = self.rem(&m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, &m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, &m)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.ctx.from_int((i as u64 % self.ctx.p()) as i64))
            .collect();
        Poly::new(&self.ctx, coeffs)
    }

    /// Horner evaluation at `a`, which may live in any extension of this
    /// polynomial's context within the same tower.
    pub fn eval(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.ctx() == &self.ctx {
            let mut acc = self.ctx.zero();
            for c in self.coeffs.iter().rev() {
                acc = &(&acc * a) + c;
            }
            return Ok(acc);
        }
        let ext = a.ctx();
        if !self.ctx.is_subfield_of(ext) {
            return Err(Error::CtxMismatch);
        }
        let mut acc = ext.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * a) + &ext.embed(c)?;
        }
        Ok(acc)
    }

    /// Same polynomial with coefficients embedded in an extension context.
    pub fn lift(&self, ext: &FieldCtx) -> Result<Poly> {
        if ext == &self.ctx {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| ext.embed(c))
            .collect::<Result<_>>()?;
        Ok(Poly {
            ctx: ext.clone(),
            coeffs,
        })
    }

    /// Coefficients re-expressed in the subfield context `sub`; fails if any
    /// coefficient lies outside it.
    pub fn descend(&self, sub: &FieldCtx) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| sub.descend(c))
            .collect::<Result<_>>()?;
        Ok(Poly {
            ctx: sub.clone(),
            coeffs,
        })
    }

    /// Rabin's test: `x^(q^n) ≡ x (mod f)` and `gcd(x^(q^(n/t)) - x, f) = 1`
    /// for every prime `t | n`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::DegreeZero),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        if self.coeffs[0].is_zero() {
            return Ok(false);
        }
        let f = self.monic();
        let q = self.ctx.cardinality();
        let x = Poly::x(&self.ctx);
        let primes = ntheory::prime_divisors(n as u64);
        let mut checkpoints: Vec<usize> = primes.iter().map(|&t| n / t as usize).collect();
        checkpoints.sort_unstable();
        let mut h = x.clone();
        let mut next = checkpoints.iter().peekable();
        for i in 1..=n {
            h = h.powmod(q, &f)?;
            while next.peek() == Some(&&i) {
                next.next();
                if !(&h - &x).gcd(&f)?.is_constant() {
                    return Ok(false);
                }
            }
        }
        Ok(h == x)
    }

    /// Distinct degrees of the irreducible factors, ascending.
    pub fn factor_degrees(&self) -> Result<Vec<usize>> {
        let n = self.degree().ok_or(Error::DegreeZero)?;
        let mut rest = self.monic();
        let x = Poly::x(&self.ctx);
        let q = self.ctx.cardinality();
        let mut degrees = Vec::new();
        let mut h = x.clone();
        for d in 1..=n {
            if rest.degree() == Some(0) {
                break;
            }
            h = h.powmod(q, &rest)?;
            let mut found = false;
            loop {
                let g = (&h - &x).gcd(&rest)?;
                if g.is_constant() {
                    break;
                }
                found = true;
                rest = rest.div_rem(&g)?.0;
                if rest.degree() == Some(0) {
                    break;
                }
                h = h.rem(&rest)?;
            }
            if found {
                degrees.push(d);
            }
        }
        Ok(degrees)
    }

    /// Distinct roots in `ext` (an extension of this context in the same
    /// tower), sorted canonically.
    ///
    /// One root per irreducible factor is located, by scanning when
    /// `|ext| <= SCAN_LIMIT` and by seeded Cantor–Zassenhaus splitting
    /// otherwise; the rest of each factor's roots come from its Frobenius orbit.
    pub fn roots_in(&self, ext: &FieldCtx, seed: u64, cap: u128) -> Result<Vec<FieldElem>> {
        if !self.ctx.is_subfield_of(ext) {
            return Err(Error::CtxMismatch);
        }
        ext.check_cap(cap)?;
        if self.is_zero() {
            return Err(Error::PreconditionViolated(
                "zero polynomial has every element as a root".into(),
            ));
        }
        let big = self.lift(ext)?.monic();
        if big.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let qbig = ext.cardinality();
        let x = Poly::x(ext);
        // product of the distinct linear factors over ext
        let mut g = (&x.powmod(qbig, &big)? - &x).gcd(&big)?;
        let q = self.ctx.cardinality();
        let mut roots = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut scan_from = 0u128;
        while g.degree().unwrap_or(0) > 0 {
            let r = if qbig <= SCAN_LIMIT {
                let mut found = None;
                while scan_from < qbig {
                    let e = ext.element_from_index(scan_from);
                    scan_from += 1;
                    if g.eval(&e)?.is_zero() {
                        found = Some(e);
                        break;
                    }
                }
                found.ok_or_else(|| Error::Internal("root scan exhausted the field".into()))?
            } else {
                find_root_split(&g, &mut rng)?
            };
            let orbit = r.frobenius_orbit(q)?;
            let mut factor = Poly::one(ext);
            for o in &orbit {
                factor = &factor * &Poly::linear(o);
            }
            let (quot, rem) = g.div_rem(&factor)?;
            if !rem.is_zero() {
                return Err(Error::Internal(
                    "Frobenius orbit of a root is not a factor".into(),
                ));
            }
            g = quot;
            roots.extend(orbit);
        }
        roots.sort();
        Ok(roots)
    }

    /// Roots in `ext` together with their multiplicities.
    pub fn roots_with_multiplicity(
        &self,
        ext: &FieldCtx,
        seed: u64,
        cap: u128,
    ) -> Result<Vec<(FieldElem, usize)>> {
        let roots = self.roots_in(ext, seed, cap)?;
        let mut big = self.lift(ext)?;
        let mut out = Vec::with_capacity(roots.len());
        for r in roots {
            let lin = Poly::linear(&r);
            let mut mult = 0;
            loop {
                let (q, rem) = big.div_rem(&lin)?;
                if !rem.is_zero() {
                    break;
                }
                big = q;
                mult += 1;
            }
            out.push((r, mult));
        }
        Ok(out)
    }

    pub fn parse(text: &str, ctx: &FieldCtx) -> Result<Poly> {
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for t in text::parse_terms(text, ctx, false)? {
            if coeffs.len() <= t.xpow {
                coeffs.resize(t.xpow + 1, ctx.zero());
            }
            coeffs[t.xpow] = &coeffs[t.xpow] + &t.coeff;
        }
        Ok(Poly::new(ctx, coeffs))
    }
}

/// One root of a monic product of distinct linear factors over its context.
fn find_root_split(g: &Poly, rng: &mut ChaCha8Rng) -> Result<FieldElem> {
    let ctx = g.ctx().clone();
    let mut g = g.clone();
    let x = Poly::x(&ctx);
    let qbig = ctx.cardinality();
    let mut attempts = 0u32;
    loop {
        let n = g.degree().unwrap_or(0);
        if n == 0 {
            return Err(Error::Internal("splitting lost all roots".into()));
        }
        if n == 1 {
            return Ok(-&g.coeffs[0]);
        }
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::Internal(
                "equal-degree splitting did not converge".into(),
            ));
        }
        let delta = ctx.element_from_index(rng.random_range(0..qbig));
        let split = if ctx.p() == 2 {
            // absolute trace of delta*x maps every root into F_2
            let t = Poly::monomial(delta, 1).rem(&g)?;
            let mut acc = t.clone();
            let mut cur = t;
            for _ in 1..ctx.abs_degree() {
                cur = cur.mulmod(&cur, &g)?;
                acc = &acc + &cur;
            }
            acc
        } else {
            let shifted = &x + &Poly::constant(delta);
            &shifted.powmod((qbig - 1) / 2, &g)? - &Poly::one(&ctx)
        };
        let d = split.gcd(&g)?;
        let dn = d.degree().unwrap_or(0);
        if dn == 0 || dn == n {
            continue;
        }
        let other = g.div_rem(&d)?.0;
        g = if dn <= n - dn { d } else { other };
    }
}

/// Minimal polynomial of `a` over the tower member of cardinality `q`:
/// the product of `x - σ^i(a)` over the Frobenius orbit, descended to `F_q`.
pub fn minimal_polynomial(a: &FieldElem, q: u128) -> Result<Poly> {
    let sub = a.ctx().subfield_ctx(q)?;
    let orbit = a.frobenius_orbit(q)?;
    let mut prod = Poly::one(a.ctx());
    for o in &orbit {
        prod = &prod * &Poly::linear(o);
    }
    for c in prod.coeffs() {
        if c.frobenius(q)? != *c {
            return Err(Error::CoefficientDescentFailure(format!(
                "coefficient {c} of the orbit product is not fixed by Frobenius"
            )));
        }
    }
    prod.descend(&sub)
}

/// Monic polynomial of degree `n` whose lower coefficients are the base-`|ctx|`
/// digits of `idx` (constant coefficient least significant).
pub fn monic_from_index(ctx: &FieldCtx, n: usize, mut idx: u128) -> Poly {
    let q = ctx.cardinality();
    let mut lower = Vec::with_capacity(n);
    for _ in 0..n {
        lower.push(ctx.element_from_index(idx % q));
        idx /= q;
    }
    Poly::monic_from_lower(ctx, lower)
}

/// Canonical index of a monic polynomial (inverse of [`monic_from_index`]).
pub fn monic_index(f: &Poly) -> u128 {
    let q = f.ctx().cardinality();
    let n = f.degree().unwrap_or(0);
    f.coeffs()[..n]
        .iter()
        .rev()
        .fold(0u128, |acc, c| acc * q + c.index())
}

/// First monic irreducible of degree `n` in canonical order.
pub fn first_irreducible(ctx: &FieldCtx, n: usize) -> Result<Poly> {
    let total = ctx
        .cardinality()
        .checked_pow(n as u32)
        .ok_or(Error::CardinalityOverflow)?;
    for idx in 0..total {
        let f = monic_from_index(ctx, n, idx);
        if f.is_irreducible()? {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible of degree {n} found"
    )))
}

/// Iterator over every monic irreducible of a given degree, in canonical
/// order. Index ranges can be consumed independently with [`MonicIrreducibles::range`].
#[derive(Clone)]
pub struct MonicIrreducibles {
    ctx: FieldCtx,
    degree: usize,
    next: u128,
    end: u128,
}

impl MonicIrreducibles {
    /// Number of candidate monic polynomials (`q^n`).
    pub fn candidates(&self) -> u128 {
        self.ctx.cardinality().pow(self.degree as u32)
    }

    /// Restricts to candidate indices in `start..end`.
    pub fn range(mut self, start: u128, end: u128) -> MonicIrreducibles {
        self.next = start.max(self.next);
        self.end = end.min(self.end);
        self
    }
}

impl Iterator for MonicIrreducibles {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        while self.next < self.end {
            let f = monic_from_index(&self.ctx, self.degree, self.next);
            self.next += 1;
            if f.is_irreducible().expect("degree is positive") {
                return Some(f);
            }
        }
        None
    }
}

pub fn all_monic_irreducibles(
    ctx: &FieldCtx,
    degree: usize,
    budget: u128,
) -> Result<MonicIrreducibles> {
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    let needed = ctx
        .cardinality()
        .checked_pow(degree as u32)
        .ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget,
        })?;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(MonicIrreducibles {
        ctx: ctx.clone(),
        degree,
        next: 0,
        end: needed,
    })
}

/// Rejection sampling with ChaCha8 seeded through `SeedableRng::seed_from_u64`:
/// each attempt draws the lower coefficients as uniform canonical indices,
/// constant coefficient first.
pub fn random_irreducible(ctx: &FieldCtx, degree: usize, seed: u64) -> Result<Poly> {
    if degree == 0 {
        return Err(Error::DegreeZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ctx.cardinality();
    loop {
        let lower = (0..degree)
            .map(|_| ctx.element_from_index(rng.random_range(0..q)))
            .collect();
        let f = Poly::monic_from_lower(ctx, lower);
        if f.is_irreducible()? {
            return Ok(f);
        }
    }
}

/// Canonical text: descending powers, no spaces, `*` between coefficient and
/// power, unit coefficients omitted.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            write!(f, "{}", text::format_monomial(c, &[('x', i)]))?;
        }
        Ok(())
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::ops::Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.ctx == rhs.ctx, "field context mismatch");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(&self.ctx, coeffs)
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl std::ops::Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.ctx == rhs.ctx, "field context mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.ctx, out)
    }
}
