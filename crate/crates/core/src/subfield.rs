//! Locating `F_{q^m}` and `F_m(q)` inside a larger field of the same tower.
//!
//! A field built as `F_q[t]/(h)` with `deg h = m` maps into any context `W`
//! that extends `F_q` and has degree divisible by `m`: send `t` to a root of
//! `h` in `W`. The smallest root in canonical order is used so the image sets
//! are reproducible.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::limits::Limits;

/// Homomorphism from `from` (the base `F_q` or a direct extension of it)
/// into `to` (any context containing `F_q`), fixing `F_q`.
pub struct Embedding {
    base: FieldCtx,
    from: FieldCtx,
    to: FieldCtx,
    /// Images of `1, t, t^2, ...`.
    powers: Vec<FieldElem>,
}

impl Embedding {
    pub fn new(
        from: &FieldCtx,
        base: &FieldCtx,
        to: &FieldCtx,
        seed: u64,
        limits: &Limits,
    ) -> Result<Embedding> {
        if !base.is_subfield_of(to) {
            return Err(Error::CtxMismatch);
        }
        let root = if from == base {
            to.one()
        } else {
            if from.base() != Some(base) {
                return Err(Error::CtxMismatch);
            }
            if !to.abs_degree().is_multiple_of(from.abs_degree()) {
                return Err(Error::NotASubfieldCardinality(from.cardinality()));
            }
            let h = from.modulus().expect("extension has a modulus");
            h.roots_in(to, seed, limits.cap)?
                .into_iter()
                .next()
                .ok_or_else(|| {
                    Error::Internal("defining modulus has no root in the target".into())
                })?
        };
        let mut powers = vec![to.one()];
        for _ in 1..from.degree().max(1) {
            let next = powers.last().unwrap() * &root;
            powers.push(next);
        }
        Ok(Embedding {
            base: base.clone(),
            from: from.clone(),
            to: to.clone(),
            powers,
        })
    }

    pub fn apply(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.ctx() != &self.from {
            return Err(Error::CtxMismatch);
        }
        if self.from == self.base {
            return self.to.embed(a);
        }
        let mut acc = self.to.zero();
        for (c, pw) in a.coeffs().iter().zip(&self.powers) {
            if !c.is_zero() {
                acc = &acc + &(&self.to.embed(c)? * pw);
            }
        }
        Ok(acc)
    }
}

/// `F_q`-subfield of degree `m` inside `w`, as (local field, embedding).
pub fn subfield_copy(
    base: &FieldCtx,
    w: &FieldCtx,
    m: usize,
    seed: u64,
    limits: &Limits,
) -> Result<(FieldCtx, Embedding)> {
    let local = base.extension_of_degree(m)?;
    let emb = Embedding::new(&local, base, w, seed, limits)?;
    Ok((local, emb))
}

/// All of `F_m(q)` inside `w` in canonical order of `w`, where `q = |base|`.
pub fn generators_in(
    base: &FieldCtx,
    w: &FieldCtx,
    m: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Vec<FieldElem>> {
    let q = base.cardinality();
    let size = q.checked_pow(m as u32).unwrap_or(u128::MAX);
    limits.check_budget(size)?;
    let (local, emb) = subfield_copy(base, w, m, seed, limits)?;
    let mut out = Vec::new();
    for a in local.elements() {
        if a.in_calf(q, m)? {
            out.push(emb.apply(&a)?);
        }
    }
    out.sort();
    Ok(out)
}

/// All of `F_m(q)` inside the local field `F_q -> F_{q^m}` built by
/// [`FieldCtx::extension_of_degree`], in canonical order.
pub fn generators_local(
    base: &FieldCtx,
    m: usize,
    limits: &Limits,
) -> Result<(FieldCtx, Vec<FieldElem>)> {
    let q = base.cardinality();
    limits.check_budget(q.checked_pow(m as u32).unwrap_or(u128::MAX))?;
    let local = base.extension_of_degree(m)?;
    let mut out = Vec::new();
    for a in local.elements() {
        if a.in_calf(q, m)? {
            out.push(a);
        }
    }
    Ok((local, out))
}
