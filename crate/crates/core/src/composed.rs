//! Composed products `f ⋄ g = ∏ (x - α ⋄ β)` over the roots of `f` and `g`,
//! and an exhaustive check of when they are irreducible.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cancellation::{self, GeneratorPair, Scope};
use crate::diamond::DiamondOp;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::limits::Limits;
use crate::ntheory::{self, checked_pow};
use crate::poly::{
    all_monic_irreducibles, minimal_polynomial, monic_index, random_irreducible, Poly,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComposedProduct {
    pub poly: Poly,
    /// `[W : F_q]` for the field `W` holding every root of both inputs.
    pub working_degree: usize,
    /// Number of distinct values `α ⋄ β` over all root pairs.
    pub distinct_values: usize,
}

/// `f ⋄ g` for monic `f`, `g` over the same field, reducible inputs allowed.
pub fn composed_product(
    f: &Poly,
    g: &Poly,
    d: &DiamondOp,
    seed: u64,
    limits: &Limits,
) -> Result<ComposedProduct> {
    let base = f.ctx();
    if g.ctx() != base {
        return Err(Error::CtxMismatch);
    }
    d.check_base(base)?;
    for h in [f, g] {
        if h.degree().unwrap_or(0) == 0 {
            return Err(Error::DegreeZero);
        }
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
    }
    let l = f
        .factor_degrees()?
        .into_iter()
        .chain(g.factor_degrees()?)
        .fold(1u64, |acc, d| ntheory::lcm(acc, d as u64)) as usize;
    limits.check_cap(checked_pow(base.cardinality(), l as u32))?;
    let w = base.extension_of_degree(l)?;
    let fr = f.roots_with_multiplicity(&w, seed, limits.cap)?;
    let gr = g.roots_with_multiplicity(&w, seed.wrapping_add(1), limits.cap)?;
    let (poly, distinct_values) = product_over_roots(base, &fr, &gr, d)?;
    let expected = f.degree().unwrap() * g.degree().unwrap();
    if poly.degree() != Some(expected) {
        return Err(Error::Internal(format!(
            "composed product has degree {:?}, expected {expected}",
            poly.degree()
        )));
    }
    Ok(ComposedProduct {
        poly,
        working_degree: l,
        distinct_values,
    })
}

/// Multiplies out `∏ (x - α ⋄ β)^(e_α e_β)` one Frobenius orbit of root
/// pairs at a time: each orbit contributes a power of the minimal polynomial
/// of one of its values, computed over the base field.
fn product_over_roots(
    base: &FieldCtx,
    fr: &[(FieldElem, usize)],
    gr: &[(FieldElem, usize)],
    d: &DiamondOp,
) -> Result<(Poly, usize)> {
    let q = base.cardinality();
    let perm = |roots: &[(FieldElem, usize)]| -> Result<Vec<usize>> {
        let pos: HashMap<&FieldElem, usize> =
            roots.iter().enumerate().map(|(i, (r, _))| (r, i)).collect();
        roots
            .iter()
            .map(|(r, _)| {
                pos.get(&r.pow(q))
                    .copied()
                    .ok_or_else(|| Error::Internal("root set is not Frobenius stable".into()))
            })
            .collect()
    };
    let (pf, pg) = (perm(fr)?, perm(gr)?);
    let mut values = HashSet::new();
    let mut seen = vec![vec![false; gr.len()]; fr.len()];
    let mut out = Poly::one(base);
    for i in 0..fr.len() {
        for j in 0..gr.len() {
            let v = d.eval(&fr[i].0, &gr[j].0)?;
            values.insert(v.clone());
            if seen[i][j] {
                continue;
            }
            let (mut a, mut b, mut size) = (i, j, 0);
            loop {
                seen[a][b] = true;
                size += 1;
                (a, b) = (pf[a], pg[b]);
                if (a, b) == (i, j) {
                    break;
                }
            }
            let h = minimal_polynomial(&v, q)?;
            let r = h.degree().unwrap();
            if size % r != 0 {
                return Err(Error::Internal(
                    "value orbit does not divide pair orbit".into(),
                ));
            }
            for _ in 0..(size / r) * fr[i].1 * gr[j].1 {
                out = &out * &h;
            }
        }
    }
    Ok((out, values.len()))
}

/// Roots of each of `polys` (all the monic irreducibles of one degree),
/// read off the Frobenius orbits of the generators of that degree.
fn roots_from_orbits(
    generators: &[FieldElem],
    q: u128,
    polys: &[Poly],
) -> Result<Vec<Vec<(FieldElem, usize)>>> {
    let position: HashMap<u128, usize> = polys
        .iter()
        .enumerate()
        .map(|(i, f)| (monic_index(f), i))
        .collect();
    let mut out = vec![Vec::new(); polys.len()];
    let mut seen = HashSet::new();
    for g in generators {
        if seen.contains(g) {
            continue;
        }
        let mut orbit = g.frobenius_orbit(q)?;
        let h = minimal_polynomial(g, q)?;
        let i = *position.get(&monic_index(&h)).ok_or_else(|| {
            Error::Internal(format!(
                "minimal polynomial {h} is not in the irreducible list"
            ))
        })?;
        seen.extend(orbit.iter().cloned());
        orbit.sort();
        out[i] = orbit.into_iter().map(|r| (r, 1)).collect();
    }
    if let Some(i) = out.iter().position(|r| r.is_empty()) {
        return Err(Error::Internal(format!(
            "no generator has minimal polynomial {}",
            polys[i]
        )));
    }
    Ok(out)
}

/// Counts from checking `f ⋄ g` irreducible ⟺ `f`, `g` irreducible and
/// `gcd(m, n) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcReport {
    pub q: u128,
    pub m: usize,
    pub n: usize,
    pub op: String,
    /// Irreducible pairs checked.
    pub pairs: usize,
    /// Of those, how many products came out irreducible.
    pub irreducible_products: usize,
    /// Reducible-input samples checked.
    pub reducible_samples: usize,
    /// Irreducible pairs whose `m·n` root-pair values were pairwise distinct.
    pub distinct_value_pairs: usize,
    /// Every input pair breaking the equivalence.
    pub violations: Vec<BcViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcViolation {
    pub f: Poly,
    pub g: Poly,
    pub product: Poly,
    pub irreducible: bool,
}

impl BcReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check over every pair of monic irreducibles of degrees `m`, `n`
/// over `base`, plus `samples` reducible inputs on each side built as products
/// of seeded random irreducibles. Refuses operations without weak cancellation.
pub fn brawley_carlitz_verify(
    base: &FieldCtx,
    m: usize,
    n: usize,
    d: &DiamondOp,
    seed: u64,
    samples: usize,
    limits: &Limits,
) -> Result<BcReport> {
    d.check_base(base)?;
    cancellation::check_bivar_degrees(d)?;
    let pair = GeneratorPair::new(base, m, n, limits)?;
    let wc = cancellation::weak_cancellation_in(d, base, &pair, limits, Scope::Full)?;
    if let Some(cx) = wc.counterexample {
        return Err(Error::WeakCancellationFails(format!(
            "{d}: {:?} violation at α = {}, β = {}, partner = {}",
            cx.kind, cx.alpha, cx.beta, cx.partner
        )));
    }
    let q = base.cardinality();
    let coprime = ntheory::gcd(m as u64, n as u64) == 1;
    let fs: Vec<Poly> = all_monic_irreducibles(base, m, limits.budget)?.collect();
    let gs: Vec<Poly> = all_monic_irreducibles(base, n, limits.budget)?.collect();
    limits.check_budget((fs.len() as u128) * (gs.len() as u128))?;
    let fr = roots_from_orbits(&pair.left, q, &fs)?;
    let gr = roots_from_orbits(&pair.right, q, &gs)?;

    let mut report = BcReport {
        q,
        m,
        n,
        op: d.to_string(),
        pairs: 0,
        irreducible_products: 0,
        reducible_samples: 0,
        distinct_value_pairs: 0,
        violations: Vec::new(),
    };
    for (f, rf) in fs.iter().zip(&fr) {
        for (g, rg) in gs.iter().zip(&gr) {
            let (prod, distinct) = product_over_roots(base, rf, rg, d)?;
            let irreducible = prod.is_irreducible()?;
            report.pairs += 1;
            if irreducible {
                report.irreducible_products += 1;
            }
            if distinct == m * n {
                report.distinct_value_pairs += 1;
            }
            if irreducible != coprime {
                report.violations.push(BcViolation {
                    f: f.clone(),
                    g: g.clone(),
                    product: prod,
                    irreducible,
                });
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reducible = |deg: usize| -> Result<Poly> {
        let split = rng.random_range(1..deg);
        let a = random_irreducible(base, split, rng.random())?;
        let b = random_irreducible(base, deg - split, rng.random())?;
        Ok(&a * &b)
    };
    let mut sampled = Vec::new();
    for _ in 0..samples {
        if let (true, Some(g)) = (m >= 2, gs.first()) {
            sampled.push((reducible(m)?, g.clone()));
        }
        if let (true, Some(f)) = (n >= 2, fs.first()) {
            sampled.push((f.clone(), reducible(n)?));
        }
    }
    for (i, (f, g)) in sampled.into_iter().enumerate() {
        let prod = composed_product(&f, &g, d, seed.wrapping_add(i as u64), limits)?.poly;
        let irreducible = prod.is_irreducible()?;
        report.reducible_samples += 1;
        if irreducible {
            report.violations.push(BcViolation {
                f,
                g,
                product: prod,
                irreducible,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldCtx {
        FieldCtx::prime(2).unwrap()
    }

    #[test]
    fn linear_inputs() {
        let k = FieldCtx::prime(5).unwrap();
        let f = Poly::parse("x-2", &k).unwrap();
        let g = Poly::parse("x-4", &k).unwrap();
        let cp = composed_product(&f, &g, &DiamondOp::Add, 0, &Limits::default()).unwrap();
        assert_eq!(cp.poly, Poly::parse("x-1", &k).unwrap());
        let cp = composed_product(&f, &g, &DiamondOp::Mul, 0, &Limits::default()).unwrap();
        assert_eq!(cp.poly, Poly::parse("x-3", &k).unwrap());
    }

    #[test]
    fn shared_degree_gives_reducible_product() {
        let k = f2();
        let f = Poly::parse("x^2+x+1", &k).unwrap();
        let cp = composed_product(&f, &f, &DiamondOp::Mul, 0, &Limits::default()).unwrap();
        assert_eq!(cp.poly.degree(), Some(4));
        assert!(!cp.poly.is_irreducible().unwrap());
    }

    #[test]
    fn sextic_is_irreducible_and_builtins_match_bivariate() {
        let k = f2();
        let f = Poly::parse("x^2+x+1", &k).unwrap();
        let g = Poly::parse("x^3+x+1", &k).unwrap();
        let limits = Limits::default();
        for (op, phi) in [(DiamondOp::Add, "phi=x+y"), (DiamondOp::Mul, "phi=x*y")] {
            let a = composed_product(&f, &g, &op, 0, &limits).unwrap();
            let b =
                composed_product(&f, &g, &DiamondOp::parse(phi, &k).unwrap(), 0, &limits).unwrap();
            assert_eq!(a, b);
            assert!(a.poly.is_irreducible().unwrap());
            assert_eq!(a.distinct_values, 6);
        }
    }

    #[test]
    fn reducible_inputs_and_multiplicity() {
        let k = FieldCtx::prime(3).unwrap();
        let f = Poly::parse("x^2+2*x+1", &k).unwrap(); // (x+1)^2
        let g = Poly::parse("x^2+1", &k).unwrap();
        let cp = composed_product(&f, &g, &DiamondOp::Add, 0, &Limits::default()).unwrap();
        let h = composed_product(
            &Poly::parse("x+1", &k).unwrap(),
            &g,
            &DiamondOp::Add,
            0,
            &Limits::default(),
        )
        .unwrap()
        .poly;
        assert_eq!(cp.poly, &h * &h);
        assert!(matches!(
            composed_product(
                &Poly::parse("2*x+1", &k).unwrap(),
                &g,
                &DiamondOp::Add,
                0,
                &Limits::default()
            ),
            Err(Error::NotMonic)
        ));
    }

    #[test]
    fn small_equivalence_runs() {
        let limits = Limits::default();
        let r = brawley_carlitz_verify(&f2(), 2, 3, &DiamondOp::Add, 7, 2, &limits).unwrap();
        assert_eq!((r.pairs, r.irreducible_products), (2, 2));
        assert_eq!(r.distinct_value_pairs, 2);
        assert!(r.holds());
        let r = brawley_carlitz_verify(&f2(), 2, 2, &DiamondOp::Mul, 7, 2, &limits).unwrap();
        assert_eq!((r.pairs, r.irreducible_products), (1, 0));
        assert!(r.holds());
        let k3 = FieldCtx::prime(3).unwrap();
        let phi = DiamondOp::parse("phi=x*y+x+y", &k3).unwrap();
        assert!(brawley_carlitz_verify(&k3, 2, 3, &phi, 7, 2, &limits)
            .unwrap()
            .holds());
    }

    #[test]
    fn refuses_without_weak_cancellation() {
        let k = f2();
        let phi = DiamondOp::parse("phi=x^2*y+x*y", &k).unwrap();
        assert!(matches!(
            brawley_carlitz_verify(&k, 2, 3, &phi, 0, 0, &Limits::default()),
            Err(Error::WeakCancellationFails(_))
        ));
    }
}
