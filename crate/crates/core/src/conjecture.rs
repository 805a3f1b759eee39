//! Irreducible polynomials whose non-constant coefficients lie in the base
//! field and whose constant term generates the extension: witness search,
//! the Artin–Schreier and binomial constructions, range sweeps, and the
//! four equivalent conditions tying them to weak cancellation.

use std::fmt;
use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cancellation::{self, GeneratorPair, Scope, WeakCancellation};
use crate::diamond::{BivarPoly, DiamondOp};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::limits::Limits;
use crate::ntheory::{self, checked_pow};
use crate::poly::{Poly, SCAN_LIMIT};
use crate::subfield;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SearchTask {
    pub p: u64,
    pub k: usize,
    pub l: usize,
}

impl SearchTask {
    pub fn new(p: u64, k: usize, l: usize) -> Result<SearchTask> {
        if !ntheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 || l == 0 {
            return Err(Error::PreconditionViolated(
                "k and l must be positive".into(),
            ));
        }
        Ok(SearchTask { p, k, l })
    }

    /// `p^(kl)`, if it fits.
    pub fn size(&self) -> Option<u128> {
        checked_pow(self.p as u128, (self.k * self.l) as u32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Constructions first, then the exhaustive scan.
    #[default]
    Auto,
    Exhaustive,
    FastOnly,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "exhaustive" => Ok(Strategy::Exhaustive),
            "fast_only" | "fast-only" => Ok(Strategy::FastOnly),
            _ => Err(Error::PreconditionViolated(format!(
                "unknown strategy `{s}`"
            ))),
        }
    }
}

/// How a witness was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ArtinSchreier,
    Binomial,
    Exhaustive,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::ArtinSchreier => "artin_schreier",
            Source::Binomial => "binomial",
            Source::Exhaustive => "exhaustive",
        })
    }
}

/// Monic irreducible `f` of degree `l` over `F_{p^k}` with `f - f(0)` over
/// `F_p` and `f(0) ∈ F_k(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub task: SearchTask,
    pub f: Poly,
    /// `-f(0)`.
    pub c0: FieldElem,
    pub source: Source,
    /// Seed of the randomized step, when one was used.
    pub seed: Option<u64>,
}

impl Witness {
    fn build(task: SearchTask, f: Poly, source: Source, seed: Option<u64>) -> Result<Witness> {
        let c0 = -&f.coeff(0);
        let w = Witness {
            task,
            f,
            c0,
            source,
            seed,
        };
        w.validate()?;
        Ok(w)
    }

    /// Re-checks every defining property from scratch.
    pub fn validate(&self) -> Result<()> {
        let SearchTask { p, k, l } = self.task;
        let ctx = self.f.ctx();
        if ctx.p() != p || ctx.abs_degree() != k {
            return Err(Error::Internal(format!(
                "witness lives in a field of size {}",
                ctx.cardinality()
            )));
        }
        if self.f.degree() != Some(l) {
            return Err(Error::Internal(format!(
                "witness {} has degree other than {l}",
                self.f
            )));
        }
        if self.c0 != -&self.f.coeff(0) {
            return Err(Error::Internal("recorded c0 is not -f(0)".into()));
        }
        if !is_prescribed_witness(&self.f, p as u128, k)? {
            return Err(Error::Internal(format!(
                "{} is not a witness for {:?}",
                self.f, self.task
            )));
        }
        Ok(())
    }
}

/// True when `f` (over a field of cardinality `q^k`) is monic irreducible,
/// every non-constant coefficient is fixed by the `q`-Frobenius, and `f(0)`
/// generates `F_{q^k}` over `F_q`.
pub fn is_prescribed_witness(f: &Poly, q: u128, k: usize) -> Result<bool> {
    let ctx = f.ctx();
    let s = ctx.subfield_exponent(q)?;
    if ctx.abs_degree() != s * k {
        return Err(Error::NotASubfieldCardinality(q));
    }
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    for c in &f.coeffs()[1..] {
        if c.frobenius(q)? != *c {
            return Ok(false);
        }
    }
    Ok(f.coeff(0).in_calf(q, k)? && f.is_irreducible()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Outcome {
    Found(Witness),
    /// The full space was scanned and nothing qualified.
    Exhausted {
        scanned: u128,
    },
}

/// First polynomial `x^l + Σ c_i x^i - c0` over `ext` (in candidate order)
/// with `c_i ∈ base` and `c0 ∈ F_k(q)`, `q = |base|`, `k = [ext : base]`.
/// The lower coefficients form the outer loop with `c_1` varying fastest;
/// `c0` runs through `F_k(q)` in canonical order inside it.
pub fn first_prescribed(
    base: &FieldCtx,
    ext: &FieldCtx,
    l: usize,
    limits: &Limits,
) -> Result<(Option<Poly>, u128)> {
    if !base.is_subfield_of(ext) || l == 0 {
        return Err(Error::CtxMismatch);
    }
    let q = base.cardinality();
    let k = ext.abs_degree() / base.abs_degree();
    let outer = checked_pow(q, (l - 1) as u32).ok_or(Error::CardinalityOverflow)?;
    let inner_count = ntheory::generator_count(q, k as u32);
    limits.check_budget(outer.saturating_mul(inner_count))?;
    let (_, consts) = subfield::generators_local(base, k, limits)?;
    // generators_local builds the same extension as `ext` when `ext` came
    // from extension_of_degree; otherwise enumerate `ext` directly
    let consts: Vec<FieldElem> = if consts.first().is_some_and(|c| c.ctx() == ext) {
        consts
    } else {
        let mut own = Vec::new();
        for e in ext.elements() {
            if e.in_calf(q, k)? {
                own.push(e);
            }
        }
        own
    };
    let mut scanned = 0u128;
    for idx in 0..outer {
        let mut coeffs = Vec::with_capacity(l + 1);
        coeffs.push(ext.zero());
        let mut rest = idx;
        for _ in 1..l {
            coeffs.push(ext.embed(&base.element_from_index(rest % q))?);
            rest /= q;
        }
        coeffs.push(ext.one());
        for c0 in &consts {
            scanned += 1;
            coeffs[0] = -c0;
            let f = Poly::new(ext, coeffs.clone());
            if f.is_irreducible()? {
                return Ok((Some(f), scanned));
            }
        }
    }
    Ok((None, scanned))
}

/// `x^p - x - a` for the first `a ∈ F_k(p)` with absolute trace 1.
pub fn fast_path_artin_schreier(p: u64, k: usize, limits: &Limits) -> Result<Witness> {
    let task = SearchTask::new(p, k, p as usize)?;
    let prime = FieldCtx::prime(p)?;
    limits.check_cap(checked_pow(p as u128, k as u32))?;
    let ext = prime.extension_of_degree(k)?;
    limits.check_budget(ext.cardinality())?;
    for a in ext.elements() {
        if a.trace_to(p as u128)?.is_one() && a.in_calf(p as u128, k)? {
            let mut coeffs = vec![ext.zero(); p as usize + 1];
            coeffs[0] = -&a;
            coeffs[1] = -&ext.one();
            coeffs[p as usize] = ext.one();
            return Witness::build(task, Poly::new(&ext, coeffs), Source::ArtinSchreier, None);
        }
    }
    Err(Error::Internal(format!(
        "no trace-one generator of F_{{{p}^{k}}}"
    )))
}

/// Whether every prime factor of `l` divides `p^k - 1`, with `p^k ≡ 1 (mod 4)`
/// when `4 | l`.
pub fn binomial_applies(p: u64, k: usize, l: usize) -> bool {
    let Some(pk) = checked_pow(p as u128, k as u32) else {
        return false;
    };
    let order = pk - 1;
    let divides = ntheory::prime_divisors(l as u64)
        .into_iter()
        .all(|t| order % t as u128 == 0);
    divides && (!l.is_multiple_of(4) || pk % 4 == 1)
}

/// A primitive element: the first in canonical order for small fields,
/// otherwise sampled with ChaCha8 from `seed`.
pub fn primitive_element(
    ctx: &FieldCtx,
    seed: u64,
    limits: &Limits,
) -> Result<(FieldElem, Option<u64>)> {
    let n = ctx.cardinality();
    limits.check_cap(Some(n))?;
    let full = (n - 1) as u64;
    let is_primitive =
        |a: &FieldElem| -> Result<bool> { Ok(!a.is_zero() && a.mult_order(limits.cap)? == full) };
    if n <= SCAN_LIMIT {
        for a in ctx.elements() {
            if is_primitive(&a)? {
                return Ok((a, None));
            }
        }
        return Err(Error::Internal("field has no primitive element".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100_000 {
        let a = ctx.element_from_index(rng.random_range(1..n));
        if is_primitive(&a)? {
            return Ok((a, Some(seed)));
        }
    }
    Err(Error::Internal(
        "primitive element search did not converge".into(),
    ))
}

/// `x^l - a` for a primitive `a`, or [`Error::NotApplicable`].
pub fn fast_path_binomial(
    p: u64,
    k: usize,
    l: usize,
    seed: u64,
    limits: &Limits,
) -> Result<Witness> {
    let task = SearchTask::new(p, k, l)?;
    if !binomial_applies(p, k, l) {
        return Err(Error::NotApplicable);
    }
    limits.check_cap(checked_pow(p as u128, k as u32))?;
    let ext = FieldCtx::prime(p)?.extension_of_degree(k)?;
    let (a, used) = primitive_element(&ext, seed, limits)?;
    let mut coeffs = vec![ext.zero(); l + 1];
    coeffs[0] = -&a;
    coeffs[l] = ext.one();
    Witness::build(task, Poly::new(&ext, coeffs), Source::Binomial, used)
}

pub fn find_witness(
    task: SearchTask,
    strategy: Strategy,
    seed: u64,
    limits: &Limits,
) -> Result<Outcome> {
    let SearchTask { p, k, l } = SearchTask::new(task.p, task.k, task.l)?;
    limits.check_cap(checked_pow(p as u128, k as u32))?;
    if strategy != Strategy::Exhaustive {
        if l as u64 == p {
            return Ok(Outcome::Found(fast_path_artin_schreier(p, k, limits)?));
        }
        match fast_path_binomial(p, k, l, seed, limits) {
            Ok(w) => return Ok(Outcome::Found(w)),
            Err(Error::NotApplicable) if strategy == Strategy::Auto => {}
            Err(e) => return Err(e),
        }
    }
    let prime = FieldCtx::prime(p)?;
    let ext = prime.extension_of_degree(k)?;
    match first_prescribed(&prime, &ext, l, limits)? {
        (Some(f), _) => Ok(Outcome::Found(Witness::build(
            task,
            f,
            Source::Exhaustive,
            None,
        )?)),
        (None, scanned) => Ok(Outcome::Exhausted { scanned }),
    }
}

/// Every `(p, k, l)` with `kl >= 2` and `p^(kl) <= bound`, ordered by
/// `(p^(kl), p, k, l)`.
pub fn sweep_tasks(bound: u128) -> Vec<SearchTask> {
    let mut tasks = Vec::new();
    let mut p = 2u64;
    while (p as u128) * (p as u128) <= bound {
        if ntheory::is_prime(p) {
            let mut n = 2usize;
            while checked_pow(p as u128, n as u32).is_some_and(|v| v <= bound) {
                for k in 1..=n {
                    if n.is_multiple_of(k) {
                        tasks.push(SearchTask { p, k, l: n / k });
                    }
                }
                n += 1;
            }
        }
        p += 1;
    }
    tasks.sort_by_key(|t| (t.size().unwrap(), t.p, t.k, t.l));
    tasks
}

/// Per-task seed, independent of sharding.
pub fn task_seed(seed: u64, t: &SearchTask) -> u64 {
    seed ^ (t.p << 20) ^ ((t.k as u64) << 10) ^ t.l as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub k: usize,
    pub l: usize,
    pub pkl: u128,
    /// `artin_schreier`, `binomial`, `exhaustive`, or `exhausted`.
    pub strategy: String,
    pub witness_f: Option<String>,
    pub witness_c0: Option<String>,
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub bound: u128,
    pub tasks: usize,
    pub witnessed: usize,
    pub exhausted: usize,
    pub rows: Vec<SweepRow>,
}

/// Runs [`find_witness`] in `auto` mode on every task of [`sweep_tasks`],
/// split into `shards` contiguous blocks on separate threads.
pub fn verify_range(
    bound: u128,
    shards: usize,
    seed: u64,
    timings: bool,
    limits: &Limits,
) -> Result<SweepReport> {
    let tasks = sweep_tasks(bound);
    let shards = shards.max(1);
    let chunk = tasks.len().div_ceil(shards).max(1);
    let run = |slice: &[SearchTask]| -> Result<Vec<SweepRow>> {
        slice
            .iter()
            .map(|t| {
                let start = Instant::now();
                let outcome = find_witness(*t, Strategy::Auto, task_seed(seed, t), limits)?;
                let elapsed_ms = timings.then(|| start.elapsed().as_millis());
                let (strategy, witness_f, witness_c0) = match outcome {
                    Outcome::Found(w) => (
                        w.source.to_string(),
                        Some(w.f.to_string()),
                        Some(w.c0.to_string()),
                    ),
                    Outcome::Exhausted { .. } => ("exhausted".to_string(), None, None),
                };
                Ok(SweepRow {
                    p: t.p,
                    k: t.k,
                    l: t.l,
                    pkl: t.size().unwrap(),
                    strategy,
                    witness_f,
                    witness_c0,
                    elapsed_ms,
                })
            })
            .collect()
    };
    let parts: Vec<Result<Vec<SweepRow>>> = thread::scope(|s| {
        let handles: Vec<_> = tasks
            .chunks(chunk)
            .map(|c| s.spawn(move || run(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep shard panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(tasks.len());
    for p in parts {
        rows.extend(p?);
    }
    let exhausted = rows.iter().filter(|r| r.witness_f.is_none()).count();
    Ok(SweepReport {
        bound,
        tasks: rows.len(),
        witnessed: rows.len() - exhausted,
        exhausted,
        rows,
    })
}

/// Four conditions on `(q, m, n)` that the theory says are equivalent,
/// each computed independently, with the witness behind each true one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropE3Report {
    pub m1: usize,
    pub n1: usize,
    pub cond_i: Option<CondI>,
    pub cond_ii: Option<CondII>,
    pub cond_iii: Option<CondIII>,
    /// Monic irreducible `f` of degree `m₁` over `F_{q^{m/m₁}}` of the prescribed shape.
    pub cond_iv: Option<Poly>,
}

/// `φ = ψ(x)·y` with `φ(σ^k α, β) = φ(α, β)` and `σ^k α ≠ α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondI {
    pub phi: BivarPoly,
    pub alpha: FieldElem,
    pub k: usize,
    pub beta: FieldElem,
}

/// Monic `ψ` of degree `m₁` with `ψ(0) = 0` and `ψ(α) = ψ(σ^k α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondII {
    pub psi: Poly,
    pub alpha: FieldElem,
    pub k: usize,
}

/// `α^{m₁} + Σ c_i α^i ∈ F_{m/m₁}(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondIII {
    pub alpha: FieldElem,
    pub c: Vec<FieldElem>,
}

impl PropE3Report {
    pub fn flags(&self) -> [bool; 4] {
        [
            self.cond_i.is_some(),
            self.cond_ii.is_some(),
            self.cond_iii.is_some(),
            self.cond_iv.is_some(),
        ]
    }
}

fn smallest_primes(m: usize, n: usize) -> Result<(usize, usize)> {
    if m < 2 || n < 2 || ntheory::gcd(m as u64, n as u64) != 1 {
        return Err(Error::PreconditionViolated(format!(
            "need coprime m, n > 1, got {m}, {n}"
        )));
    }
    let sp = |v: usize| ntheory::smallest_prime_divisor(v as u64).unwrap() as usize;
    Ok((sp(m), sp(n)))
}

/// `x^{m₁} + Σ_{i<m₁} c_i x^i` with `c_0 = 0`, lower coefficients from index `idx`.
fn normalized_psi(base: &FieldCtx, m1: usize, idx: u128) -> Poly {
    let q = base.cardinality();
    let mut coeffs = vec![base.zero()];
    let mut rest = idx;
    for _ in 1..m1 {
        coeffs.push(base.element_from_index(rest % q));
        rest /= q;
    }
    coeffs.push(base.one());
    Poly::new(base, coeffs)
}

/// Searches `α ∈ F_m(q)`, `1 <= k < m`, `β ∈ F_n(q)` in order for
/// `φ(σ^k α, β) = φ(α, β)`.
fn search_orbit_collision(
    phi: &BivarPoly,
    q: u128,
    m: usize,
    pair: &GeneratorPair,
) -> Result<Option<(FieldElem, usize, FieldElem)>> {
    let d = DiamondOp::Bivar(phi.clone());
    for a in &pair.left {
        let mut moved = a.clone();
        for k in 1..m {
            moved = moved.pow(q);
            for b in &pair.right {
                if d.eval(&moved, b)? == d.eval(a, b)? {
                    return Ok(Some((a.clone(), k, b.clone())));
                }
            }
        }
    }
    Ok(None)
}

/// `(f(x) - f(0))·y` over `base` for `f` over an extension of `base` whose
/// non-constant coefficients lie in `base`.
fn tight_phi(base: &FieldCtx, f: &Poly) -> Result<BivarPoly> {
    let mut coeffs = vec![base.zero()];
    for c in &f.coeffs()[1..] {
        coeffs.push(base.descend(c)?);
    }
    Ok(BivarPoly::times_y(&Poly::new(base, coeffs)))
}

pub fn prop_e3_equivalence(
    base: &FieldCtx,
    m: usize,
    n: usize,
    limits: &Limits,
) -> Result<PropE3Report> {
    let (m1, n1) = smallest_primes(m, n)?;
    let q = base.cardinality();
    let lower = checked_pow(q, (m1 - 1) as u32).ok_or(Error::CardinalityOverflow)?;

    // (ii): every normalized ψ, checked by both injectivity routes
    let mut cond_ii = None;
    for idx in 0..lower {
        let psi = normalized_psi(base, m1, idx);
        let ri = cancellation::restricted_injectivity(&psi, m, limits)?;
        if let Some((a, k)) = ri.counterexample {
            cond_ii = Some(CondII { psi, alpha: a, k });
            break;
        }
    }

    // (iii): α ∈ F_m(q), c ∈ F_q^{m₁-1}
    let (_, alphas) = subfield::generators_local(base, m, limits)?;
    limits.check_budget((alphas.len() as u128).saturating_mul(lower))?;
    let mut cond_iii = None;
    'iii: for a in &alphas {
        let powers: Vec<FieldElem> = (0..=m1).map(|i| a.pow(i as u128)).collect();
        for idx in 0..lower {
            let mut rest = idx;
            let mut cs = Vec::with_capacity(m1 - 1);
            let mut v = powers[m1].clone();
            for pw in &powers[1..m1] {
                let c = base.element_from_index(rest % q);
                rest /= q;
                v = &v + &(&a.ctx().embed(&c)? * pw);
                cs.push(c);
            }
            if v.in_calf(q, m / m1)? {
                cond_iii = Some(CondIII {
                    alpha: a.clone(),
                    c: cs,
                });
                break 'iii;
            }
        }
    }

    // (iv): the prescribed-shape polynomials over F_{q^{m/m₁}}
    let ext = base.extension_of_degree(m / m1)?;
    let cond_iv = first_prescribed(base, &ext, m1, limits)?.0;

    // (i): φ built from the (ii) and (iv) witnesses, collision searched in F_{q^{mn}}
    let mut cond_i = None;
    let candidates: Vec<BivarPoly> = cond_ii
        .iter()
        .map(|c| Ok(BivarPoly::times_y(&c.psi)))
        .chain(cond_iv.iter().map(|f| tight_phi(base, f)))
        .collect::<Result<_>>()?;
    if !candidates.is_empty() {
        let pair = GeneratorPair::new(base, m, n, limits)?;
        for phi in candidates {
            if phi.deg_x() != Some(m1) || phi.deg_y() != Some(1) {
                return Err(Error::Internal(format!(
                    "constructed φ = {phi} has the wrong degrees"
                )));
            }
            match search_orbit_collision(&phi, q, m, &pair)? {
                Some((a, k, b)) => {
                    cond_i.get_or_insert(CondI {
                        phi,
                        alpha: a,
                        k,
                        beta: b,
                    });
                }
                None => {
                    return Err(Error::EquivalenceViolation(format!(
                        "φ = {phi} built from a witness has no collision"
                    )));
                }
            }
        }
    }

    let report = PropE3Report {
        m1,
        n1,
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
    };
    let flags = report.flags();
    if flags.iter().any(|&b| b != flags[0]) {
        return Err(Error::EquivalenceViolation(format!(
            "conditions (i)-(iv) evaluate to {flags:?}"
        )));
    }
    Ok(report)
}

/// A bivariate diamond of `x`-degree `m₁` that breaks weak cancellation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tightness {
    pub phi: BivarPoly,
    /// Root of the prescribed-shape polynomial: `φ(σ^k α, β) = φ(α, β)`.
    pub alpha: FieldElem,
    pub k: usize,
    pub beta: FieldElem,
    pub check: WeakCancellation,
}

/// Builds `φ = (f(x) - f(0))·y` from the first prescribed-shape `f` and
/// verifies both the collision at `k = m/m₁` and the failure of weak
/// cancellation. `None` when no such `f` exists.
pub fn tightness_witness(
    base: &FieldCtx,
    m: usize,
    n: usize,
    limits: &Limits,
) -> Result<Option<Tightness>> {
    let (m1, _) = smallest_primes(m, n)?;
    let q = base.cardinality();
    let ext = base.extension_of_degree(m / m1)?;
    let Some(f) = first_prescribed(base, &ext, m1, limits)?.0 else {
        return Ok(None);
    };
    let phi = tight_phi(base, &f)?;
    let pair = GeneratorPair::new(base, m, n, limits)?;
    let k = m / m1;
    let qk = checked_pow(q, k as u32).ok_or(Error::CardinalityOverflow)?;
    let d = DiamondOp::Bivar(phi.clone());
    let beta = pair.right[0].clone();
    let mut found = None;
    for a in &pair.left {
        if d.eval(&a.pow(qk), &beta)? == d.eval(a, &beta)? {
            found = Some(a.clone());
            break;
        }
    }
    let alpha =
        found.ok_or_else(|| Error::Internal(format!("φ = {phi} has no collision at k = {k}")))?;
    let check = cancellation::weak_cancellation_in(&d, base, &pair, limits, Scope::Full)?;
    if check.holds {
        return Err(Error::Internal(format!(
            "φ = {phi} collides yet passes weak cancellation"
        )));
    }
    Ok(Some(Tightness {
        phi,
        alpha,
        k,
        beta,
        check,
    }))
}
