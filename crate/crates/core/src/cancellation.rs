//! Exhaustive checkers for weak cancellation, restricted injectivity and the
//! linear independence of `α^i - σ^k(α^i)`, plus a sweep over every bivariate
//! diamond with bounded degrees.

use std::collections::HashMap;
use std::thread;

use serde::Serialize;

use crate::diamond::{BivarPoly, DiamondOp};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::limits::Limits;
use crate::linalg;
use crate::ntheory::{self, checked_pow};
use crate::poly::Poly;
use crate::subfield;

type PartnerGrid = Vec<Vec<Option<usize>>>;

/// Seed used to locate subfield copies; only affects which root is found
/// first in large fields, never the resulting (sorted) sets.
const EMBED_SEED: u64 = 0x5eed;

/// Which cancellation law a counterexample breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    /// `α⋄β = α⋄β'` with `β ≠ β'`.
    Right,
    /// `α⋄β = α'⋄β` with `α ≠ α'`.
    Left,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: Violation,
    pub alpha: FieldElem,
    pub beta: FieldElem,
    /// `β'` for [`Violation::Right`], `α'` for [`Violation::Left`].
    pub partner: FieldElem,
    /// `k` with `partner = σ^k(moving element)`, when the partner lies in its orbit.
    pub k: Option<usize>,
    pub value: FieldElem,
}

/// Restriction on the partner `α'` or `β'` in the weak cancellation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scope {
    #[default]
    Full,
    /// Partners range over the Frobenius orbit only.
    OrbitOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakCancellation {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
    /// `|F_m(q)|` and `|F_n(q)|`.
    pub left_size: usize,
    pub right_size: usize,
    /// `[W : F_q]` for the working field `W` that realizes both sets.
    pub working_degree: usize,
}

/// The working field and the two generator sets `F_m(q)`, `F_n(q)` inside it.
pub struct GeneratorPair {
    pub field: FieldCtx,
    pub left: Vec<FieldElem>,
    pub right: Vec<FieldElem>,
}

impl GeneratorPair {
    pub fn new(base: &FieldCtx, m: usize, n: usize, limits: &Limits) -> Result<GeneratorPair> {
        if m == 0 || n == 0 {
            return Err(Error::PreconditionViolated(
                "degrees must be positive".into(),
            ));
        }
        let q = base.cardinality();
        let l = ntheory::lcm(m as u64, n as u64) as usize;
        limits.check_cap(checked_pow(q, l as u32))?;
        let field = base.extension_of_degree(l)?;
        let left = subfield::generators_in(base, &field, m, EMBED_SEED, limits)?;
        let right = subfield::generators_in(base, &field, n, EMBED_SEED, limits)?;
        Ok(GeneratorPair { field, left, right })
    }
}

/// Index map of the `q`-Frobenius on a Frobenius-stable sorted list.
fn frobenius_perm(elems: &[FieldElem], q: u128) -> Result<Vec<usize>> {
    let pos: HashMap<&FieldElem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    elems
        .iter()
        .map(|e| {
            let img = e.pow(q);
            pos.get(&img)
                .copied()
                .ok_or_else(|| Error::Internal("generator set is not Frobenius stable".into()))
        })
        .collect()
}

/// Smallest `k >= 1` with `perm^k(from) = to`.
fn orbit_step(perm: &[usize], from: usize, to: usize) -> Option<usize> {
    let mut cur = perm[from];
    let mut k = 1;
    while cur != from {
        if cur == to {
            return Some(k);
        }
        cur = perm[cur];
        k += 1;
    }
    None
}

pub(crate) fn check_bivar_degrees(d: &DiamondOp) -> Result<()> {
    if let DiamondOp::Bivar(phi) = d {
        if phi.deg_x().unwrap_or(0) == 0 || phi.deg_y().unwrap_or(0) == 0 {
            return Err(Error::DegenerateBivariate);
        }
    }
    Ok(())
}

/// Exhaustive check of weak cancellation of `d` on `F_m(q) × F_n(q)`,
/// `q = |base|`. The reported counterexample is the least one in the order
/// (α, β, kind, partner), elements compared canonically.
pub fn weak_cancellation(
    d: &DiamondOp,
    base: &FieldCtx,
    m: usize,
    n: usize,
    limits: &Limits,
    scope: Scope,
) -> Result<WeakCancellation> {
    d.check_base(base)?;
    check_bivar_degrees(d)?;
    let pair = GeneratorPair::new(base, m, n, limits)?;
    weak_cancellation_in(d, base, &pair, limits, scope)
}

pub fn weak_cancellation_in(
    d: &DiamondOp,
    base: &FieldCtx,
    pair: &GeneratorPair,
    limits: &Limits,
    scope: Scope,
) -> Result<WeakCancellation> {
    let (a, b) = (&pair.left, &pair.right);
    limits.check_budget((a.len() as u128) * (b.len() as u128))?;
    let q = base.cardinality();
    let table: Vec<Vec<FieldElem>> = a
        .iter()
        .map(|x| b.iter().map(|y| d.eval(x, y)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let pa = frobenius_perm(a, q)?;
    let pb = frobenius_perm(b, q)?;

    // candidate partners for each row and column, least index first
    let first_other = |vals: Vec<&FieldElem>| -> Vec<Option<usize>> {
        let mut groups: HashMap<&FieldElem, Vec<usize>> = HashMap::new();
        for (i, v) in vals.iter().enumerate() {
            groups.entry(*v).or_default().push(i);
        }
        vals.iter()
            .enumerate()
            .map(|(i, v)| groups[*v].iter().copied().find(|&j| j != i))
            .collect()
    };
    let orbit_partner = |perm: &[usize], i: usize, same: &dyn Fn(usize) -> bool| -> Option<usize> {
        let mut best = None;
        let mut cur = perm[i];
        while cur != i {
            if same(cur) && best.is_none_or(|b| cur < b) {
                best = Some(cur);
            }
            cur = perm[cur];
        }
        best
    };

    let (right_partner, left_partner): (PartnerGrid, PartnerGrid) = match scope {
        Scope::Full => {
            let rows = table
                .iter()
                .map(|r| first_other(r.iter().collect()))
                .collect();
            let cols: PartnerGrid = (0..b.len())
                .map(|j| first_other(table.iter().map(|r| &r[j]).collect()))
                .collect();
            let left = (0..a.len())
                .map(|i| (0..b.len()).map(|j| cols[j][i]).collect())
                .collect();
            (rows, left)
        }
        Scope::OrbitOnly => {
            let right = (0..a.len())
                .map(|i| {
                    (0..b.len())
                        .map(|j| orbit_partner(&pb, j, &|j2| table[i][j2] == table[i][j]))
                        .collect()
                })
                .collect();
            let left = (0..a.len())
                .map(|i| {
                    (0..b.len())
                        .map(|j| orbit_partner(&pa, i, &|i2| table[i2][j] == table[i][j]))
                        .collect()
                })
                .collect();
            (right, left)
        }
    };

    let mut counterexample = None;
    'scan: for i in 0..a.len() {
        for j in 0..b.len() {
            if let Some(j2) = right_partner[i][j] {
                counterexample = Some(Counterexample {
                    kind: Violation::Right,
                    alpha: a[i].clone(),
                    beta: b[j].clone(),
                    partner: b[j2].clone(),
                    k: orbit_step(&pb, j, j2),
                    value: table[i][j].clone(),
                });
                break 'scan;
            }
            if let Some(i2) = left_partner[i][j] {
                counterexample = Some(Counterexample {
                    kind: Violation::Left,
                    alpha: a[i].clone(),
                    beta: b[j].clone(),
                    partner: a[i2].clone(),
                    k: orbit_step(&pa, i, i2),
                    value: table[i][j].clone(),
                });
                break 'scan;
            }
        }
    }
    Ok(WeakCancellation {
        holds: counterexample.is_none(),
        counterexample,
        left_size: a.len(),
        right_size: b.len(),
        working_degree: pair.field.degree(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedInjectivity {
    pub holds: bool,
    /// Least `α` (canonical order) with `ψ(α) = ψ(σ^k(α))`, and the least such `k`.
    pub counterexample: Option<(FieldElem, usize)>,
    pub checked: usize,
}

/// Restricted injectivity of `ψ` on `F_m(q)`. Both the defining implication
/// and the membership test `ψ(α) ∈ F_m(q)` are evaluated for every `α`, and
/// any disagreement between them is reported as an error.
pub fn restricted_injectivity(
    psi: &Poly,
    m: usize,
    limits: &Limits,
) -> Result<RestrictedInjectivity> {
    if psi.degree().unwrap_or(0) == 0 {
        return Err(Error::DegreeZero);
    }
    let base = psi.ctx();
    let q = base.cardinality();
    let (_, elems) = subfield::generators_local(base, m, limits)?;
    let mut counterexample = None;
    for a in &elems {
        let v = psi.eval(a)?;
        let mut cur = a.clone();
        let mut bad_k = None;
        for k in 1..m {
            cur = cur.pow(q);
            if psi.eval(&cur)? == v {
                bad_k = Some(k);
                break;
            }
        }
        let member = v.in_calf(q, m)?;
        if member != bad_k.is_none() {
            return Err(Error::EquivalenceViolation(format!(
                "restricted injectivity at α = {a}: definition gives {}, membership gives {member}",
                bad_k.is_none()
            )));
        }
        if counterexample.is_none() {
            if let Some(k) = bad_k {
                counterexample = Some((a.clone(), k));
            }
        }
    }
    Ok(RestrictedInjectivity {
        holds: counterexample.is_none(),
        counterexample,
        checked: elems.len(),
    })
}

/// Whether `α^i - σ^k(α^i)`, `1 <= i < m₁`, are linearly independent over
/// `F_q`, where `α ∈ F_m(q)` lives in a degree-`m` extension of `F_q`.
pub fn linear_independence_check(alpha: &FieldElem, m: usize, k: usize) -> Result<bool> {
    let w = alpha.ctx();
    let base = w.base().filter(|_| w.degree() == m).ok_or_else(|| {
        Error::PreconditionViolated(format!("α must live in a degree-{m} extension of F_q"))
    })?;
    let q = base.cardinality();
    if k.is_multiple_of(m) {
        return Err(Error::PreconditionViolated(format!("{m} divides k = {k}")));
    }
    if !alpha.in_calf(q, m)? {
        return Err(Error::PreconditionViolated(format!(
            "{alpha} is not in F_{m}(q)"
        )));
    }
    let m1 = ntheory::smallest_prime_divisor(m as u64).unwrap_or(1) as usize;
    let qk = checked_pow(q, k as u32).ok_or(Error::CardinalityOverflow)?;
    let rows: Vec<Vec<FieldElem>> = (1..m1)
        .map(|i| {
            let ai = alpha.pow(i as u128);
            (&ai - &ai.pow(qk)).coeffs()
        })
        .collect();
    Ok(linalg::rank(&rows) == m1 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceSweep {
    pub checked: usize,
    /// `(α, k)` pairs where the rank falls short.
    pub failures: Vec<(FieldElem, usize)>,
}

/// [`linear_independence_check`] for every `α ∈ F_m(q)` and `0 < k < m`.
pub fn independence_sweep(base: &FieldCtx, m: usize, limits: &Limits) -> Result<IndependenceSweep> {
    let (_, elems) = subfield::generators_local(base, m, limits)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for a in &elems {
        for k in 1..m {
            checked += 1;
            if !linear_independence_check(a, m, k)? {
                failures.push((a.clone(), k));
            }
        }
    }
    Ok(IndependenceSweep { checked, failures })
}

/// Result of checking weak cancellation for every bivariate `φ` in a degree box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BivariateSweep {
    /// Number of `φ` with positive degree in both variables that were checked.
    pub checked: u64,
    /// Failing `φ` in enumeration order, each with its canonical counterexample.
    pub failures: Vec<SweepFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub phi: BivarPoly,
    pub counterexample: Counterexample,
}

/// Coefficient matrix number `idx` in the box `rows × cols`, entry `(i, j)`
/// being digit `i * cols + j` in base `q` (least significant first).
fn matrix_from_index(base: &FieldCtx, rows: usize, cols: usize, mut idx: u128) -> BivarPoly {
    let q = base.cardinality();
    let mut m = vec![vec![base.zero(); cols]; rows];
    for row in m.iter_mut() {
        for c in row.iter_mut() {
            *c = base.element_from_index(idx % q);
            idx /= q;
        }
    }
    BivarPoly::new(base, m)
}

/// Checks weak cancellation on `F_m(q) × F_n(q)` for every `φ` over `base`
/// with `1 <= deg_x φ <= max_x` and `1 <= deg_y φ <= max_y`, comparing
/// partners over the range selected by `scope`.
///
/// Over a prime base the values `φ(α, β)` are updated incrementally as the
/// coefficient matrix is stepped through in order; other bases evaluate each
/// `φ` directly. Every failure is re-derived with [`weak_cancellation`].
pub fn bivariate_sweep(
    base: &FieldCtx,
    m: usize,
    n: usize,
    max_x: usize,
    max_y: usize,
    scope: Scope,
    limits: &Limits,
    shards: usize,
) -> Result<BivariateSweep> {
    let q = base.cardinality();
    let (rows, cols) = (max_y + 1, max_x + 1);
    let total = checked_pow(q, (rows * cols) as u32).ok_or(Error::CardinalityOverflow)?;
    limits.check_budget(total)?;
    let pair = GeneratorPair::new(base, m, n, limits)?;
    let perms = match scope {
        Scope::Full => None,
        Scope::OrbitOnly => Some((
            frobenius_perm(&pair.left, q)?,
            frobenius_perm(&pair.right, q)?,
        )),
    };
    let shards = shards.max(1);
    let chunk = total.div_ceil(shards as u128);
    let kernel = |start: u128, end: u128| -> Result<(u64, Vec<u128>)> {
        if base.is_prime() {
            prime_kernel(base, &pair, rows, cols, perms.as_ref(), start, end)
        } else {
            generic_kernel(base, &pair, rows, cols, scope, start, end, limits)
        }
    };
    let parts: Vec<Result<(u64, Vec<u128>)>> = thread::scope(|s| {
        let handles: Vec<_> = (0..shards as u128)
            .map(|t| {
                let (start, end) = ((t * chunk).min(total), ((t + 1) * chunk).min(total));
                let kernel = &kernel;
                s.spawn(move || kernel(start, end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep shard panicked"))
            .collect()
    });
    let mut checked = 0;
    let mut failing = Vec::new();
    for p in parts {
        let (c, f) = p?;
        checked += c;
        failing.extend(f);
    }
    failing.sort_unstable();
    let mut failures = Vec::new();
    for idx in failing {
        let phi = matrix_from_index(base, rows, cols, idx);
        let wc = weak_cancellation_in(&DiamondOp::Bivar(phi.clone()), base, &pair, limits, scope)?;
        let cx = wc.counterexample.ok_or_else(|| {
            Error::Internal(format!(
                "sweep kernel flagged {phi} but the direct check holds"
            ))
        })?;
        failures.push(SweepFailure {
            phi,
            counterexample: cx,
        });
    }
    Ok(BivariateSweep { checked, failures })
}

/// Weak cancellation on `F_m(q) × F_n(q)` for every `φ` with
/// `0 < deg_x φ < m₁` and `0 < deg_y φ < n₁`.
pub fn theorem_bound_sweep(
    base: &FieldCtx,
    m: usize,
    n: usize,
    scope: Scope,
    limits: &Limits,
    shards: usize,
) -> Result<BivariateSweep> {
    let (Some(m1), Some(n1)) = (
        ntheory::smallest_prime_divisor(m as u64),
        ntheory::smallest_prime_divisor(n as u64),
    ) else {
        return Err(Error::PreconditionViolated("m and n must exceed 1".into()));
    };
    let (m1, n1) = (m1 as usize, n1 as usize);
    bivariate_sweep(base, m, n, m1 - 1, n1 - 1, scope, limits, shards)
}

fn nondegenerate(digit_nonzero: impl Fn(usize, usize) -> bool, rows: usize, cols: usize) -> bool {
    let has_x = (0..rows).any(|i| (1..cols).any(|j| digit_nonzero(i, j)));
    let has_y = (1..rows).any(|i| (0..cols).any(|j| digit_nonzero(i, j)));
    has_x && has_y
}

fn generic_kernel(
    base: &FieldCtx,
    pair: &GeneratorPair,
    rows: usize,
    cols: usize,
    scope: Scope,
    start: u128,
    end: u128,
    limits: &Limits,
) -> Result<(u64, Vec<u128>)> {
    let mut checked = 0;
    let mut failing = Vec::new();
    for idx in start..end {
        let phi = matrix_from_index(base, rows, cols, idx);
        if !nondegenerate(|i, j| !phi.coeff(i, j).is_zero(), rows, cols) {
            continue;
        }
        checked += 1;
        if !weak_cancellation_in(&DiamondOp::Bivar(phi), base, pair, limits, scope)?.holds {
            failing.push(idx);
        }
    }
    Ok((checked, failing))
}

/// True when some row or column of `keys` (row-major, `w` columns) repeats a value.
fn has_repeat(keys: &[u128], h: usize, w: usize, scratch: &mut Vec<u128>) -> bool {
    for i in 0..h {
        scratch.clear();
        scratch.extend_from_slice(&keys[i * w..(i + 1) * w]);
        scratch.sort_unstable();
        if scratch.windows(2).any(|p| p[0] == p[1]) {
            return true;
        }
    }
    for j in 0..w {
        scratch.clear();
        scratch.extend((0..h).map(|i| keys[i * w + j]));
        scratch.sort_unstable();
        if scratch.windows(2).any(|p| p[0] == p[1]) {
            return true;
        }
    }
    false
}

/// True when some cell of `keys` repeats along the Frobenius orbit of its
/// row element or of its column element.
fn has_orbit_repeat(keys: &[u128], pa: &[usize], pb: &[usize]) -> bool {
    let w = pb.len();
    let cycle_hit = |perm: &[usize], start: usize, key: &dyn Fn(usize) -> u128| {
        let v = key(start);
        let mut cur = perm[start];
        while cur != start {
            if key(cur) == v {
                return true;
            }
            cur = perm[cur];
        }
        false
    };
    (0..pa.len()).any(|i| {
        (0..w).any(|j| {
            cycle_hit(pb, j, &|j2| keys[i * w + j2]) || cycle_hit(pa, i, &|i2| keys[i2 * w + j])
        })
    })
}

/// Odometer over coefficient matrices with prime-field digits. Stepping digit
/// `t` adds the coordinates of `α^j β^i` to every cell; a digit wrapping back
/// to zero has been added `p` times and so contributes nothing, which means
/// each carry is again a single addition.
fn prime_kernel(
    base: &FieldCtx,
    pair: &GeneratorPair,
    rows: usize,
    cols: usize,
    perms: Option<&(Vec<usize>, Vec<usize>)>,
    start: u128,
    end: u128,
) -> Result<(u64, Vec<u128>)> {
    let p = base.p();
    let (a, b) = (&pair.left, &pair.right);
    let (h, w) = (a.len(), b.len());
    let cells = h * w;
    let dim = pair.field.abs_degree();
    let digits = rows * cols;
    // precomputed[t][cell * dim + c] for digit t = i * cols + j
    let mut precomputed = vec![vec![0u64; cells * dim]; digits];
    for i in 0..rows {
        for j in 0..cols {
            let t = i * cols + j;
            for (ai, x) in a.iter().enumerate() {
                let xj = x.pow(j as u128);
                for (bi, y) in b.iter().enumerate() {
                    let v = &xj * &y.pow(i as u128);
                    let cell = ai * w + bi;
                    precomputed[t][cell * dim..(cell + 1) * dim].copy_from_slice(v.coords());
                }
            }
        }
    }

    let mut state = vec![0u64; digits];
    let mut rest = start;
    for d in state.iter_mut() {
        *d = (rest % p as u128) as u64;
        rest /= p as u128;
    }
    let mut acc = vec![0u64; cells * dim];
    for (t, &d) in state.iter().enumerate() {
        for _ in 0..d {
            add_assign_mod(&mut acc, &precomputed[t], p);
        }
    }

    let mut keys = vec![0u128; cells];
    let mut scratch = Vec::with_capacity(h.max(w));
    let mut checked = 0;
    let mut failing = Vec::new();
    for idx in start..end {
        if nondegenerate(|i, j| state[i * cols + j] != 0, rows, cols) {
            checked += 1;
            for (cell, key) in keys.iter_mut().enumerate() {
                *key = acc[cell * dim..(cell + 1) * dim]
                    .iter()
                    .rev()
                    .fold(0u128, |k, &c| k * p as u128 + c as u128);
            }
            let repeat = match perms {
                None => has_repeat(&keys, h, w, &mut scratch),
                Some((pa, pb)) => has_orbit_repeat(&keys, pa, pb),
            };
            if repeat {
                failing.push(idx);
            }
        }
        for t in 0..digits {
            add_assign_mod(&mut acc, &precomputed[t], p);
            state[t] += 1;
            if state[t] < p {
                break;
            }
            state[t] = 0;
        }
    }
    Ok((checked, failing))
}

fn add_assign_mod(acc: &mut [u64], add: &[u64], p: u64) {
    for (x, &y) in acc.iter_mut().zip(add) {
        let s = *x + y;
        *x = if s >= p { s - p } else { s };
    }
}
