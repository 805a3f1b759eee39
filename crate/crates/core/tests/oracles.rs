//! Results of the library compared against small independent computations
//! on plain integers.

use diamond_core::composed::composed_product;
use diamond_core::conjecture::{
    find_witness, is_prescribed_witness, sweep_tasks, Outcome, SearchTask, Strategy,
};
use diamond_core::ntheory::is_prime;
use diamond_core::poly::all_monic_irreducibles;
use diamond_core::{DiamondOp, FieldCtx, Limits, Poly};

const SEED: u64 = 7;

/// GF(64) as bit vectors modulo t^6 + t + 1.
fn gf64_mul(mut a: u8, mut b: u8) -> u8 {
    let mut r = 0u8;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x40 != 0 {
            a ^= 0x43;
        }
    }
    r
}

/// Roots in GF(64) of a GF(2) polynomial given by its coefficient bits.
fn gf64_roots(coeffs: &[u8]) -> Vec<u8> {
    (0..64u8)
        .filter(|&a| {
            let mut acc = 0u8;
            for &c in coeffs.iter().rev() {
                acc = gf64_mul(acc, a) ^ c;
            }
            acc == 0
        })
        .collect()
}

/// Monic polynomial with the given GF(64) roots, lowest coefficient first.
fn gf64_from_roots(roots: &[u8]) -> Vec<u8> {
    let mut p = vec![1u8];
    for &r in roots {
        let mut next = vec![0u8; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] ^= c;
            next[i] ^= gf64_mul(c, r);
        }
        p = next;
    }
    p
}

fn library_bits(f: &Poly) -> Vec<u8> {
    f.coeffs().iter().map(|c| c.coords()[0] as u8).collect()
}

#[test]
fn gf64_composed_sum_and_product() {
    let k = FieldCtx::prime(2).unwrap();
    let f = Poly::parse("x^2+x+1", &k).unwrap();
    let g = Poly::parse("x^3+x+1", &k).unwrap();
    let a = gf64_roots(&[1, 1, 1]);
    let b = gf64_roots(&[1, 1, 0, 1]);
    assert_eq!((a.len(), b.len()), (2, 3));
    type Combine = fn(u8, u8) -> u8;
    let cases: [(&str, Combine); 3] = [
        ("add", |x, y| x ^ y),
        ("mul", gf64_mul),
        ("phi=x*y+x+y", |x, y| gf64_mul(x, y) ^ x ^ y),
    ];
    for (op, combine) in cases {
        let values: Vec<u8> = a
            .iter()
            .flat_map(|&x| b.iter().map(move |&y| combine(x, y)))
            .collect();
        let expected = gf64_from_roots(&values);
        assert!(
            expected.iter().all(|&c| c <= 1),
            "{op}: product not over GF(2)"
        );
        let d = DiamondOp::parse(op, &k).unwrap();
        let got = composed_product(&f, &g, &d, SEED, &Limits::default()).unwrap();
        assert_eq!(library_bits(&got.poly), expected, "{op}");
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    diamond_core::ntheory::pow_mod(a, p - 2, p)
}

/// Determinant over GF(p) by elimination.
fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = inv_mod(m[col][col], p);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] * inv % p;
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = (*x + p - factor * y % p) % p;
            }
        }
    }
    det
}

/// Resultant of two polynomials (lowest coefficient first) via the Sylvester matrix.
fn resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut s = vec![vec![0u64; size]; size];
    for i in 0..n {
        for (j, &c) in a.iter().rev().enumerate() {
            s[i][i + j] = c;
        }
    }
    for i in 0..m {
        for (j, &c) in b.iter().rev().enumerate() {
            s[n + i][i + j] = c;
        }
    }
    det_mod(s, p)
}

fn eval_mod(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

fn binom(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Coefficients in `y` of `g(x0 - y)`.
fn shifted_reflection(g: &[u64], x0: u64, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; g.len()];
    for (k, &c) in g.iter().enumerate() {
        // (x0 - y)^k = Σ_i C(k,i) x0^(k-i) (-y)^i
        for (i, slot) in out.iter_mut().enumerate().take(k + 1) {
            let mut term = c * (binom(k, i) % p) % p
                * diamond_core::ntheory::pow_mod(x0, (k - i) as u64, p)
                % p;
            if i % 2 == 1 {
                term = (p - term) % p;
            }
            *slot = (*slot + term) % p;
        }
    }
    out
}

/// Coefficients in `y` of `y^n g(x0 / y)`.
fn homogenized(g: &[u64], x0: u64, p: u64) -> Vec<u64> {
    let n = g.len() - 1;
    let mut out = vec![0u64; n + 1];
    for (k, &c) in g.iter().enumerate() {
        out[n - k] = c * diamond_core::ntheory::pow_mod(x0, k as u64, p) % p;
    }
    out
}

#[test]
fn resultant_cross_check_over_gf31() {
    let p = 31;
    let k = FieldCtx::prime(p).unwrap();
    let limits = Limits::default();
    let fs: Vec<Poly> = all_monic_irreducibles(&k, 2, limits.budget)
        .unwrap()
        .take(3)
        .collect();
    let gs: Vec<Poly> = all_monic_irreducibles(&k, 3, limits.budget)
        .unwrap()
        .take(3)
        .collect();
    let ints = |f: &Poly| {
        f.coeffs()
            .iter()
            .map(|c| c.coords()[0])
            .collect::<Vec<u64>>()
    };
    for f in &fs {
        for g in &gs {
            let (fi, gi) = (ints(f), ints(g));
            let sum = composed_product(f, g, &DiamondOp::Add, SEED, &limits)
                .unwrap()
                .poly;
            let prod = composed_product(f, g, &DiamondOp::Mul, SEED, &limits)
                .unwrap()
                .poly;
            for x0 in 0..p {
                assert_eq!(
                    eval_mod(&ints(&sum), x0, p),
                    resultant(&fi, &shifted_reflection(&gi, x0, p), p)
                );
                assert_eq!(
                    eval_mod(&ints(&prod), x0, p),
                    resultant(&fi, &homogenized(&gi, x0, p), p)
                );
            }
        }
    }
}

#[test]
fn sweep_task_list_matches_integer_enumeration() {
    for bound in [3u128, 16, 100, 1000, 10_000] {
        let mut expected = Vec::new();
        for p in (2..=bound as u64).filter(|&p| is_prime(p)) {
            for k in 1..64usize {
                for l in 1..64usize {
                    if k * l < 2 {
                        continue;
                    }
                    let size = (p as u128).checked_pow((k * l) as u32);
                    if size.is_some_and(|s| s <= bound) {
                        expected.push((size.unwrap(), p, k, l));
                    }
                }
            }
        }
        expected.sort_unstable();
        let got: Vec<(u128, u64, usize, usize)> = sweep_tasks(bound)
            .into_iter()
            .map(|t| (t.size().unwrap(), t.p, t.k, t.l))
            .collect();
        assert_eq!(got, expected, "bound {bound}");
    }
}

#[test]
fn fast_paths_agree_with_exhaustive_on_existence() {
    let limits = Limits::default();
    for t in sweep_tasks(2000) {
        let fast = find_witness(t, Strategy::Auto, SEED, &limits).unwrap();
        let slow = find_witness(t, Strategy::Exhaustive, SEED, &limits).unwrap();
        assert!(matches!(fast, Outcome::Found(_)), "{t:?}");
        assert!(matches!(slow, Outcome::Found(_)), "{t:?}");
    }
}

#[test]
fn witness_for_prime_base_serves_prime_power_base() {
    // a witness for (p, r*k, l) is a witness for (p^r, k, l)
    let limits = Limits::default();
    for (p, r, k, l) in [
        (2u64, 2usize, 1usize, 2usize),
        (2, 2, 2, 3),
        (2, 3, 1, 2),
        (3, 2, 1, 2),
        (2, 2, 3, 2),
        (3, 1, 2, 3),
    ] {
        let t = SearchTask::new(p, r * k, l).unwrap();
        let Outcome::Found(w) = find_witness(t, Strategy::Auto, SEED, &limits).unwrap() else {
            panic!("no witness for {t:?}");
        };
        w.validate().unwrap();
        let q = (p as u128).pow(r as u32);
        assert!(is_prescribed_witness(&w.f, q, k).unwrap(), "{t:?}");
        assert!(is_prescribed_witness(&w.f, p as u128, r * k).unwrap());
    }
}
