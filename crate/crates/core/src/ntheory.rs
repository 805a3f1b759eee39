//! Integer helpers: primality, factoring, multiplicative orders and the
//! Möbius function. Everything here works on machine integers; group orders
//! of fields under the cardinality cap fit in `u64`.

use crate::error::{Error, Result};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut r = 1u64;
        let mut ys = 2u64;
        const BATCH: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factor(1)` is empty.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut primes = Vec::new();
    for p in 2..1000u64 {
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Smallest prime divisor of `n > 1`.
pub fn smallest_prime_divisor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    prime_divisors(n).first().copied()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn mobius(n: u64) -> i64 {
    let mut sign = 1;
    for (_, e) in factor(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Least `t >= 1` with `r^t ≡ 1 (mod k)`.
pub fn ord_mod(k: u64, r: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::PreconditionViolated(
            "modulus must be positive".into(),
        ));
    }
    if k == 1 {
        return Ok(1);
    }
    if gcd(k, r % k) != 1 {
        return Err(Error::NotCoprime(k, r));
    }
    // The order divides the group exponent, which divides φ(k).
    let mut phi_factors: Vec<(u64, u32)> = Vec::new();
    let mut phi = 1u64;
    for (p, e) in factor(k) {
        phi *= (p - 1) * p.pow(e - 1);
        if e > 1 {
            phi_factors.push((p, e - 1));
        }
        if p > 2 {
            phi_factors.extend(factor(p - 1));
        }
    }
    let mut primes: Vec<u64> = phi_factors.into_iter().map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    Ok(strip_order(phi, &primes, |t| pow_mod(r, t, k) == 1))
}

/// Shrinks a multiple `n` of an order to the order itself, given the prime
/// divisors of `n` and a predicate testing `x^t == 1`.
pub fn strip_order(mut n: u64, primes: &[u64], is_identity: impl Fn(u64) -> bool) -> u64 {
    for &p in primes {
        while n.is_multiple_of(p) && is_identity(n / p) {
            n /= p;
        }
    }
    n
}

/// Checked integer power; `None` on overflow.
pub fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

/// If `q = p^s` for the prime `p`, returns `s`.
pub fn log_exact(p: u64, mut q: u128) -> Option<u32> {
    if q == 0 {
        return None;
    }
    let mut s = 0;
    while q.is_multiple_of(p as u128) {
        q /= p as u128;
        s += 1;
    }
    (q == 1).then_some(s)
}

/// Number of monic irreducible polynomials of degree `n` over a field of size `q`.
pub fn irreducible_count(q: u128, n: u32) -> u128 {
    let mut total: i128 = 0;
    for d in divisors(n as u64) {
        let mu = mobius(n as u64 / d) as i128;
        total += mu * q.pow(d as u32) as i128;
    }
    (total / n as i128) as u128
}

/// |F_m(q)|: elements of `F_{q^m}` generating it over `F_q`.
pub fn generator_count(q: u128, m: u32) -> u128 {
    let mut total: i128 = 0;
    for d in divisors(m as u64) {
        let mu = mobius(m as u64 / d) as i128;
        total += mu * q.pow(d as u32) as i128;
    }
    total as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive_prime(n), "{n}");
        }
        assert!(is_prime(4294967311));
        assert!(!is_prime(9));
        // strong pseudoprime to bases 2..=37 would be needed to fool this
        assert!(!is_prime(3215031751));
        assert!(is_prime(18446744073709551557));
    }

    #[test]
    fn factoring_recombines() {
        for n in [
            1u64,
            2,
            12,
            97,
            341,
            1 << 40,
            600851475143,
            18446744073709551615,
        ] {
            let f = factor(n);
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factor(4294967297), vec![(641, 1), (6700417, 1)]);
    }

    #[test]
    fn multiplicative_order_modulo() {
        assert_eq!(ord_mod(1, 5).unwrap(), 1);
        assert_eq!(ord_mod(7, 2).unwrap(), 3);
        assert_eq!(ord_mod(341, 2).unwrap(), 10);
        assert!(matches!(ord_mod(6, 2), Err(Error::NotCoprime(6, 2))));
        for k in 2..300u64 {
            for r in 1..k {
                if gcd(k, r) != 1 {
                    continue;
                }
                let brute = (1..).find(|&t| pow_mod(r, t, k) == 1).unwrap();
                assert_eq!(ord_mod(k, r).unwrap(), brute, "ord_{k}({r})");
            }
        }
    }

    #[test]
    fn counting_formulas() {
        assert_eq!(irreducible_count(2, 2), 1);
        assert_eq!(irreducible_count(2, 3), 2);
        assert_eq!(irreducible_count(3, 2), 3);
        assert_eq!(generator_count(2, 2), 2);
        assert_eq!(generator_count(3, 6), 729 - 27 - 9 + 3);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(smallest_prime_divisor(9), Some(3));
        assert_eq!(log_exact(2, 64), Some(6));
        assert_eq!(log_exact(2, 12), None);
    }
}
