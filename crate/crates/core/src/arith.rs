//! Integer helpers shared by the other modules: word-size modular arithmetic,
//! primality, sieving, factoring with an explicit give-up point, CRT
//! reconstruction and p-adic valuations.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

pub fn reduce_bigint(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
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

/// Miller-Rabin with the first twenty prime bases. Deterministic below 2^64,
/// probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in small_primes().iter().take(20) {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(k, &is_p)| is_p.then_some(k as u64))
        .collect()
}

pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;
pub const RHO_ITERATION_CAP: u64 = 10_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_LIMIT))
}

/// Primes `p >= 11` with `p = 2` or `5 (mod 9)`, in `[lo, hi]`.
pub fn family_primes(lo: u64, hi: u64) -> Vec<u64> {
    primes_up_to(hi)
        .into_iter()
        .filter(|&p| p >= lo.max(11) && is_family_prime(p))
        .collect()
}

pub fn is_family_prime(p: u64) -> bool {
    p >= 11 && matches!(p % 9, 2 | 5) && is_prime_u64(p)
}

/// Word-size CRT moduli, all prime and just below 2^62, in a fixed order.
pub fn crt_prime(index: usize) -> u64 {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut primes = cache.lock().expect("crt prime cache poisoned");
    while primes.len() <= index {
        let mut candidate = primes.last().map_or((1u64 << 62) - 1, |&q| q - 2);
        while !is_prime_u64(candidate) {
            candidate -= 2;
        }
        primes.push(candidate);
    }
    primes[index]
}

/// Incremental Chinese remaindering into a symmetric representative.
#[derive(Debug, Clone)]
pub struct CrtAccumulator {
    value: BigUint,
    modulus: BigUint,
}

impl Default for CrtAccumulator {
    fn default() -> Self {
        Self {
            value: BigUint::zero(),
            modulus: BigUint::one(),
        }
    }
}

impl CrtAccumulator {
    pub fn push(&mut self, residue: u64, q: u64) {
        let current = (&self.value % q).to_u64().unwrap();
        let m_mod_q = (&self.modulus % q).to_u64().unwrap();
        let inv = inv_mod(m_mod_q, q).expect("CRT moduli must be coprime");
        let k = mul_mod(sub_mod(residue % q, current, q), inv, q);
        self.value += &self.modulus * k;
        self.modulus *= q;
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// The representative in `(-m/2, m/2]`.
    pub fn symmetric(&self) -> BigInt {
        let half = &self.modulus >> 1;
        if self.value > half {
            BigInt::from(self.value.clone()) - BigInt::from(self.modulus.clone())
        } else {
            BigInt::from(self.value.clone())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Proven or probable prime factors with multiplicity, ascending.
    pub primes: Vec<(BigUint, u32)>,
    /// Product of the composite parts that could not be split (1 when complete).
    pub cofactor: BigUint,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

/// Trial division up to `trial_limit`, then Brent's variant of Pollard rho
/// with at most `rho_cap` iterations per split attempt. Unsplit composites
/// end up in `cofactor`.
pub fn factor(n: &BigUint, trial_limit: u64, rho_cap: u64) -> Factorization {
    let mut primes: Vec<(BigUint, u32)> = Vec::new();
    let mut cofactor = BigUint::one();
    if n.is_zero() {
        return Factorization {
            primes,
            cofactor: BigUint::zero(),
        };
    }
    let mut m = n.clone();
    for &q in small_primes() {
        if q > trial_limit {
            break;
        }
        let qb = BigUint::from(q);
        if &qb * &qb > m {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, rem) = m.div_rem(&qb);
            if !rem.is_zero() {
                break;
            }
            m = quot;
            e += 1;
        }
        if e > 0 {
            primes.push((qb, e));
        }
    }
    let mut stack = Vec::new();
    if !m.is_one() {
        stack.push(m);
    }
    let mut found: Vec<BigUint> = Vec::new();
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        if is_probable_prime(&x) {
            found.push(x);
            continue;
        }
        if let Some(root) = perfect_square_root(&x) {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        match pollard_rho(&x, rho_cap) {
            Some(d) => {
                let other = &x / &d;
                stack.push(d);
                stack.push(other);
            }
            None => cofactor *= x,
        }
    }
    found.sort();
    for q in found {
        match primes.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => primes.push((q, 1)),
        }
    }
    primes.sort();
    Factorization { primes, cofactor }
}

fn perfect_square_root(x: &BigUint) -> Option<BigUint> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

fn pollard_rho(n: &BigUint, cap: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let mut iterations = 0u64;
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
                iterations += BATCH;
                if iterations > cap {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            // batch overshot: replay one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n && g != one {
            return Some(g);
        }
    }
    None
}

/// Exponent of the prime `p` in `n` (`n != 0`).
pub fn valuation(n: i128, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let p = p as i128;
    let mut m = n;
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

pub fn valuation_big(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Distinct prime factors of `|n|` with exponents, ascending. Panics if the
/// factorisation cannot be completed within the default budget.
pub fn factor_i128(n: i128) -> Vec<(u128, u32)> {
    let f = factor(
        &BigUint::from(n.unsigned_abs()),
        TRIAL_DIVISION_LIMIT,
        RHO_ITERATION_CAP,
    );
    assert!(f.is_complete(), "could not factor {n}");
    f.primes
        .into_iter()
        .map(|(q, e)| (q.to_u128().expect("factor fits"), e))
        .collect()
}

/// Exact integer cube root, if `n` is a perfect cube.
pub fn exact_cube_root(n: i128) -> Option<i128> {
    let r = BigInt::from(n).cbrt();
    let r = r.to_i128()?;
    (r.checked_mul(r)?.checked_mul(r)? == n).then_some(r)
}

/// Legendre symbol (a / p) for an odd prime p: 1, -1 or 0.
pub fn legendre(a: i128, p: u64) -> i32 {
    let a = reduce_i128(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&z| legendre(z as i128, p) == -1)
        .expect("odd prime has a non-residue")
}

/// Distinct prime divisors of a u64.
pub fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(10_000);
        let by_mr: Vec<u64> = (0..=10_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, by_mr);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn family_primes_small() {
        assert_eq!(family_primes(11, 60), vec![11, 23, 29, 41, 47, 59]);
    }

    #[test]
    fn factor_with_large_prime_factors() {
        let a = BigUint::from(1_000_000_007u64);
        let b = BigUint::from(998_244_353u64);
        let n = &a * &b * BigUint::from(12u32);
        let f = factor(&n, TRIAL_DIVISION_LIMIT, RHO_ITERATION_CAP);
        assert!(f.is_complete());
        assert_eq!(
            f.primes,
            vec![
                (BigUint::from(2u32), 2),
                (BigUint::from(3u32), 1),
                (b, 1),
                (a, 1)
            ]
        );
    }

    #[test]
    fn rho_cap_leaves_cofactor() {
        let a = BigUint::from(4_294_967_311u64);
        let b = BigUint::from(4_294_967_357u64);
        let n = &a * &b;
        let f = factor(&n, 1_000, 10);
        assert!(f.primes.is_empty());
        assert_eq!(f.cofactor, n);
    }

    #[test]
    fn crt_recovers_negative_values() {
        let target = BigInt::from(-123_456_789_012_345_678_901_234i128);
        let mut acc = CrtAccumulator::default();
        for i in 0..3 {
            let q = crt_prime(i);
            acc.push(reduce_bigint(&target, q), q);
        }
        assert_eq!(acc.symmetric(), target);
    }

    #[test]
    fn cube_roots_and_valuations() {
        assert_eq!(exact_cube_root(-27), Some(-3));
        assert_eq!(exact_cube_root(28), None);
        assert_eq!(valuation(6534, 11), 2);
        assert_eq!(valuation(-23, 23), 1);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(smallest_nonresidue(11), 2);
        assert_eq!(smallest_nonresidue(23), 5);
    }
}
