//! Integer and floating-point helpers shared by the other modules.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Exact binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Signed variant of [`binomial`].
pub fn binomial_signed(n: i64, k: i64) -> BigInt {
    BigInt::from(binomial(n, k))
}

/// Smallest-prime-factor sieve on `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn smallest_prime_factor(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }

    pub fn primes(&self) -> impl Iterator<Item = usize> + '_ {
        (2..self.spf.len()).filter(move |&n| self.spf[n] as usize == n)
    }

    /// Splits `n >= 2` as `(p, e, m)` with `n = p^e * m`, `p` the smallest prime factor
    /// and `gcd(p, m) = 1`.
    pub fn split_smallest(&self, n: usize) -> (usize, u32, usize) {
        let p = self.smallest_prime_factor(n);
        let mut m = n;
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        (p, e, m)
    }

    /// Prime factorisation as `(p, e)` pairs in increasing order of `p`.
    pub fn factorize(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let (p, e, m) = self.split_smallest(n);
            out.push((p, e));
            n = m;
        }
        out
    }
}

/// Primes up to and including `limit`.
pub fn primes_up_to(limit: usize) -> Vec<usize> {
    Sieve::new(limit.max(1)).primes().collect()
}

/// First `count` primes.
pub fn first_primes(count: usize) -> Vec<usize> {
    let mut limit = 32usize;
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Returns `Some(s)` when `n = s^2`.
pub fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let s = isqrt(n as u64) as i64;
    (s * s == n).then_some(s)
}

/// Extended Euclid: `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod_prime(a: i64, p: u64) -> Option<u64> {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// Kronecker symbol `(D / m)` for `m >= 1`.
pub fn kronecker(d: i64, m: u64) -> i32 {
    if m == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut m = m;
    let mut result = 1i32;
    while m.is_multiple_of(2) {
        m /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    if m == 1 {
        return result;
    }
    // Jacobi symbol (d / m) for odd m.
    let mut a = d.rem_euclid(m as i64) as u64;
    let mut n = m;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `sigma_k(n) mod m`.
pub fn sigma_mod(n: u64, k: u32, m: u64) -> u64 {
    let mut acc = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            acc = (acc + pow_mod(d, k as u64, m)) % m;
            let e = n / d;
            if e != d {
                acc = (acc + pow_mod(e, k as u64, m)) % m;
            }
        }
        d += 1;
    }
    acc
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(mut self, other: CompensatedSum) -> CompensatedSum {
        self.add(other.sum);
        self.add(other.carry);
        self
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Block length used by [`deterministic_sum`]. Chunk boundaries never depend
/// on the thread count, so results are bit-identical for any pool size.
pub const SUM_CHUNK: usize = 1 << 14;

/// Compensated sum of `f(n)` over `lo..=hi`, evaluated in fixed-size blocks in
/// parallel and combined by a fixed pairwise reduction tree.
pub fn deterministic_sum<F>(lo: usize, hi: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let len = hi - lo + 1;
    let chunks = len.div_ceil(SUM_CHUNK);
    let partials: Vec<CompensatedSum> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = lo + c * SUM_CHUNK;
            let end = (start + SUM_CHUNK - 1).min(hi);
            let mut acc = CompensatedSum::new();
            for n in start..=end {
                acc.add(f(n));
            }
            acc
        })
        .collect();
    pairwise_reduce(&partials).value()
}

fn pairwise_reduce(parts: &[CompensatedSum]) -> CompensatedSum {
    match parts.len() {
        0 => CompensatedSum::new(),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            pairwise_reduce(l).merge(pairwise_reduce(r))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigUint::from(20u32));
        assert_eq!(binomial(5, -1), BigUint::zero());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn sieve_factorizes() {
        let s = Sieve::new(1000);
        assert_eq!(s.factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(s.split_smallest(12), (2, 2, 3));
        assert_eq!(s.primes().count(), 168);
        assert!(s.is_prime(997));
    }

    #[test]
    fn kronecker_matches_legendre() {
        for &p in &[3u64, 5, 7, 11, 13, 101] {
            for a in -20i64..20 {
                let expected = if a.rem_euclid(p as i64) == 0 {
                    0
                } else if (1..p).any(|x| (x * x) as i64 % p as i64 == a.rem_euclid(p as i64)) {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), expected, "({a}/{p})");
            }
        }
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
    }

    #[test]
    fn tonelli_shanks() {
        for &p in &[3u64, 5, 13, 17, 41, 97, 7681] {
            for a in 1..60i64 {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!((r * r) % p, a as u64 % p);
                } else {
                    assert_eq!(kronecker(a, p), -1);
                }
            }
        }
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert!(g >= 0);
            }
        }
    }

    #[test]
    fn deterministic_sum_is_exact_on_integers() {
        let s = deterministic_sum(1, 100_000, |n| n as f64);
        assert_eq!(s, 5_000_050_000.0);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut acc = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }
}
