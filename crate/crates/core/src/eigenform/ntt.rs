//! Exact truncated power-series squaring via number-theoretic transforms and
//! CRT reconstruction.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

/// NTT-friendly primes `c * 2^k + 1` (all support transforms of length `2^23`)
/// paired with a primitive root.
const PRIMES: [(u64, u64); 5] = [
    (998_244_353, 3),
    (167_772_161, 3),
    (469_762_049, 3),
    (754_974_721, 11),
    (2_013_265_921, 31),
];

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn ntt(a: &mut [u64], invert: bool, p: u64, g: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w = pow_mod(w, p - 2, p);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut t = 1u64;
        for _ in 0..half {
            twiddles.push(t);
            t = t * w % p;
        }
        for block in a.chunks_mut(len) {
            let (lo, hi) = block.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * twiddles[k] % p;
                lo[k] = if u + v >= p { u + v - p } else { u + v };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, p - 2, p);
        for x in a.iter_mut() {
            *x = *x * inv_n % p;
        }
    }
}

fn square_truncated_mod(a: &[u64], keep: usize, p: u64, g: u64) -> Vec<u64> {
    let size = (2 * a.len()).next_power_of_two();
    let mut buf = vec![0u64; size];
    buf[..a.len()].copy_from_slice(a);
    ntt(&mut buf, false, p, g);
    for x in buf.iter_mut() {
        *x = *x * *x % p;
    }
    ntt(&mut buf, true, p, g);
    buf.truncate(keep);
    buf
}

/// Coefficients `0..len` of `s^(2^squarings)` for an integer series `s`,
/// reconstructed exactly provided every output coefficient is below half the
/// product of the five moduli (about `6e43`) in absolute value.
pub(crate) fn repeated_square(series: &[i64], len: usize, squarings: u32) -> Vec<i128> {
    let residues: Vec<Vec<u64>> = PRIMES
        .par_iter()
        .map(|&(p, g)| {
            let mut cur: Vec<u64> = series
                .iter()
                .take(len)
                .map(|&c| c.rem_euclid(p as i64) as u64)
                .collect();
            cur.resize(len, 0);
            for _ in 0..squarings {
                cur = square_truncated_mod(&cur, len, p, g);
            }
            cur
        })
        .collect();
    crt_symmetric(&residues, len)
}

/// Garner reconstruction into the symmetric range `(-M/2, M/2]`.
fn crt_symmetric(residues: &[Vec<u64>], len: usize) -> Vec<i128> {
    let moduli: Vec<u64> = PRIMES.iter().map(|&(p, _)| p).collect();
    let k = moduli.len();
    // inv[i][j] = moduli[i]^{-1} mod moduli[j]
    let mut inv = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                inv[i][j] = pow_mod(moduli[i] % moduli[j], moduli[j] - 2, moduli[j]);
            }
        }
    }
    let modulus: BigInt = moduli.iter().fold(BigInt::from(1), |acc, &m| acc * m);
    let half = &modulus / 2;
    (0..len)
        .into_par_iter()
        .map(|n| {
            let mut digits = vec![0u64; k];
            for i in 0..k {
                let mut x = residues[i][n];
                for j in 0..i {
                    let diff = (x + moduli[i] - digits[j] % moduli[i]) % moduli[i];
                    x = diff * inv[j][i] % moduli[i];
                }
                digits[i] = x;
            }
            let mut value = BigInt::zero();
            for i in (0..k).rev() {
                value = value * moduli[i] + digits[i];
            }
            if value > half {
                value -= &modulus;
            }
            value.to_i128().expect("coefficient fits in i128")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_square(a: &[i64], len: usize) -> Vec<i128> {
        let mut out = vec![0i128; len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in a.iter().enumerate() {
                if i + j < len {
                    out[i + j] += x as i128 * y as i128;
                }
            }
        }
        out
    }

    #[test]
    fn matches_schoolbook_with_negative_entries() {
        let a: Vec<i64> = (0..300).map(|i| ((i * 7919) % 2001) as i64 - 1000).collect();
        assert_eq!(repeated_square(&a, 300, 1), naive_square(&a, 300));
    }

    #[test]
    fn reconstructs_large_coefficients() {
        // (1 + 10^9 x)^4 has coefficient 6 * 10^18 at x^2 and 10^36 at x^4.
        let a = vec![1i64, 1_000_000_000];
        let out = repeated_square(&a, 5, 2);
        assert_eq!(out[2], 6 * 10i128.pow(18));
        assert_eq!(out[4], 10i128.pow(36));
    }
}
