//! Theta coefficients `a_χ(n) = Σ_{N𝔫 = n} χ(𝔫)` of class-group characters.
//!
//! Two independent routes are provided: the form side, which weights the
//! representation numbers of every class by `χ`, and the ideal side, which
//! builds `a_χ` multiplicatively from the classes of prime ideals.
//!
//! The dictionary between forms and ideal classes has an orientation
//! ambiguity (a form may stand for an ideal class or its inverse). It does
//! not affect anything computed here: `r(n, Q) = r(n, Q^{-1})` because
//! `(x, y) -> (x, -y)` maps one form onto the other, so the form-side sums
//! for `χ` and `χ̄` agree, and on the ideal side conjugate prime ideals
//! contribute conjugate terms. Every `a_χ(n)` is therefore real, and
//! [`verify_character_decomposition`] vanishes under either convention.

use num_complex::Complex64;
use rayon::prelude::*;

use super::group::ClassGroup;
use super::{count_representations, representation_counts, QuadForm};
use crate::arith::{kronecker, sqrt_mod_prime, Sieve};
use crate::error::{Error, Result};

/// `a_χ(n)` for `1 <= n <= N`; slot 0 is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficients {
    pub chi: usize,
    values: Vec<Complex64>,
}

impl ThetaCoefficients {
    pub fn get(&self, n: usize) -> Complex64 {
        self.values[n]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Largest `n` covered.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Fundamental discriminants: `D ≡ 1 (mod 4)` squarefree, or `D = 4m` with
/// `m ≡ 2, 3 (mod 4)` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    fn squarefree(n: u64) -> bool {
        let mut p = 2u64;
        let mut n = n;
        while p * p <= n {
            if n.is_multiple_of(p * p) {
                return false;
            }
            if n.is_multiple_of(p) {
                n /= p;
            }
            p += 1;
        }
        true
    }
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree((d / 4).unsigned_abs()),
        _ => false,
    }
}

fn require_fundamental(d: i64) -> Result<()> {
    if is_fundamental_discriminant(d) {
        Ok(())
    } else {
        Err(Error::NonFundamentalDiscriminant(d))
    }
}

/// Number of integral ideals of norm `n` in `Q(√D)`: `Σ_{m | n} (D / m)`.
pub fn ideal_count(d: i64, n: u64) -> Result<u64> {
    require_fundamental(d)?;
    let mut total = 0i64;
    let mut m = 1u64;
    while m * m <= n {
        if n.is_multiple_of(m) {
            total += kronecker(d, m) as i64;
            if m * m != n {
                total += kronecker(d, n / m) as i64;
            }
        }
        m += 1;
    }
    Ok(total as u64)
}

/// `r(n, Q_c)` for every class `c` and `1 <= n <= limit`.
pub fn class_representation_counts(group: &ClassGroup, limit: usize) -> Vec<Vec<u64>> {
    group
        .forms()
        .par_iter()
        .map(|f| representation_counts(f, limit))
        .collect()
}

/// Form side: `a_χ(n) = Σ_c χ(c) r(n, Q_c) / w_D`.
pub fn theta_coefficients(group: &ClassGroup, chi: usize, limit: usize) -> Result<ThetaCoefficients> {
    require_fundamental(group.discriminant())?;
    check_character(group, chi)?;
    let counts = class_representation_counts(group, limit);
    Ok(theta_from_counts(group, chi, &counts))
}

pub(crate) fn theta_from_counts(group: &ClassGroup, chi: usize, counts: &[Vec<u64>]) -> ThetaCoefficients {
    let limit = counts.first().map_or(0, |c| c.len() - 1);
    let w = group.w() as f64;
    let weights: Vec<Complex64> = (0..group.h()).map(|c| group.character_value(chi, c)).collect();
    let mut values = vec![Complex64::new(0.0, 0.0); limit + 1];
    for (n, slot) in values.iter_mut().enumerate().skip(1) {
        *slot = counts
            .iter()
            .zip(&weights)
            .map(|(r, &x)| x * r[n] as f64)
            .sum::<Complex64>()
            / w;
    }
    ThetaCoefficients { chi, values }
}

fn check_character(group: &ClassGroup, chi: usize) -> Result<()> {
    if chi >= group.characters().len() {
        return Err(Error::OutOfRange(format!(
            "character index {chi} (class number {})",
            group.h()
        )));
    }
    Ok(())
}

/// Class of a prime ideal of norm `p` above a split or ramified `p`, as the
/// form `(p, b, (b^2 - D) / 4p)` with `b^2 ≡ D (mod 4p)`.
fn prime_ideal_class(group: &ClassGroup, p: u64) -> Result<usize> {
    let d = group.discriminant();
    let p_i = p as i64;
    let b = if p == 2 {
        (0..4i64)
            .find(|b| (b * b - d).rem_euclid(8) == 0)
            .expect("2 is split or ramified")
    } else {
        let r = sqrt_mod_prime(d, p).expect("D is a square mod p") as i64;
        if (r - d).rem_euclid(2) == 0 { r } else { p_i - r }
    };
    let form = QuadForm::new(p_i, b, (b * b - d) / (4 * p_i))?;
    group.class_of(&form)
}

/// Ideal side: `a_χ` built multiplicatively from `a_χ(p^k)`, which is
/// `Σ_{j=0}^{k} χ(𝔭)^j χ(𝔭̄)^{k-j}` for split `p`, `[k even]` for inert `p`
/// and `χ(𝔭)^k` for ramified `p`.
pub fn theta_from_prime_ideals(group: &ClassGroup, chi: usize, limit: usize) -> Result<ThetaCoefficients> {
    let d = group.discriminant();
    require_fundamental(d)?;
    check_character(group, chi)?;
    let sieve = Sieve::new(limit.max(2));
    let zero = Complex64::new(0.0, 0.0);
    let mut values = vec![zero; limit + 1];
    if limit >= 1 {
        values[1] = Complex64::new(1.0, 0.0);
    }
    for n in 2..=limit {
        let (p, e, rest) = sieve.split_smallest(n);
        if rest > 1 {
            values[n] = values[n / rest] * values[rest];
        } else if e == 1 {
            // Fill every p^k at once; later prime powers are then already set.
            let mut q = 1usize;
            for a in prime_power_values(group, chi, p as u64, d, limit)? {
                values[q] = if q == 1 { values[1] } else { a };
                q = q.saturating_mul(p);
                if q > limit {
                    break;
                }
            }
        }
    }
    Ok(ThetaCoefficients { chi, values })
}

/// `a_χ(p^k)` for all `p^k <= limit`.
fn prime_power_values(group: &ClassGroup, chi: usize, p: u64, d: i64, limit: usize) -> Result<Vec<Complex64>> {
    let mut max_k = 0usize;
    let mut q = 1usize;
    while q <= limit / p as usize {
        q *= p as usize;
        max_k += 1;
    }
    let one = Complex64::new(1.0, 0.0);
    let values = match kronecker(d, p) {
        -1 => (0..=max_k)
            .map(|k| if k % 2 == 0 { one } else { Complex64::new(0.0, 0.0) })
            .collect(),
        0 => {
            let x = group.character_value(chi, prime_ideal_class(group, p)?);
            (0..=max_k).map(|k| x.powu(k as u32)).collect()
        }
        _ => {
            let x = group.character_value(chi, prime_ideal_class(group, p)?);
            let y = x.conj();
            (0..=max_k)
                .map(|k| (0..=k).map(|j| x.powu(j as u32) * y.powu((k - j) as u32)).sum())
                .collect()
        }
    };
    Ok(values)
}

/// Largest `|r(n, Q) - (w/h) Σ_χ χ̄(Q) a_χ(n)|` over `1 <= n <= limit`, with
/// `r(n, Q)` from lattice enumeration and `a_χ` from prime ideals.
pub fn verify_character_decomposition(group: &ClassGroup, form: &QuadForm, limit: usize) -> Result<f64> {
    require_fundamental(group.discriminant())?;
    let class = group.class_of(form)?;
    let h = group.h();
    let thetas = (0..h)
        .into_par_iter()
        .map(|chi| theta_from_prime_ideals(group, chi, limit))
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<Complex64> = (0..h).map(|chi| group.character_value(chi, class).conj()).collect();
    let scale = group.w() as f64 / h as f64;
    let residual = (1..=limit)
        .into_par_iter()
        .map(|n| {
            let predicted: Complex64 =
                thetas.iter().zip(&weights).map(|(t, &x)| x * t.get(n)).sum::<Complex64>() * scale;
            let actual = count_representations(form, n as u64);
            (predicted - actual as f64).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(residual)
}
