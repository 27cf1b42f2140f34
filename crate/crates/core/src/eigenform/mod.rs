//! Normalised Hecke eigenvalues of level-one cusp forms.
//!
//! The default form is the weight-12 discriminant form `Δ = q ∏ (1 - q^n)^24`,
//! computed exactly. Other level-one eigenforms enter through coefficient
//! files (see [`load_coefficients`]).

mod csvio;
mod ntt;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{sigma_mod, Sieve};
use crate::error::{Error, Result};

pub use csvio::{cache_file_name, load_coefficients, write_coefficients};

/// Largest `N` for which [`delta_coefficients`] computes exact coefficients by default.
pub const DEFAULT_EXACT_BOUND: usize = 1_000_000;

/// Absolute tolerance for float-path relation checks.
pub const RELATION_TOLERANCE: f64 = 1e-9;

/// Distance from `|λ(p)| = 2` below which a Satake angle is flagged degenerate.
pub const DEGENERATE_TOLERANCE: f64 = 1e-12;

/// Normalised coefficients `λ(n) = a(n) / n^{(k-1)/2}` for `1 <= n <= N`, with
/// the exact integers `a(n)` when they are known.
///
/// Both arrays are indexed by `n`; slot 0 is unused.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    weight: u32,
    label: String,
    raw: Option<Vec<i128>>,
    normalized: Vec<f64>,
}

impl CoefficientSeries {
    /// Builds a series from exact coefficients `a(1..=N)` (`raw[0]` is ignored).
    pub fn from_raw(weight: u32, label: impl Into<String>, raw: Vec<i128>) -> Self {
        let normalized = raw
            .iter()
            .enumerate()
            .map(|(n, &a)| if n == 0 { 0.0 } else { a as f64 / normalizer(n, weight) })
            .collect();
        CoefficientSeries {
            weight,
            label: label.into(),
            raw: Some(raw),
            normalized,
        }
    }

    /// Builds a float-only series (`normalized[0]` is ignored).
    pub fn from_normalized(weight: u32, label: impl Into<String>, normalized: Vec<f64>) -> Self {
        CoefficientSeries {
            weight,
            label: label.into(),
            raw: None,
            normalized,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of coefficients `N`.
    pub fn len(&self) -> usize {
        self.normalized.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has_raw(&self) -> bool {
        self.raw.is_some()
    }

    /// `λ(n)`; panics when `n` is 0 or beyond `N`.
    pub fn lambda(&self, n: usize) -> f64 {
        assert!(n >= 1 && n <= self.len(), "λ({n}) outside 1..={}", self.len());
        self.normalized[n]
    }

    /// Exact `a(n)` when available.
    pub fn raw(&self, n: usize) -> Option<i128> {
        self.raw.as_ref().map(|r| r[n])
    }

    pub fn normalized(&self) -> &[f64] {
        &self.normalized
    }

    pub fn raw_values(&self) -> Option<&[i128]> {
        self.raw.as_deref()
    }

    /// Copy restricted to the first `n` coefficients.
    pub fn truncated(&self, n: usize) -> CoefficientSeries {
        let n = n.min(self.len());
        CoefficientSeries {
            weight: self.weight,
            label: self.label.clone(),
            raw: self.raw.as_ref().map(|r| r[..=n].to_vec()),
            normalized: self.normalized[..=n].to_vec(),
        }
    }

    /// Checks `λ(1) = 1`, multiplicativity, the prime-power Hecke recursion and
    /// the Deligne bound. Exact on the integer path, tolerance
    /// [`RELATION_TOLERANCE`] otherwise.
    pub fn validate(&self) -> Result<()> {
        let n_max = self.len();
        if n_max == 0 {
            return Err(Error::FormatError("empty coefficient series".into()));
        }
        let sieve = Sieve::new(n_max.max(2));
        match &self.raw {
            Some(raw) => self.validate_exact(raw, &sieve),
            None => self.validate_float(&sieve),
        }
    }

    fn validate_exact(&self, raw: &[i128], sieve: &Sieve) -> Result<()> {
        if raw[1] != 1 {
            return Err(violation("normalization", format!("a(1) = {}", raw[1])));
        }
        let n_max = self.len();
        for n in 2..=n_max {
            let (p, e, m) = sieve.split_smallest(n);
            if m > 1 {
                let pe = n / m;
                let product = raw[pe].checked_mul(raw[m]);
                if product != Some(raw[n]) {
                    return Err(violation(
                        "multiplicativity",
                        format!("a({n}) != a({pe}) a({m})"),
                    ));
                }
            } else if e >= 2 {
                // n = p^e: a(p^e) = a(p) a(p^{e-1}) - p^{k-1} a(p^{e-2})
                let lhs = BigInt::from(raw[n]);
                let rhs = BigInt::from(raw[p]) * raw[n / p]
                    - BigInt::from(p).pow(self.weight - 1) * raw[n / (p * p)];
                if lhs != rhs {
                    return Err(violation("hecke", format!("recursion fails at {p}^{e}")));
                }
            } else {
                let lhs = BigInt::from(raw[p]).pow(2);
                let rhs = BigInt::from(p).pow(self.weight - 1) * 4;
                if lhs > rhs {
                    return Err(violation("deligne", format!("|λ({p})| > 2")));
                }
            }
        }
        for n in 1..=n_max {
            let expected = raw[n] as f64 / normalizer(n, self.weight);
            if (self.normalized[n] - expected).abs() > 1e-12 * expected.abs().max(1.0) {
                return Err(violation(
                    "normalization",
                    format!("λ({n}) disagrees with a({n})/n^((k-1)/2)"),
                ));
            }
        }
        Ok(())
    }

    fn validate_float(&self, sieve: &Sieve) -> Result<()> {
        let lam = &self.normalized;
        if (lam[1] - 1.0).abs() > RELATION_TOLERANCE {
            return Err(violation("normalization", format!("λ(1) = {}", lam[1])));
        }
        for n in 2..=self.len() {
            if !lam[n].is_finite() {
                return Err(violation("finite", format!("λ({n}) is not finite")));
            }
            let (p, e, m) = sieve.split_smallest(n);
            if m > 1 {
                let pe = n / m;
                if (lam[n] - lam[pe] * lam[m]).abs() > RELATION_TOLERANCE {
                    return Err(violation(
                        "multiplicativity",
                        format!("λ({n}) != λ({pe}) λ({m})"),
                    ));
                }
            } else if e >= 2 {
                let rhs = lam[p] * lam[n / p] - lam[n / (p * p)];
                if (lam[n] - rhs).abs() > RELATION_TOLERANCE {
                    return Err(violation("hecke", format!("recursion fails at {p}^{e}")));
                }
            } else if lam[p].abs() > 2.0 + RELATION_TOLERANCE {
                return Err(violation("deligne", format!("|λ({p})| = {} > 2", lam[p].abs())));
            }
        }
        Ok(())
    }
}

fn violation(check: &'static str, detail: String) -> Error {
    Error::InvariantViolation { check, detail }
}

/// `n^{(k-1)/2}` evaluated as `n^{(k-2)/2} * sqrt(n)` for even `k`.
fn normalizer(n: usize, weight: u32) -> f64 {
    let n = n as f64;
    if weight.is_multiple_of(2) && weight >= 2 {
        n.powi(((weight - 2) / 2) as i32) * n.sqrt()
    } else {
        n.powf((weight as f64 - 1.0) / 2.0)
    }
}

/// Exact coefficients of `Δ` up to `n`, bounded by [`DEFAULT_EXACT_BOUND`].
pub fn delta_coefficients(n: usize) -> Result<CoefficientSeries> {
    delta_coefficients_with_bound(n, DEFAULT_EXACT_BOUND)
}

/// Exact coefficients of `q ∏ (1 - q^m)^24` for `1 <= index <= n`.
///
/// `∏ (1 - q^m)^3 = Σ_k (-1)^k (2k+1) q^{k(k+1)/2}` is sparse; three exact
/// squarings lift it to the 24th power.
pub fn delta_coefficients_with_bound(n: usize, bound: usize) -> Result<CoefficientSeries> {
    if n > bound {
        return Err(Error::ExactRangeExceeded { requested: n, bound });
    }
    if n == 0 {
        return Err(Error::OutOfRange("N must be at least 1".into()));
    }
    let mut eta_cubed = vec![0i64; n];
    let mut k = 0usize;
    while k * (k + 1) / 2 < n {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        eta_cubed[k * (k + 1) / 2] = sign * (2 * k as i64 + 1);
        k += 1;
    }
    let product = ntt::repeated_square(&eta_cubed, n, 3);
    let mut raw = Vec::with_capacity(n + 1);
    raw.push(0);
    raw.extend_from_slice(&product);
    Ok(CoefficientSeries::from_raw(12, "delta", raw))
}

/// Checks `a(n) ≡ σ_11(n) (mod 691)` for `n <= limit` on a weight-12 integer series.
pub fn check_ramanujan_congruence(series: &CoefficientSeries, limit: usize) -> Result<()> {
    let raw = series
        .raw_values()
        .ok_or_else(|| violation("congruence", "series has no exact coefficients".into()))?;
    for n in 1..=limit.min(series.len()) {
        let lhs = raw[n].rem_euclid(691) as u64;
        if lhs != sigma_mod(n as u64, 11, 691) {
            return Err(violation("congruence", format!("a({n}) ≢ σ_11({n}) mod 691")));
        }
    }
    Ok(())
}

/// Checks `λ(mn) = λ(m) λ(n)` over every coprime pair with `mn <= limit`.
pub fn check_coprime_multiplicativity(series: &CoefficientSeries, limit: usize) -> Result<()> {
    let limit = limit.min(series.len());
    for m in 2..=limit {
        for n in (m + 1)..=(limit / m) {
            if crate::arith::gcd(m as i64, n as i64) != 1 {
                continue;
            }
            let ok = match (series.raw(m * n), series.raw(m), series.raw(n)) {
                (Some(a), Some(b), Some(c)) => b.checked_mul(c) == Some(a),
                _ => {
                    (series.lambda(m * n) - series.lambda(m) * series.lambda(n)).abs()
                        <= RELATION_TOLERANCE
                }
            };
            if !ok {
                return Err(violation(
                    "multiplicativity",
                    format!("λ({}) != λ({m}) λ({n})", m * n),
                ));
            }
        }
    }
    Ok(())
}

/// Rebuilds `λ(n)` for all `n <= N` from the stored prime-power values.
pub fn regenerate_from_prime_powers(series: &CoefficientSeries) -> Vec<f64> {
    let sieve = Sieve::new(series.len().max(2));
    let mut out = vec![0.0; series.len() + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = sieve
            .factorize(n)
            .iter()
            .map(|&(p, e)| series.lambda(p.pow(e)))
            .product();
    }
    out
}

/// Exact counterpart of [`regenerate_from_prime_powers`]; `None` without raw data.
pub fn regenerate_exact(series: &CoefficientSeries) -> Option<Vec<i128>> {
    let raw = series.raw_values()?;
    let sieve = Sieve::new(series.len().max(2));
    let mut out = vec![0i128; series.len() + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = sieve
            .factorize(n)
            .iter()
            .map(|&(p, e)| raw[p.pow(e)])
            .product();
    }
    Some(out)
}

/// Satake angle `θ ∈ [0, π]` with `2 cos θ = λ(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeAngle {
    pub p: usize,
    pub theta: f64,
    pub degenerate: bool,
}

pub fn satake_angle(series: &CoefficientSeries, p: usize) -> Result<SatakeAngle> {
    if p < 2 || p > series.len() || !crate::arith::is_prime(p as u64) {
        return Err(Error::OutOfRange(format!(
            "{p} is not a prime in 2..={}",
            series.len()
        )));
    }
    let lam = series.lambda(p);
    satake_from_lambda(p, lam)
}

/// Satake angle from a bare eigenvalue.
pub fn satake_from_lambda(p: usize, lam: f64) -> Result<SatakeAngle> {
    if !(lam.abs() <= 2.0 + RELATION_TOLERANCE) {
        return Err(Error::OutOfRange(format!("|λ({p})| = {} exceeds 2", lam.abs())));
    }
    let theta = (lam / 2.0).clamp(-1.0, 1.0).acos();
    Ok(SatakeAngle {
        p,
        theta,
        degenerate: (lam.abs() - 2.0).abs() <= DEGENERATE_TOLERANCE,
    })
}

impl SatakeAngle {
    /// `2 cos θ`.
    pub fn trace(&self) -> f64 {
        2.0 * self.theta.cos()
    }

    pub fn in_range(&self) -> bool {
        (0.0..=PI).contains(&self.theta)
    }
}

/// `|a|` as `f64` for diagnostics.
pub fn raw_magnitude(a: i128) -> f64 {
    BigInt::from(a).abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook expansion of `q ∏ (1 - q^m)^24`.
    fn naive_delta(n: usize) -> Vec<i128> {
        let mut c = vec![0i128; n];
        c[0] = 1;
        for m in 1..n {
            for _ in 0..24 {
                for k in (m..n).rev() {
                    c[k] -= c[k - m];
                }
            }
        }
        let mut out = vec![0];
        out.extend(c);
        out
    }

    #[test]
    fn first_coefficients() {
        let s = delta_coefficients(10).unwrap();
        assert_eq!(s.raw(1), Some(1));
        assert_eq!(s.raw(2), Some(-24));
        let a2 = s.raw(2).unwrap();
        assert_eq!(s.raw(4), Some(a2 * a2 - 2048));
        assert_eq!(s.raw(4), Some(-1472));
    }

    #[test]
    fn matches_schoolbook_expansion() {
        let s = delta_coefficients(400).unwrap();
        assert_eq!(s.raw_values().unwrap(), naive_delta(400).as_slice());
    }

    #[test]
    fn validates_and_satisfies_congruence() {
        let s = delta_coefficients(3000).unwrap();
        s.validate().unwrap();
        check_ramanujan_congruence(&s, 1000).unwrap();
        check_coprime_multiplicativity(&s, 3000).unwrap();
        assert_eq!(regenerate_exact(&s).unwrap(), s.raw_values().unwrap());
        let regen = regenerate_from_prime_powers(&s);
        for n in 1..=3000 {
            assert!((regen[n] - s.lambda(n)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_bound_is_enforced() {
        assert_eq!(
            delta_coefficients_with_bound(11, 10),
            Err(Error::ExactRangeExceeded { requested: 11, bound: 10 })
        );
    }

    #[test]
    fn float_path_detects_broken_multiplicativity() {
        let s = delta_coefficients(50).unwrap();
        let mut lam = s.normalized().to_vec();
        lam[6] += 1e-3;
        let broken = CoefficientSeries::from_normalized(12, "broken", lam);
        match broken.validate() {
            Err(Error::InvariantViolation { check, .. }) => assert_eq!(check, "multiplicativity"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn satake_angles() {
        let a = satake_from_lambda(3, 0.0).unwrap();
        assert!((a.theta - PI / 2.0).abs() < 1e-15);
        assert!(!a.degenerate);
        let b = satake_from_lambda(3, 2.0).unwrap();
        assert_eq!(b.theta, 0.0);
        assert!(b.degenerate);
        assert!(satake_from_lambda(3, 2.5).is_err());

        let s = delta_coefficients(10).unwrap();
        let lam2 = -24.0 / 2f64.powf(5.5);
        let c = satake_angle(&s, 2).unwrap();
        assert!((c.theta - (lam2 / 2.0).acos()).abs() < 1e-14);
        assert!((c.trace() - lam2).abs() < 1e-12);
        assert!(satake_angle(&s, 4).is_err());
        assert!(satake_angle(&s, 11).is_err());
    }
}
