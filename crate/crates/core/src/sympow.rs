//! Symmetric-power Hecke eigenvalues and local Euler factors.
//!
//! At a prime `p` with `λ_f(p) = 2 cos θ`, the Satake multiset of `Sym^d f` is
//! `{ e^{i(d-2t)θ} : 0 <= t <= d }`. Everything here stays in real arithmetic:
//! conjugate roots pair into quadratics `1 - 2cos(mθ) T + T^2`, and `cos(mθ)`
//! comes from the Chebyshev recurrence in `λ_f(p) / 2`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::arith::Sieve;
use crate::combinat::{kostka_f64, KostkaTable};
use crate::eigenform::{satake_angle, satake_from_lambda, CoefficientSeries};
use crate::error::{Error, Result};

/// Residual bound for [`verify_tensor_identity`] when `d * l <= 24`.
pub const TENSOR_IDENTITY_TOLERANCE: f64 = 1e-9;

/// `U_d(x)`, Chebyshev polynomial of the second kind.
pub fn chebyshev_u(d: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// `T_m(x)` for `m = 0..=d`, Chebyshev polynomials of the first kind.
fn chebyshev_t_table(d: u32, x: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(d as usize + 1);
    t.push(1.0);
    if d >= 1 {
        t.push(x);
    }
    for m in 2..=d as usize {
        let next = 2.0 * x * t[m - 1] - t[m - 2];
        t.push(next);
    }
    t
}

/// `P_p(T) = ∏_t (1 - α^{d-t} β^t T)` as real coefficients of degree `d + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFactor {
    pub p: usize,
    pub d: u32,
    coeffs: Vec<f64>,
}

impl LocalFactor {
    /// Builds the factor from `λ_f(p)`; fails when `|λ_f(p)| > 2`.
    pub fn from_lambda(p: usize, lambda: f64, d: u32) -> Result<Self> {
        satake_from_lambda(p, lambda)?;
        let t = chebyshev_t_table(d, lambda / 2.0);
        let mut coeffs = vec![1.0];
        let mut m = d as i64;
        while m > 0 {
            let two_cos = 2.0 * t[m as usize];
            coeffs = poly_mul(&coeffs, &[1.0, -two_cos, 1.0]);
            m -= 2;
        }
        if d.is_multiple_of(2) {
            coeffs = poly_mul(&coeffs, &[1.0, -1.0]);
        }
        Ok(LocalFactor { p, d, coeffs })
    }

    /// Coefficients `c_0 = 1, c_1, …, c_{d+1}` of `P_p(T)`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `0..=order` of `1 / P_p(T)`, i.e. `λ_{Sym^d f}(p^r)`.
    pub fn inverse_series(&self, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        out[0] = 1.0;
        for r in 1..=order {
            let mut acc = 0.0;
            for k in 1..=r.min(self.degree()) {
                acc -= self.coeffs[k] * out[r - k];
            }
            out[r] = acc;
        }
        out
    }

    /// Roots of `P_p(T)` by Durand–Kerner iteration.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        let lead = self.coeffs[n];
        // Monic polynomial, highest degree first.
        let monic: Vec<f64> = self.coeffs.iter().rev().map(|c| c / lead).collect();
        let eval = |z: Complex64| monic.iter().fold(Complex64::zero(), |acc, &c| acc * z + c);
        let seed = Complex64::new(0.4, 0.9);
        let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
        for _ in 0..2000 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = Complex64::one();
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                if denom.norm() == 0.0 {
                    denom = Complex64::new(1e-12, 0.0);
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-15 {
                break;
            }
        }
        roots
    }

    /// `max | |ρ| - 1 |` over the roots `ρ` of `P_p(T)`.
    pub fn unit_circle_deviation(&self) -> f64 {
        self.roots()
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_mul_truncated(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let mut out = vec![0.0; order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow_truncated(base: &[f64], mut exp: u64, order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; order + 1];
    acc[0] = 1.0;
    let mut b: Vec<f64> = base.iter().copied().take(order + 1).collect();
    b.resize(order + 1, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mul_truncated(&acc, &b, order);
        }
        exp >>= 1;
        if exp > 0 {
            b = poly_mul_truncated(&b, &b, order);
        }
    }
    acc
}

/// `λ_{Sym^d}(p^r)` at Satake angle `θ`, summed directly over monomials in
/// the complex Satake parameters (the complete homogeneous symmetric
/// polynomial of degree `r`). Exponential in `r`; an oracle for the
/// recurrence, not a production path.
pub fn sym_eigenvalue_complex(theta: f64, d: u32, r: u32) -> f64 {
    let roots: Vec<Complex64> = (0..=d)
        .map(|t| Complex64::from_polar(1.0, (d as f64 - 2.0 * t as f64) * theta))
        .collect();
    fn rec(roots: &[Complex64], start: usize, left: u32, acc: Complex64) -> Complex64 {
        if left == 0 {
            return acc;
        }
        (start..roots.len())
            .map(|i| rec(roots, i, left - 1, acc * roots[i]))
            .sum()
    }
    rec(&roots, 0, r, Complex64::one()).re
}

/// Local factor of `Sym^d f` at `p`.
pub fn sym_local_factor(series: &CoefficientSeries, p: usize, d: u32) -> Result<LocalFactor> {
    satake_angle(series, p)?;
    LocalFactor::from_lambda(p, series.lambda(p), d)
}

/// `λ_{Sym^d f}(p^r)`.
pub fn sym_eigenvalue(series: &CoefficientSeries, p: usize, r: u32, d: u32) -> Result<f64> {
    let factor = sym_local_factor(series, p, d)?;
    Ok(factor.inverse_series(r as usize)[r as usize])
}

/// `λ_{Sym^d f}(n)` for `1 <= n <= N`; index 0 unused.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPowerSeries {
    pub d: u32,
    pub base_label: String,
    pub base_weight: u32,
    values: Vec<f64>,
}

impl SymPowerSeries {
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Symmetric-power coefficients by multiplicativity over a smallest-prime-factor sieve.
pub fn sym_series(series: &CoefficientSeries, d: u32, n: usize) -> Result<SymPowerSeries> {
    if n > series.len() {
        return Err(Error::OutOfRange(format!(
            "requested N = {n} but the base series has only {} coefficients",
            series.len()
        )));
    }
    let sieve = Sieve::new(n.max(2));
    let mut values = vec![0.0; n + 1];
    if n >= 1 {
        values[1] = 1.0;
    }
    for p in sieve.primes().take_while(|&p| p <= n) {
        let mut max_r = 0usize;
        let mut pk = 1usize;
        while pk <= n / p {
            pk *= p;
            max_r += 1;
        }
        let factor = LocalFactor::from_lambda(p, series.lambda(p), d)?;
        let powers = factor.inverse_series(max_r);
        let mut pk = 1usize;
        for value in powers.iter().skip(1) {
            pk *= p;
            values[pk] = *value;
        }
    }
    for m in 2..=n {
        let (_, _, rest) = sieve.split_smallest(m);
        if rest > 1 {
            values[m] = values[m / rest] * values[rest];
        }
    }
    Ok(SymPowerSeries {
        d,
        base_label: series.label().to_string(),
        base_weight: series.weight(),
        values,
    })
}

/// Splits a finite `f64` as `numerator / 2^shift` with `shift >= 0`.
fn dyadic(x: f64) -> (BigInt, u32) {
    let (mantissa, exponent, sign) = x.integer_decode();
    let mut num = BigInt::from(mantissa) * sign;
    if exponent >= 0 {
        num <<= exponent as usize;
        (num, 0)
    } else {
        (num, (-exponent) as u32)
    }
}

/// `|λ_{Sym^d f}(p)^l - Σ_i K(i,d,l) λ_{Sym^i f}(p)|`.
///
/// Both sides are polynomials in `λ_f(p)`; they are evaluated exactly at the
/// stored binary value of `λ_f(p)` (scaled to integers), so the residual
/// reflects the identity itself rather than floating-point cancellation in
/// terms as large as `(d+1)^l`.
pub fn verify_tensor_identity(series: &CoefficientSeries, d: u32, l: u32, p: usize) -> Result<f64> {
    satake_angle(series, p)?;
    tensor_identity_residual(series.lambda(p), d, l)
}

/// [`verify_tensor_identity`] for a bare eigenvalue `λ_f(p)`.
pub fn tensor_identity_residual(lambda: f64, d: u32, l: u32) -> Result<f64> {
    satake_from_lambda(0, lambda)?;
    let row = KostkaTable::global().row(d, l);
    Ok(exact_residual(lambda, d, l, &row))
}

fn exact_residual(lambda: f64, d: u32, l: u32, row: &[num_bigint::BigUint]) -> f64 {
    let dl = d * l;
    let (x, shift) = dyadic(lambda);
    let scale_sq = BigInt::one() << (2 * shift as usize);
    // v[i] = U_i(λ/2) * 2^{shift * i}
    let mut v: Vec<BigInt> = Vec::with_capacity(dl as usize + 1);
    v.push(BigInt::one());
    v.push(x.clone());
    for i in 2..=dl.max(1) as usize {
        let next = &x * &v[i - 1] - &scale_sq * &v[i - 2];
        v.push(next);
    }
    let lhs = num_traits::pow(v[d as usize].clone(), l as usize);
    let mut rhs = BigInt::zero();
    for (i, k) in row.iter().enumerate() {
        if k.is_zero() {
            continue;
        }
        let shifted = &v[i] << (shift as usize * (dl as usize - i));
        rhs += BigInt::from(k.clone()) * shifted;
    }
    let diff = lhs - rhs;
    if diff.is_zero() {
        return 0.0;
    }
    let denom = BigInt::one() << (shift as usize * dl as usize);
    let r = BigRational::new(diff, denom);
    r.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
}

/// Same residual evaluated in plain double precision. Diagnostic only.
pub fn tensor_identity_residual_f64(lambda: f64, d: u32, l: u32) -> f64 {
    let x = lambda / 2.0;
    let lhs = chebyshev_u(d, x).powi(l as i32);
    let mut acc = crate::arith::CompensatedSum::new();
    for i in 0..=d * l {
        let k = kostka_f64(i as i64, d, l);
        if k != 0.0 {
            acc.add(k * chebyshev_u(i, x));
        }
    }
    (lhs - acc.value()).abs()
}

/// Coefficients `c_0..=c_order` of
/// `(Σ_j λ_{Sym^d f}(p^j)^l T^j) · ∏_i P_{p,i}(T)^{K(i,d,l)}`,
/// the local factor at `p` of `D / L` for `(Sym^d f)^{⊗l}`.
pub fn verify_local_u_factor(
    series: &CoefficientSeries,
    d: u32,
    l: u32,
    p: usize,
    order: usize,
) -> Result<Vec<f64>> {
    if order > 6 {
        return Err(Error::OutOfRange(format!("order {order} exceeds 6")));
    }
    satake_angle(series, p)?;
    local_u_factor_from_lambda(series.lambda(p), d, l, p, order)
}

pub fn local_u_factor_from_lambda(
    lambda: f64,
    d: u32,
    l: u32,
    p: usize,
    order: usize,
) -> Result<Vec<f64>> {
    let own = LocalFactor::from_lambda(p, lambda, d)?;
    let mut acc: Vec<f64> = own
        .inverse_series(order)
        .iter()
        .map(|v| v.powi(l as i32))
        .collect();
    let row = KostkaTable::global().row(d, l);
    for (i, k) in row.iter().enumerate() {
        let k = k.to_u64().expect("multiplicity fits in u64");
        if k == 0 {
            continue;
        }
        let factor = LocalFactor::from_lambda(p, lambda, i as u32)?;
        let powered = poly_pow_truncated(factor.coefficients(), k, order);
        acc = poly_mul_truncated(&acc, &powered, order);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenform::delta_coefficients;
    use std::f64::consts::PI;

    #[test]
    fn local_factor_examples() {
        let f = LocalFactor::from_lambda(7, 0.3, 1).unwrap();
        assert_eq!(f.coefficients(), &[1.0, -0.3, 1.0]);
        let f0 = LocalFactor::from_lambda(7, 0.3, 0).unwrap();
        assert_eq!(f0.coefficients(), &[1.0, -1.0]);
        let f2 = LocalFactor::from_lambda(7, 0.0, 2).unwrap();
        for (a, b) in f2.coefficients().iter().zip([1.0, 1.0, -1.0, -1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(LocalFactor::from_lambda(7, 2.1, 3).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let s = delta_coefficients(200).unwrap();
        for &p in &[2usize, 3, 5, 97] {
            let x = s.lambda(p);
            let e = sym_eigenvalue(&s, p, 2, 1).unwrap();
            assert!((e - (x * x - 1.0)).abs() < 1e-12);
            assert_eq!(sym_eigenvalue(&s, p, 0, 5).unwrap(), 1.0);
            let e2 = sym_eigenvalue(&s, p, 1, 2).unwrap();
            assert!((e2 - (x * x - 1.0)).abs() < 1e-12);
            let theta = (x / 2.0).acos();
            assert!((e2 - sym_eigenvalue_complex(theta, 2, 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn chebyshev_consistency() {
        let s = delta_coefficients(1000).unwrap();
        for &p in &[2usize, 13, 101, 499, 997] {
            for d in 0..=12 {
                let direct = chebyshev_u(d, s.lambda(p) / 2.0);
                let via = sym_eigenvalue(&s, p, 1, d).unwrap();
                assert!((direct - via).abs() < 1e-10, "p={p} d={d}");
            }
        }
    }

    #[test]
    fn complex_oracle_agreement() {
        for k in 1..20 {
            let theta = PI * k as f64 / 20.3;
            let lam = 2.0 * theta.cos();
            for d in 0..=6 {
                let f = LocalFactor::from_lambda(2, lam, d).unwrap();
                let series = f.inverse_series(6);
                for r in 0..=6 {
                    let oracle = sym_eigenvalue_complex(theta, d, r);
                    assert!((series[r as usize] - oracle).abs() < 1e-9, "d={d} r={r}");
                }
            }
        }
    }

    #[test]
    fn degenerate_angles_use_limits() {
        for d in 0..8 {
            assert!((chebyshev_u(d, 1.0) - (d as f64 + 1.0)).abs() < 1e-12);
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            assert!((chebyshev_u(d, -1.0) - sign * (d as f64 + 1.0)).abs() < 1e-12);
            let f = LocalFactor::from_lambda(2, 2.0, d).unwrap();
            assert!((f.inverse_series(1)[1] - (d as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn roots_on_unit_circle() {
        let s = delta_coefficients(300).unwrap();
        for &p in &[2usize, 3, 29, 293] {
            for d in 0..=8 {
                let f = sym_local_factor(&s, p, d).unwrap();
                assert!(f.unit_circle_deviation() < 1e-6, "p={p} d={d}");
            }
        }
        let f = LocalFactor::from_lambda(2, 0.0, 2).unwrap();
        assert!(f.unit_circle_deviation() < 1e-6);
    }

    #[test]
    fn series_examples() {
        let s = delta_coefficients(500).unwrap();
        let s0 = sym_series(&s, 0, 500).unwrap();
        assert!(s0.values()[1..].iter().all(|&v| v == 1.0));
        let s1 = sym_series(&s, 1, 500).unwrap();
        for n in 1..=500 {
            assert!((s1.value(n) - s.lambda(n)).abs() < 1e-9 * s.lambda(n).abs().max(1.0));
        }
        let s2 = sym_series(&s, 2, 500).unwrap();
        let u2 = |p: usize| s.lambda(p).powi(2) - 1.0;
        assert!((s2.value(2) - u2(2)).abs() < 1e-12);
        assert!((s2.value(6) - u2(2) * u2(3)).abs() < 1e-12);
        assert!(sym_series(&s, 2, 501).is_err());
    }

    #[test]
    fn tensor_identity_examples() {
        let s = delta_coefficients(100).unwrap();
        for &p in &[2usize, 3, 5, 7, 97] {
            let x = s.lambda(p);
            // λ_f(p)^2 = λ_{Sym^2 f}(p) + 1
            assert!(((x * x) - (chebyshev_u(2, x / 2.0) + 1.0)).abs() < 1e-12);
            assert_eq!(verify_tensor_identity(&s, 1, 2, p).unwrap(), 0.0);
            for d in 1..6 {
                assert_eq!(verify_tensor_identity(&s, d, 1, p).unwrap(), 0.0);
            }
        }
        assert!(verify_tensor_identity(&s, 2, 3, 2).unwrap() < 1e-9);
        assert!(tensor_identity_residual_f64(s.lambda(2), 2, 3) < 1e-9);
    }

    #[test]
    fn exact_residual_sees_wrong_multiplicities() {
        use num_bigint::BigUint;
        let x = 0.75f64;
        let good: Vec<BigUint> = [1u32, 0, 1, 0, 1].iter().map(|&k| BigUint::from(k)).collect();
        assert_eq!(exact_residual(x, 2, 2, &good), 0.0);
        let mut bad = good.clone();
        bad[2] = BigUint::from(2u32);
        // Off by one copy of Sym^2: residual is |U_2(x/2)| = |x^2 - 1|.
        assert!((exact_residual(x, 2, 2, &bad) - (1.0 - x * x)).abs() < 1e-15);
    }

    #[test]
    fn u_factor_examples() {
        let s = delta_coefficients(100).unwrap();
        let c = verify_local_u_factor(&s, 1, 1, 3, 6).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12);
        for v in &c[1..] {
            assert!(v.abs() < 1e-12);
        }
        let c = verify_local_u_factor(&s, 1, 2, 7, 4).unwrap();
        assert!(c[1].abs() < 1e-12);
        let c = verify_local_u_factor(&s, 2, 2, 5, 4).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-12);
        assert!(c[1].abs() < 1e-12);
        assert!(c[2].is_finite() && c[2].abs() <= 3f64.powi(4));
        assert!(verify_local_u_factor(&s, 2, 2, 5, 7).is_err());
    }
}
