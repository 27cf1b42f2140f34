//! Exact error-term exponents, main-term degrees, partial moment sums and
//! main-term fits.
//!
//! For `l >= 2`, `d >= 1`, `dl > 4` the moment `Σ_{n<=x} λ_{Sym^d f}(n)^l`
//! is `x P(log x) + O(x^{θ+ε})` with `deg P = K(0,d,l) - 1` (and `P = 0` when
//! `K(0,d,l) = 0`), where
//!
//! ```text
//! θ        = 1 - 1 / ((d+1)^l / 2 - 4 K0/21 - K1/3 - 5 K2/14)
//! θ_Q(h>1) = 1 - 3 / (3 (d+1)^l - K0)
//! θ_Q(h=1) = 1 - 1 / ((d+1)^l - 8 K0/21 - 2 K1/3 - 5 K2/7)
//! ```
//!
//! The θ values are exact rationals; decimals are renderings only.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::deterministic_sum;
use crate::combinat::KostkaTable;
use crate::error::{Error, Result};
use crate::quadform::{representation_counts, QuadForm};
use crate::sympow::SymPowerSeries;

/// Places used when no precision is requested.
pub const DEFAULT_PLACES: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaVariant {
    Plain,
    /// Binary-form sums, class number one.
    BqfH1,
    /// Binary-form sums, class number greater than one.
    BqfHgt1,
}

impl ThetaVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            ThetaVariant::Plain => "plain",
            ThetaVariant::BqfH1 => "bqf_h1",
            ThetaVariant::BqfHgt1 => "bqf_hgt1",
        }
    }
}

impl fmt::Display for ThetaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaReport {
    pub d: u32,
    pub l: u32,
    pub variant: ThetaVariant,
    pub theta_exact: BigRational,
    /// Rendering of `theta_exact` to [`DEFAULT_PLACES`].
    pub theta_decimal: String,
    /// `(K(0,d,l), K(1,d,l), K(2,d,l))`.
    pub k: [BigUint; 3],
    /// `(d+1)^l`.
    pub dimension: BigUint,
    /// Set when computed outside the theorem's hypotheses.
    pub unchecked: bool,
}

impl ThetaReport {
    pub fn decimal(&self, places: usize) -> String {
        render_decimal(&self.theta_exact, places)
    }

    pub fn to_f64(&self) -> f64 {
        self.theta_exact.to_f64().unwrap_or(f64::NAN)
    }

    /// `p/q` in lowest terms.
    pub fn exact_string(&self) -> String {
        format!("{}/{}", self.theta_exact.numer(), self.theta_exact.denom())
    }
}

/// `l >= 2`, `d >= 1`, `dl > 4`.
pub fn hypothesis_holds(d: u32, l: u32) -> bool {
    l >= 2 && d >= 1 && d as u64 * l as u64 > 4
}

fn check_hypothesis(d: u32, l: u32) -> Result<()> {
    if hypothesis_holds(d, l) {
        Ok(())
    } else {
        Err(Error::HypothesisViolated { d, l })
    }
}

pub fn theta(d: u32, l: u32) -> Result<ThetaReport> {
    check_hypothesis(d, l)?;
    build_report(d, l, ThetaVariant::Plain, false)
}

pub fn theta_bqf(d: u32, l: u32, class_number_one: bool) -> Result<ThetaReport> {
    check_hypothesis(d, l)?;
    build_report(d, l, bqf_variant(class_number_one), false)
}

/// Evaluates the formula for any `d, l`; the result carries `unchecked`
/// when the hypotheses fail and makes no claim there.
pub fn theta_unchecked(d: u32, l: u32, variant: ThetaVariant) -> Result<ThetaReport> {
    build_report(d, l, variant, !hypothesis_holds(d, l))
}

fn bqf_variant(class_number_one: bool) -> ThetaVariant {
    if class_number_one {
        ThetaVariant::BqfH1
    } else {
        ThetaVariant::BqfHgt1
    }
}

fn build_report(d: u32, l: u32, variant: ThetaVariant, unchecked: bool) -> Result<ThetaReport> {
    let table = KostkaTable::global();
    let k = [table.get(0, d, l), table.get(1, d, l), table.get(2, d, l)];
    let dimension = BigUint::from(d + 1).pow(l);
    let int = |x: &BigUint| BigRational::from_integer(BigInt::from(x.clone()));
    let frac = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
    let (numerator, denominator) = match variant {
        ThetaVariant::Plain => (
            BigRational::one(),
            int(&dimension) * frac(1, 2)
                - int(&k[0]) * frac(4, 21)
                - int(&k[1]) * frac(1, 3)
                - int(&k[2]) * frac(5, 14),
        ),
        ThetaVariant::BqfHgt1 => (frac(3, 1), int(&dimension) * frac(3, 1) - int(&k[0])),
        ThetaVariant::BqfH1 => (
            BigRational::one(),
            int(&dimension)
                - int(&k[0]) * frac(8, 21)
                - int(&k[1]) * frac(2, 3)
                - int(&k[2]) * frac(5, 7),
        ),
    };
    if denominator.is_zero() {
        return Err(Error::OutOfRange(format!(
            "θ denominator vanishes at (d, l) = ({d}, {l})"
        )));
    }
    let theta_exact = BigRational::one() - numerator / denominator;
    Ok(ThetaReport {
        d,
        l,
        variant,
        theta_decimal: render_decimal(&theta_exact, DEFAULT_PLACES),
        theta_exact,
        k,
        dimension,
        unchecked,
    })
}

/// Correctly rounded decimal with `places` digits after the point (ties away
/// from zero).
pub fn render_decimal(x: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let (num, den) = (x.numer().abs() * &scale, x.denom().clone());
    let (q, r) = num.div_rem(&den);
    let rounded = if r * 2u32 >= den { q + 1u32 } else { q };
    let digits = rounded.to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let sign = if x.is_negative() && rounded_nonzero(&digits) { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn rounded_nonzero(digits: &str) -> bool {
    digits.bytes().any(|b| b != b'0')
}

/// `deg P = K(0,d,l) - 1`, or `None` when the main term vanishes.
pub fn main_term_degree(d: u32, l: u32) -> Option<BigUint> {
    let k0 = KostkaTable::global().get(0, d, l);
    if k0.is_zero() {
        None
    } else {
        Some(k0 - 1u32)
    }
}

fn check_cutoff(x: usize, available: usize) -> Result<()> {
    if x > available {
        return Err(Error::OutOfRange(format!(
            "cutoff x = {x} exceeds the series length N = {available}"
        )));
    }
    Ok(())
}

/// `Σ_{n<=x} λ(n)^l`, compensated and reproducible for any thread count.
pub fn moment_sum(series: &SymPowerSeries, l: u32, x: usize) -> Result<f64> {
    check_cutoff(x, series.len())?;
    let v = series.values();
    Ok(deterministic_sum(1, x, |n| v[n].powi(l as i32)))
}

/// `Σ_{1<=n<=x} λ(n)^l r(n, Q)`; the origin `Q(0,0) = 0` is excluded since
/// `λ(0)` is undefined.
pub fn bqf_moment_sum(series: &SymPowerSeries, l: u32, form: &QuadForm, x: usize) -> Result<f64> {
    check_cutoff(x, series.len())?;
    let counts = representation_counts(form, x);
    let v = series.values();
    Ok(deterministic_sum(1, x, |n| {
        if counts[n] == 0 {
            0.0
        } else {
            v[n].powi(l as i32) * counts[n] as f64
        }
    }))
}

/// `count` cutoffs spaced evenly in `log x` from `lo` to `hi` inclusive,
/// rounded to integers and deduplicated.
pub fn log_spaced_cutoffs(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || lo >= hi {
        return vec![hi];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut xs: Vec<usize> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize)
        .collect();
    xs[0] = lo;
    xs[count - 1] = hi;
    xs.dedup();
    xs
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentFit {
    pub d: u32,
    pub l: u32,
    pub x_samples: Vec<f64>,
    pub sums: Vec<f64>,
    /// Coefficients of `P` in powers of `log x`, constant first; empty when
    /// the main term vanishes.
    pub fitted_coeffs: Vec<f64>,
    /// `S(x) - x P(log x)` at each sample.
    pub residuals: Vec<f64>,
    /// Slope of `log |residual|` against `log x` over `window`; `-∞` when no
    /// residual in the window rises above rounding noise.
    pub residual_exponent: f64,
    pub window: (f64, f64),
}

impl MomentFit {
    /// `P(log x)`.
    pub fn main_term(&self, x: f64) -> f64 {
        polynomial(&self.fitted_coeffs, x.ln())
    }
}

fn polynomial(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// Weighted least-squares fit of `S(x)/x` (weights `x`) by a polynomial of
/// degree `K(0,d,l) - 1` in `log x`, followed by a log-log slope of the residuals over the largest
/// decade of samples.
pub fn fit_main_term(d: u32, l: u32, x_samples: &[f64], sums: &[f64]) -> Result<MomentFit> {
    if x_samples.len() != sums.len() {
        return Err(Error::OutOfRange(format!(
            "{} cutoffs but {} sums",
            x_samples.len(),
            sums.len()
        )));
    }
    let k0 = KostkaTable::global().get(0, d, l);
    let terms = k0.to_usize().unwrap_or(usize::MAX);
    let needed = terms.saturating_add(1).max(2);
    if x_samples.len() < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: x_samples.len(),
        });
    }
    let fitted_coeffs = if terms == 0 {
        Vec::new()
    } else {
        least_squares(x_samples, sums, terms)?
    };
    let residuals: Vec<f64> = x_samples
        .iter()
        .zip(sums)
        .map(|(&x, &s)| s - x * polynomial(&fitted_coeffs, x.ln()))
        .collect();

    let x_max = x_samples.iter().cloned().fold(f64::MIN, f64::max);
    let window = ((x_max / 10.0).max(x_samples.iter().cloned().fold(f64::MAX, f64::min)), x_max);
    let points: Vec<(f64, f64)> = x_samples
        .iter()
        .zip(sums)
        .zip(&residuals)
        .filter(|((&x, _), _)| x >= window.0)
        .filter(|((&x, &s), &r)| r.abs() > noise_floor(x, s, &fitted_coeffs))
        .map(|((&x, _), &r)| (x.ln(), r.abs().ln()))
        .collect();
    let residual_exponent = if points.len() < 2 {
        f64::NEG_INFINITY
    } else {
        slope(&points)
    };
    Ok(MomentFit {
        d,
        l,
        x_samples: x_samples.to_vec(),
        sums: sums.to_vec(),
        fitted_coeffs,
        residuals,
        residual_exponent,
        window,
    })
}

/// Residuals at or below this size are indistinguishable from rounding in
/// `S(x)` and `x P(log x)`.
fn noise_floor(x: f64, s: f64, coeffs: &[f64]) -> f64 {
    let t = x.ln().abs();
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c.abs() * t.powi(j as i32))
        .sum::<f64>()
        * x;
    1e-12 * (s.abs() + scale).max(1.0)
}

fn least_squares(xs: &[f64], sums: &[f64], terms: usize) -> Result<Vec<f64>> {
    let rows = xs.len();
    // S(x)/x has error of size x^{θ-1}; weighting row i by sqrt(x_i) stops
    // the noisier small cutoffs from biasing the large-x behaviour.
    let weight = |i: usize| xs[i].sqrt();
    let design = DMatrix::from_fn(rows, terms, |i, j| weight(i) * xs[i].ln().powi(j as i32));
    let target = DVector::from_fn(rows, |i, _| weight(i) * sums[i] / xs[i]);
    let svd = design.svd(true, true);
    let solution = svd.solve(&target, 1e-14).map_err(|e| Error::InvariantViolation {
        check: "fit",
        detail: e.to_string(),
    })?;
    Ok(solution.iter().copied().collect())
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mx, my) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx) * (x - mx))
    });
    sxy / sxx
}
