//! Named invariant checks, grouped into suites, run by `symmoments verify`.
//!
//! Every check is addressable by its own name or by its suite; `all` runs
//! everything. A check passes by returning a short summary and fails with
//! the error describing the first violation it found.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;

use crate::arith::{binomial, first_primes, primes_up_to};
use crate::combinat::{
    kostka_closed_form, kostka_generating, kostka_recursive, kostka_tableau,
    tensor_power_multiplicities, weyl_dim, KostkaTable, MultiplicityVector, Partition,
};
use crate::eigenform::{
    check_ramanujan_congruence, delta_coefficients, regenerate_exact, regenerate_from_prime_powers,
    CoefficientSeries, RELATION_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::moments::{
    bqf_moment_sum, fit_main_term, log_spaced_cutoffs, main_term_degree, moment_sum, theta,
    theta_bqf,
};
use crate::quadform::{
    class_representation_counts, count_representations, ideal_count, reduce,
    verify_character_decomposition, ClassGroup, QuadForm,
};
use crate::sympow::{
    chebyshev_u, sym_eigenvalue, sym_eigenvalue_complex, sym_local_factor, sym_series,
    verify_local_u_factor, verify_tensor_identity, LocalFactor, TENSOR_IDENTITY_TOLERANCE,
};

/// Fundamental discriminants covering class numbers 1, 2 and 3.
pub const GAUSS_DISCRIMINANTS: [i64; 9] = [-3, -4, -7, -8, -11, -15, -20, -23, -24];

pub const TABLE_I: [&str; 6] = [
    "0.918287938",
    "0.973534972",
    "0.991304348",
    "0.99713291",
    "0.999051362",
    "0.999685565",
];

pub const TABLE_II: [&str; 6] = [
    "0.865814696",
    "0.916334661",
    "0.942701228",
    "0.958250497",
    "0.968205905",
    "0.974970203",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Coefficient length for the eigenform and symmetric-power checks.
    pub n: usize,
    /// Largest cutoff for the moment-sum checks.
    pub moment_x: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n: 10_000,
            moment_x: 1_000_000,
        }
    }
}

pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub description: &'static str,
    run: fn(&Context) -> Result<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Shared state for one verification run: the config and cached `Δ` series.
pub struct Context {
    pub config: VerifyConfig,
    delta: Mutex<HashMap<usize, Arc<CoefficientSeries>>>,
}

impl Context {
    pub fn new(config: VerifyConfig) -> Self {
        Context {
            config,
            delta: Mutex::new(HashMap::new()),
        }
    }

    /// Exact `Δ` coefficients up to `n`, computed once per length.
    pub fn delta(&self, n: usize) -> Result<Arc<CoefficientSeries>> {
        let mut cache = self.delta.lock().expect("delta cache poisoned");
        if let Some(s) = cache.get(&n) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(delta_coefficients(n)?);
        cache.insert(n, Arc::clone(&s));
        Ok(s)
    }
}

macro_rules! check {
    ($suite:literal, $name:literal, $desc:literal, $f:path) => {
        Check {
            suite: $suite,
            name: $name,
            description: $desc,
            run: $f,
        }
    };
}

pub static CHECKS: &[Check] = &[
    check!("combinat", "kostka-triple-oracle", "closed form = recursion = generating function (= tableaux for dl <= 24), d, l <= 5; K(0,2,l) sequence", kostka_triple_oracle),
    check!("combinat", "dimension-identity", "Σ (i+1) K(i,d,l) = (d+1)^l for d, l <= 6", dimension_identity),
    check!("combinat", "parity-vanishing", "K(i,d,l) = 0 off [0, dl] and for i of parity opposite to dl; K(dl,d,l) = 1", parity_vanishing),
    check!("combinat", "clebsch-gordan", "tensor power equals iterated Clebsch–Gordan, d <= 4, l <= 5", clebsch_gordan_iteration),
    check!("combinat", "central-binomial", "K(0,1,2m) = C(2m,m) - C(2m,m-1)", central_binomial),
    check!("combinat", "weyl-dimension", "two-row Weyl dimension is λ1 - λ2 + 1", weyl_dimension),
    check!("eigenform", "delta-integrity", "multiplicativity, Hecke recursion and Deligne bound on the integer path", delta_integrity),
    check!("eigenform", "ramanujan-691", "a(n) ≡ σ11(n) mod 691 for n <= 1000", ramanujan_691),
    check!("eigenform", "hecke-regeneration", "λ(n) rebuilt from prime powers matches the stored series", hecke_regeneration),
    check!("eigenform", "prime-power-recursion", "λ(p^{r+1}) + λ(p^{r-1}) = λ(p) λ(p^r)", prime_power_recursion),
    check!("sympow", "chebyshev-consistency", "λ_{Sym^d}(p) = U_d(λ(p)/2) for d <= 12", chebyshev_consistency),
    check!("sympow", "complex-oracle", "recurrence matches the direct complex sum, d, r <= 6", complex_oracle),
    check!("sympow", "unitarity", "|λ_{Sym^d}(p)| <= d+1 and local roots on the unit circle", unitarity),
    check!("sympow", "tensor-identity", "λ(p)^{dl} decomposition residual < 1e-9, p < 1000, dl <= 24", tensor_identity),
    check!("sympow", "local-u-factor", "U-factor c0 = 1, c1 = 0 at the first 25 primes", local_u_factor),
    check!("quadform", "reduction-invariance", "reduction is idempotent and SL2(Z)-invariant", reduction_invariance),
    check!("quadform", "group-laws", "identity, inverses, commutativity, associativity for |D| <= 2000", group_laws),
    check!("quadform", "character-orthogonality", "Σ_c χ(c) ψ̄(c) = h [χ = ψ] to 1e-12", character_orthogonality),
    check!("quadform", "gauss-consistency", "Σ_c r(n, Q_c) = w ideal_count(D, n), n <= 10^4", gauss_consistency),
    check!("quadform", "circle-average", "Σ_{n<=x} r(n, x²+y²) within πx ± 8√x", circle_average),
    check!("quadform", "character-decomposition", "r(n, Q) = (w/h) Σ_χ χ̄(Q) a_χ(n) to 1e-9, n <= 10^4", character_decomposition),
    check!("moments", "theta-tables", "both exponent tables reproduced after rounding", theta_tables),
    check!("moments", "theta-monotone", "θ increases along both tables; bqf exponents in (0, 1)", theta_monotone),
    check!("moments", "main-term-degrees", "deg P = K(0,d,l) - 1, vanishing for odd dl", main_term_degrees),
    check!("moments", "summation-exact", "compensated sums of the trivial series are exact", summation_exact),
    check!("moments", "bqf-trivial-sum", "bqf moment sum with d = 0, l = 1 equals Σ r(n, Q)", bqf_trivial_sum),
    check!("moments", "odd-moment-decay", "|S(x)|/x shrinks from x/100 to x for d = 1, l = 3, 5", odd_moment_decay),
    check!("moments", "main-term-fit", "(1,2) fit is positive with residual exponent < 1", main_term_fit),
];

pub fn suites() -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    for c in CHECKS {
        if !out.contains(&c.suite) {
            out.push(c.suite);
        }
    }
    out
}

/// Checks matching `selector`: `all`, a suite name or a check name.
pub fn select(selector: &str) -> Result<Vec<&'static Check>> {
    let chosen: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| selector == "all" || c.suite == selector || c.name == selector)
        .collect();
    if chosen.is_empty() {
        return Err(Error::OutOfRange(format!("unknown suite or check {selector:?}")));
    }
    Ok(chosen)
}

pub fn run_check(check: &Check, ctx: &Context) -> CheckResult {
    let start = Instant::now();
    let outcome = (check.run)(ctx);
    let seconds = start.elapsed().as_secs_f64();
    let (passed, detail) = match outcome {
        Ok(detail) => (true, detail),
        Err(e) => (false, e.to_string()),
    };
    CheckResult {
        suite: check.suite,
        name: check.name,
        passed,
        detail,
        seconds,
    }
}

/// Runs every selected check, in declaration order.
pub fn run(selector: &str, config: VerifyConfig) -> Result<Vec<CheckResult>> {
    let chosen = select(selector)?;
    let ctx = Context::new(config);
    Ok(chosen.into_iter().map(|c| run_check(c, &ctx)).collect())
}

fn fail(check: &'static str, detail: String) -> Error {
    Error::InvariantViolation { check, detail }
}

fn ensure(ok: bool, check: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(fail(check, detail()))
    }
}

// --- combinat ---------------------------------------------------------------

pub fn kostka_triple_oracle(_: &Context) -> Result<String> {
    let mut compared = 0;
    for d in 1..=5u32 {
        for l in 1..=5u32 {
            let dl = (d * l) as i64;
            for i in -2..=dl + 2 {
                let closed = kostka_closed_form(i, d, l);
                let rec = kostka_recursive(i, d, l);
                let gen = kostka_generating(i, d, l);
                ensure(closed == rec && rec == gen, "kostka-triple-oracle", || {
                    format!("K({i},{d},{l}): closed {closed}, recursive {rec}, generating {gen}")
                })?;
                if dl <= 24 {
                    let tab = kostka_tableau(i, d, l)?;
                    ensure(tab == closed, "kostka-triple-oracle", || {
                        format!("K({i},{d},{l}): tableaux {tab}, closed {closed}")
                    })?;
                }
                compared += 1;
            }
        }
    }
    let seq: Vec<BigUint> = (1..=8).map(|l| kostka_closed_form(0, 2, l)).collect();
    let expected: Vec<BigUint> = [0u32, 1, 1, 3, 6, 15, 36, 91].iter().map(|&k| k.into()).collect();
    ensure(seq == expected, "kostka-triple-oracle", || format!("K(0,2,1..8) = {seq:?}"))?;
    Ok(format!("{compared} values agree; K(0,2,1..8) = 0,1,1,3,6,15,36,91"))
}

pub fn dimension_identity(_: &Context) -> Result<String> {
    for d in 0..=6u32 {
        for l in 1..=6u32 {
            let row = KostkaTable::global().row(d, l);
            let total: BigUint = row
                .iter()
                .enumerate()
                .map(|(i, k)| k * BigUint::from(i as u64 + 1))
                .sum();
            let expected = BigUint::from(d + 1).pow(l);
            ensure(total == expected, "dimension-identity", || {
                format!("(d, l) = ({d}, {l}): Σ (i+1) K = {total}, (d+1)^l = {expected}")
            })?;
        }
    }
    Ok("d <= 6, l <= 6".into())
}

pub fn parity_vanishing(_: &Context) -> Result<String> {
    for d in 1..=5u32 {
        for l in 1..=5u32 {
            let dl = (d * l) as i64;
            for i in -3..=dl + 3 {
                let off = i < 0 || i > dl || (dl - i) % 2 != 0;
                let k = kostka_closed_form(i, d, l);
                let top = i == dl;
                ensure((!off || k.is_zero()) && (!top || k == BigUint::from(1u32)), "parity-vanishing", || {
                    format!("K({i},{d},{l}) = {k}")
                })?;
            }
        }
    }
    Ok("d, l <= 5".into())
}

pub fn clebsch_gordan_iteration(_: &Context) -> Result<String> {
    for d in 0..=4u32 {
        for l in 1..=5u32 {
            let mut iterated = MultiplicityVector::single(d);
            for _ in 1..l {
                iterated = iterated.tensor_sym(d);
            }
            let direct = tensor_power_multiplicities(d, l);
            ensure(iterated == direct, "clebsch-gordan", || {
                format!("(d, l) = ({d}, {l}): {direct} vs iterated {iterated}")
            })?;
        }
    }
    Ok("d <= 4, l <= 5".into())
}

pub fn central_binomial(_: &Context) -> Result<String> {
    for m in 1..=10i64 {
        let k = kostka_closed_form(0, 1, 2 * m as u32);
        let expected = binomial(2 * m, m) - binomial(2 * m, m - 1);
        ensure(k == expected, "central-binomial", || {
            format!("K(0,1,{}) = {k}, expected {expected}", 2 * m)
        })?;
    }
    Ok("m <= 10".into())
}

pub fn weyl_dimension(_: &Context) -> Result<String> {
    for a in 0..=12u32 {
        for b in 0..=a {
            let lambda = Partition::new(vec![a, b])?;
            let dim = weyl_dim(&lambda, 2);
            ensure(dim == BigUint::from(a - b + 1), "weyl-dimension", || {
                format!("dim S_{lambda} = {dim}")
            })?;
        }
    }
    Ok("λ1 <= 12".into())
}

// --- eigenform --------------------------------------------------------------

pub fn delta_integrity(ctx: &Context) -> Result<String> {
    let n = ctx.config.n;
    let delta = ctx.delta(n)?;
    delta.validate()?;
    Ok(format!("N = {n}"))
}

pub fn ramanujan_691(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let limit = 1000.min(delta.len());
    check_ramanujan_congruence(&delta, limit)?;
    Ok(format!("n <= {limit}"))
}

pub fn hecke_regeneration(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let exact = regenerate_exact(&delta).expect("Δ carries exact coefficients");
    let raw = delta.raw_values().expect("Δ carries exact coefficients");
    if let Some(n) = (1..=delta.len()).find(|&n| exact[n] != raw[n]) {
        return Err(fail("hecke-regeneration", format!("a({n}) regenerates to {}", exact[n])));
    }
    let float = regenerate_from_prime_powers(&delta);
    let worst = (1..=delta.len())
        .map(|n| (float[n] - delta.lambda(n)).abs())
        .fold(0.0, f64::max);
    ensure(worst <= RELATION_TOLERANCE, "hecke-regeneration", || {
        format!("float path deviates by {worst:e}")
    })?;
    Ok(format!("exact; float deviation {worst:.3e}"))
}

pub fn prime_power_recursion(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let n = delta.len();
    let mut worst: f64 = 0.0;
    for p in primes_up_to(n) {
        let (mut prev, mut pr) = (1usize, p);
        while pr <= n / p {
            let next = pr * p;
            let lhs = delta.lambda(next) + delta.lambda(prev);
            let rhs = delta.lambda(p) * delta.lambda(pr);
            worst = worst.max((lhs - rhs).abs());
            ensure((lhs - rhs).abs() <= RELATION_TOLERANCE, "prime-power-recursion", || {
                format!("fails at p = {p}, p^r = {pr}")
            })?;
            (prev, pr) = (pr, next);
        }
    }
    Ok(format!("max deviation {worst:.3e}"))
}

// --- sympow -----------------------------------------------------------------

fn small_primes(ctx: &Context, count: usize) -> Vec<usize> {
    first_primes(count)
        .into_iter()
        .filter(|&p| p <= ctx.config.n)
        .collect()
}

pub fn chebyshev_consistency(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let mut worst: f64 = 0.0;
    for p in small_primes(ctx, 50) {
        for d in 0..=12 {
            let via = sym_eigenvalue(&delta, p, 1, d)?;
            let direct = chebyshev_u(d, delta.lambda(p) / 2.0);
            worst = worst.max((via - direct).abs());
            ensure((via - direct).abs() < 1e-10, "chebyshev-consistency", || {
                format!("p = {p}, d = {d}: {via} vs {direct}")
            })?;
        }
    }
    Ok(format!("max deviation {worst:.3e}"))
}

pub fn complex_oracle(_: &Context) -> Result<String> {
    let mut worst: f64 = 0.0;
    for k in 1..=29 {
        let theta = std::f64::consts::PI * k as f64 / 30.7;
        let factor_lambda = 2.0 * theta.cos();
        for d in 0..=6 {
            let series = LocalFactor::from_lambda(2, factor_lambda, d)?.inverse_series(6);
            for r in 0..=6u32 {
                let oracle = sym_eigenvalue_complex(theta, d, r);
                let diff = (series[r as usize] - oracle).abs();
                worst = worst.max(diff);
                ensure(diff < 1e-9, "complex-oracle", || {
                    format!("θ = {theta}, d = {d}, r = {r}: {} vs {oracle}", series[r as usize])
                })?;
            }
        }
    }
    Ok(format!("max deviation {worst:.3e}"))
}

pub fn unitarity(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let limit = delta.len().min(10_000);
    for d in 0..=8u32 {
        let s = sym_series(&delta, d, limit)?;
        for p in primes_up_to(limit) {
            let v = s.value(p);
            ensure(v.abs() <= d as f64 + 1.0 + 1e-9, "unitarity", || {
                format!("|λ_Sym^{d}({p})| = {}", v.abs())
            })?;
        }
    }
    let mut worst: f64 = 0.0;
    for p in small_primes(ctx, 25) {
        for d in 0..=6 {
            worst = worst.max(sym_local_factor(&delta, p, d)?.unit_circle_deviation());
        }
    }
    ensure(worst < 1e-6, "unitarity", || format!("root off the unit circle by {worst:e}"))?;
    Ok(format!("primes <= {limit}, d <= 8; root deviation {worst:.3e}"))
}

pub fn tensor_identity(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let primes: Vec<usize> = primes_up_to(999.min(delta.len()));
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in 1..=24u32 {
        for l in 1..=24 / d {
            for &p in &primes {
                let r = verify_tensor_identity(&delta, d, l, p)?;
                worst = worst.max(r);
                cases += 1;
                ensure(r < TENSOR_IDENTITY_TOLERANCE, "tensor-identity", || {
                    format!("p = {p}, (d, l) = ({d}, {l}): residual {r:e}")
                })?;
            }
        }
    }
    Ok(format!("{cases} cases, max residual {worst:.3e}"))
}

pub fn local_u_factor(ctx: &Context) -> Result<String> {
    let delta = ctx.delta(ctx.config.n)?;
    let primes = small_primes(ctx, 25);
    ensure(primes.len() == 25, "local-u-factor", || {
        format!("N = {} covers only {} of the first 25 primes", ctx.config.n, primes.len())
    })?;
    let mut worst: f64 = 0.0;
    for (d, l) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        for &p in &primes {
            let c = verify_local_u_factor(&delta, d, l, p, 1)?;
            worst = worst.max(c[1].abs());
            ensure(c[0] == 1.0 && c[1].abs() < 1e-9, "local-u-factor", || {
                format!("p = {p}, (d, l) = ({d}, {l}): c0 = {}, c1 = {}", c[0], c[1])
            })?;
        }
    }
    Ok(format!("max |c1| {worst:.3e}"))
}

// --- quadform ---------------------------------------------------------------

fn discriminants_up_to(bound: i64) -> impl Iterator<Item = i64> {
    (3..=bound).map(|n| -n).filter(|d| matches!(d.rem_euclid(4), 0 | 1))
}

pub fn reduction_invariance(_: &Context) -> Result<String> {
    let mut matrices = Vec::new();
    for p in -5i64..=5 {
        for q in -5i64..=5 {
            for r in -5i64..=5 {
                for s in -5i64..=5 {
                    if p * s - q * r == 1 {
                        matrices.push((p, q, r, s));
                    }
                }
            }
        }
    }
    let mut twisted = 0;
    for d in discriminants_up_to(100) {
        for &form in ClassGroup::new(d)?.forms() {
            ensure(reduce(form)? == form, "reduction-invariance", || format!("{form} not fixed"))?;
            for &(p, q, r, s) in &matrices {
                let t = form.transform(p, q, r, s);
                let back = reduce(t)?;
                ensure(back == form, "reduction-invariance", || {
                    format!("{form} twisted to {t} reduces to {back}")
                })?;
                twisted += 1;
            }
        }
    }
    Ok(format!("{twisted} twists, {} matrices", matrices.len()))
}

pub fn group_laws(_: &Context) -> Result<String> {
    let mut groups = 0;
    for d in discriminants_up_to(2000) {
        let g = ClassGroup::new(d)?;
        let h = g.h();
        let t = g.composition_table();
        for i in 0..h {
            ensure(t[0][i] == i && t[i][g.inverse(i)] == 0, "group-laws", || {
                format!("D = {d}: identity or inverse fails at {}", g.form(i))
            })?;
            for j in 0..h {
                ensure(t[i][j] == t[j][i], "group-laws", || format!("D = {d}: not commutative"))?;
                for k in 0..h {
                    ensure(t[t[i][j]][k] == t[i][t[j][k]], "group-laws", || {
                        format!("D = {d}: not associative")
                    })?;
                }
            }
        }
        let order: u64 = g.structure().iter().product();
        ensure(order == h as u64, "group-laws", || {
            format!("D = {d}: structure {:?} vs h = {h}", g.structure())
        })?;
        groups += 1;
    }
    Ok(format!("{groups} discriminants"))
}

pub fn character_orthogonality(_: &Context) -> Result<String> {
    let mut worst: f64 = 0.0;
    let extra = [-56, -84, -260, -420, -1155, -3299];
    for d in GAUSS_DISCRIMINANTS.iter().chain(&extra) {
        let g = ClassGroup::new(*d)?;
        let h = g.h();
        for chi in 0..h {
            for psi in 0..h {
                let s: Complex64 = (0..h)
                    .map(|c| g.character_value(chi, c) * g.character_value(psi, c).conj())
                    .sum();
                let expected = if chi == psi { h as f64 } else { 0.0 };
                worst = worst.max((s - expected).norm());
            }
        }
    }
    ensure(worst < 1e-12, "character-orthogonality", || format!("deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:.3e}"))
}

pub fn gauss_consistency(_: &Context) -> Result<String> {
    let limit = 10_000;
    for d in GAUSS_DISCRIMINANTS {
        let g = ClassGroup::new(d)?;
        let counts = class_representation_counts(&g, limit);
        for n in 1..=limit {
            let total: u64 = counts.iter().map(|r| r[n]).sum();
            let ideals = ideal_count(d, n as u64)?;
            ensure(total == g.w() as u64 * ideals, "gauss-consistency", || {
                format!("D = {d}, n = {n}: Σ r = {total}, w · ideals = {}", g.w() as u64 * ideals)
            })?;
        }
    }
    Ok(format!("n <= {limit}"))
}

/// `(x, Σ_{n<=x} r(n, x²+y²), πx)` for the sanity window.
pub fn circle_counts() -> Vec<(usize, u64, f64)> {
    let circle = QuadForm { a: 1, b: 0, c: 1 };
    let counts = crate::quadform::representation_counts(&circle, 100_000);
    [1_000usize, 10_000, 100_000]
        .iter()
        .map(|&x| {
            let total: u64 = counts[1..=x].iter().sum();
            (x, total, std::f64::consts::PI * x as f64)
        })
        .collect()
}

pub fn circle_average(_: &Context) -> Result<String> {
    let mut parts = Vec::new();
    for (x, total, main) in circle_counts() {
        let dev = total as f64 - main;
        let slack = 8.0 * (x as f64).sqrt();
        ensure(dev.abs() <= slack, "circle-average", || {
            format!("x = {x}: Σ r = {total}, πx = {main:.1}")
        })?;
        parts.push(format!("x={x}: {dev:+.1}"));
    }
    Ok(parts.join(", "))
}

pub fn character_decomposition(_: &Context) -> Result<String> {
    let mut worst: f64 = 0.0;
    for d in GAUSS_DISCRIMINANTS {
        let g = ClassGroup::new(d)?;
        for &form in g.forms() {
            let r = verify_character_decomposition(&g, &form, 10_000)?;
            worst = worst.max(r);
            ensure(r < 1e-9, "character-decomposition", || {
                format!("D = {d}, Q = {form}: residual {r:e}")
            })?;
        }
    }
    Ok(format!("max residual {worst:.3e}"))
}

// --- moments ----------------------------------------------------------------

pub fn theta_tables(_: &Context) -> Result<String> {
    for (l, printed) in (3..=8).zip(TABLE_I) {
        let got = theta(2, l)?.decimal(printed.len() - 2);
        ensure(got == printed, "theta-tables", || format!("θ(2,{l}) = {got}, table {printed}"))?;
    }
    for (d, printed) in (3..=8).zip(TABLE_II) {
        let got = theta(d, 2)?.decimal(printed.len() - 2);
        ensure(got == printed, "theta-tables", || format!("θ({d},2) = {got}, table {printed}"))?;
    }
    Ok("12 entries".into())
}

pub fn theta_monotone(_: &Context) -> Result<String> {
    let first = (3..=8).map(|l| theta(2, l).map(|r| r.theta_exact)).collect::<Result<Vec<_>>>()?;
    let second = (3..=8).map(|d| theta(d, 2).map(|r| r.theta_exact)).collect::<Result<Vec<_>>>()?;
    ensure(first.windows(2).all(|w| w[0] < w[1]), "theta-monotone", || "θ(2,l) not increasing".into())?;
    ensure(second.windows(2).all(|w| w[0] < w[1]), "theta-monotone", || "θ(d,2) not increasing".into())?;
    for (d, l) in [(2u32, 3u32), (3, 2), (1, 6), (2, 5)] {
        for h1 in [true, false] {
            let t = theta_bqf(d, l, h1)?.to_f64();
            ensure(t > 0.0 && t < 1.0, "theta-monotone", || format!("θ_Q({d},{l}) = {t}"))?;
        }
    }
    Ok("strictly increasing".into())
}

pub fn main_term_degrees(_: &Context) -> Result<String> {
    let cases: [(u32, u32, Option<u32>); 3] = [(2, 4, Some(2)), (3, 3, None), (1, 8, Some(13))];
    for (d, l, expected) in cases {
        let got = main_term_degree(d, l);
        ensure(got == expected.map(BigUint::from), "main-term-degrees", || {
            format!("(d, l) = ({d}, {l}): {got:?}")
        })?;
    }
    for d in 1..=5u32 {
        for l in (1..=7u32).filter(|l| (d * l) % 2 == 1) {
            ensure(main_term_degree(d, l).is_none(), "main-term-degrees", || {
                format!("(d, l) = ({d}, {l}) should vanish")
            })?;
        }
    }
    Ok("examples and odd-dl vanishing".into())
}

pub fn summation_exact(ctx: &Context) -> Result<String> {
    let n = ctx.config.n.min(100_000);
    let delta = ctx.delta(ctx.config.n)?;
    let trivial = sym_series(&delta, 0, n)?;
    for l in 1..=4 {
        let s = moment_sum(&trivial, l, n)?;
        ensure(s == n as f64, "summation-exact", || format!("Σ 1^{l} up to {n} = {s}"))?;
    }
    Ok(format!("x = {n}"))
}

pub fn bqf_trivial_sum(ctx: &Context) -> Result<String> {
    let x = ctx.config.n.min(100_000);
    let delta = ctx.delta(ctx.config.n)?;
    let trivial = sym_series(&delta, 0, x)?;
    for form in [QuadForm { a: 1, b: 0, c: 1 }, QuadForm { a: 1, b: 1, c: 1 }, QuadForm { a: 2, b: 2, c: 3 }] {
        let s = bqf_moment_sum(&trivial, 1, &form, x)?;
        let direct: u64 = (1..=x as u64).map(|n| count_representations(&form, n)).sum();
        ensure(s == direct as f64, "bqf-trivial-sum", || {
            format!("Q = {form}: {s} vs {direct}")
        })?;
    }
    Ok(format!("x = {x}"))
}

/// `|S(x)|/x` for `d = 1` at `x / 100`, `x / 10` and `x`.
pub fn odd_moment_ratios(ctx: &Context, l: u32) -> Result<[(usize, f64); 3]> {
    let x = ctx.config.moment_x;
    let delta = ctx.delta(x)?;
    let s = sym_series(&delta, 1, x)?;
    let mut out = [(0usize, 0.0f64); 3];
    for (slot, cut) in out.iter_mut().zip([x / 100, x / 10, x]) {
        *slot = (cut, moment_sum(&s, l, cut)?.abs() / cut as f64);
    }
    Ok(out)
}

pub fn odd_moment_decay(ctx: &Context) -> Result<String> {
    let mut parts = Vec::new();
    for l in [3, 5] {
        let r = odd_moment_ratios(ctx, l)?;
        ensure(r[2].1 < r[0].1, "odd-moment-decay", || {
            format!("l = {l}: |S|/x = {:.3e} at {} vs {:.3e} at {}", r[2].1, r[2].0, r[0].1, r[0].0)
        })?;
        parts.push(format!(
            "l={l}: {:.2e} -> {:.2e} -> {:.2e}{}",
            r[0].1,
            r[1].1,
            r[2].1,
            if r[1].1 < r[0].1 && r[2].1 < r[1].1 { "" } else { " (not monotone at the midpoint)" }
        ));
    }
    Ok(parts.join("; "))
}

/// Main-term fit of `(d, l) = (1, 2)` over 13 log-spaced cutoffs up to `x`.
pub fn rankin_selberg_fit(ctx: &Context) -> Result<crate::moments::MomentFit> {
    let x = ctx.config.moment_x;
    let delta = ctx.delta(x)?;
    let s = sym_series(&delta, 1, x)?;
    let xs = log_spaced_cutoffs(1000.min(x), x, 13);
    let sums = xs.iter().map(|&c| moment_sum(&s, 2, c)).collect::<Result<Vec<_>>>()?;
    let xf: Vec<f64> = xs.iter().map(|&c| c as f64).collect();
    fit_main_term(1, 2, &xf, &sums)
}

pub fn main_term_fit(ctx: &Context) -> Result<String> {
    let fit = rankin_selberg_fit(ctx)?;
    let c = fit.fitted_coeffs.first().copied().unwrap_or(0.0);
    ensure(c > 0.0, "main-term-fit", || format!("constant {c}"))?;
    ensure(fit.residual_exponent < 1.0, "main-term-fit", || {
        format!("residual exponent {}", fit.residual_exponent)
    })?;
    Ok(format!(
        "P = {c:.6}, residual exponent {:.3} over [{}, {}]",
        fit.residual_exponent,
        fit.window.0,
        fit.window.1
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select("all").unwrap().len(), CHECKS.len());
        assert!(select("quadform").unwrap().iter().all(|c| c.suite == "quadform"));
        assert_eq!(select("theta-tables").unwrap().len(), 1);
        assert!(select("nope").is_err());
        assert_eq!(suites(), ["combinat", "eigenform", "sympow", "quadform", "moments"]);
        let mut names: Vec<_> = CHECKS.iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn cheap_suites_pass() {
        let config = VerifyConfig { n: 2_000, moment_x: 20_000 };
        for selector in ["combinat", "eigenform", "theta-tables", "main-term-degrees", "summation-exact"] {
            for r in run(selector, config).unwrap() {
                assert!(r.passed, "{}: {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn failures_are_reported_not_raised() {
        let config = VerifyConfig { n: 50, moment_x: 1000 };
        let r = run("local-u-factor", config).unwrap();
        assert!(!r[0].passed);
        assert!(r[0].detail.starts_with("InvariantViolation"));
    }
}
