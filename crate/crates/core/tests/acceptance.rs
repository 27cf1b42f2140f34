//! One PASS/FAIL line per acceptance criterion; runs without the libtest
//! harness so the report is always printed. Exits nonzero if any fails.

use std::time::Instant;

use symmoments::eigenform::{check_ramanujan_congruence, delta_coefficients};
use symmoments::moments::{bqf_moment_sum, theta};
use symmoments::quadform::{count_representations, QuadForm};
use symmoments::sympow::sym_series;
use symmoments::verify::{self, Context, VerifyConfig, TABLE_I, TABLE_II};
use symmoments::Result;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn criterion(
    id: &'static str,
    title: &'static str,
    budget_seconds: f64,
    f: impl FnOnce() -> Result<String>,
) -> Outcome {
    let start = Instant::now();
    let result = f();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if seconds > budget_seconds {
        passed = false;
        detail = format!("{detail}; over the {budget_seconds} s budget");
    }
    let outcome = Outcome {
        id,
        title,
        passed,
        detail: format!("{detail} [{seconds:.2} s]"),
    };
    println!(
        "{} {} {}: {}",
        outcome.id,
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.title,
        outcome.detail
    );
    outcome
}

fn table(d_or_l: impl Fn(u32) -> (u32, u32), printed: [&str; 6]) -> Result<String> {
    let mut got = Vec::new();
    for (k, expected) in (3..=8).zip(printed) {
        let (d, l) = d_or_l(k);
        let rendered = theta(d, l)?.decimal(expected.len() - 2);
        if rendered != expected {
            return Err(symmoments::Error::InvariantViolation {
                check: "theta-table",
                detail: format!("θ({d},{l}) rounds to {rendered}, printed {expected}"),
            });
        }
        got.push(rendered);
    }
    Ok(got.join(" "))
}

fn bqf_trivial_sums(x: usize) -> Result<String> {
    let delta = delta_coefficients(x)?;
    let trivial = sym_series(&delta, 0, x)?;
    let mut parts = Vec::new();
    for form in [QuadForm::new(1, 0, 1)?, QuadForm::new(1, 1, 1)?, QuadForm::new(2, 2, 3)?] {
        let s = bqf_moment_sum(&trivial, 1, &form, x)?;
        let direct: u64 = (1..=x as u64).map(|n| count_representations(&form, n)).sum();
        if s != direct as f64 {
            return Err(symmoments::Error::InvariantViolation {
                check: "bqf-trivial-sum",
                detail: format!("Q = {form}: {s} vs {direct}"),
            });
        }
        parts.push(format!("{form}: {direct}"));
    }
    Ok(format!("x = {x}; {}", parts.join(", ")))
}

fn main() {
    let small = Context::new(VerifyConfig { n: 10_000, moment_x: 1_000_000 });
    let mut outcomes = Vec::new();

    outcomes.push(criterion("AC1", "exponent table I, θ(2,l), l = 3..8", 1.0, || {
        table(|l| (2, l), TABLE_I)
    }));
    outcomes.push(criterion("AC2", "exponent table II, θ(d,2), d = 3..8", 1.0, || {
        table(|d| (d, 2), TABLE_II)
    }));
    outcomes.push(criterion("AC3", "Kostka triple oracle", 30.0, || {
        verify::kostka_triple_oracle(&small)
    }));
    outcomes.push(criterion("AC4", "dimension identity", 5.0, || {
        verify::dimension_identity(&small)
    }));
    outcomes.push(criterion("AC5", "pointwise decomposition identity on Δ", 60.0, || {
        verify::tensor_identity(&small)
    }));
    outcomes.push(criterion("AC6", "eigenform integrity of Δ to N = 10^5", 60.0, || {
        let delta = delta_coefficients(100_000)?;
        delta.validate()?;
        check_ramanujan_congruence(&delta, 1000)?;
        Ok("multiplicativity, Hecke recursion, Deligne bound, mod 691".into())
    }));
    outcomes.push(criterion("AC7", "local U-factor c0 = 1, c1 = 0", 10.0, || {
        verify::local_u_factor(&small)
    }));
    outcomes.push(criterion("AC8", "character decomposition of r(n,Q)", 60.0, || {
        verify::character_decomposition(&small)
    }));
    outcomes.push(criterion("AC9", "Gauss circle sanity", 10.0, || {
        verify::circle_average(&small)
    }));
    outcomes.push(criterion("AC10", "moment-sum properties on Δ to 10^6", 300.0, || {
        let a = verify::odd_moment_decay(&small)?;
        let b = verify::main_term_fit(&small)?;
        let c = bqf_trivial_sums(100_000)?;
        Ok(format!("(a) {a}; (b) {b}; (c) {c}"))
    }));

    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} criteria, {} failed", outcomes.len(), failed.len());
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
