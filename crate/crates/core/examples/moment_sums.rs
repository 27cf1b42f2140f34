// Partial sums Σ_{n<=x} λ_{Sym^d Δ}(n)^l at log-spaced cutoffs, with the
// main-term fit. Pass a cutoff as the first argument (default 10^5).

use symmoments::eigenform::delta_coefficients;
use symmoments::moments::{fit_main_term, log_spaced_cutoffs, main_term_degree, moment_sum};
use symmoments::sympow::sym_series;

pub fn run_example_to(x_max: usize) -> symmoments::Result<()> {
    let delta = delta_coefficients(x_max)?;
    for (d, l) in [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2)] {
        let series = sym_series(&delta, d, x_max)?;
        let xs = log_spaced_cutoffs(1000, x_max, 13);
        let sums = xs
            .iter()
            .map(|&x| moment_sum(&series, l, x))
            .collect::<symmoments::Result<Vec<_>>>()?;
        let xf: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
        let fit = fit_main_term(d, l, &xf, &sums)?;
        let degree = main_term_degree(d, l).map_or("vanishes".to_string(), |k| k.to_string());
        println!("(d, l) = ({d}, {l}), deg P = {degree}");
        for (x, s) in xs.iter().zip(&sums) {
            println!("  x = {x:>8}  S(x)/x = {:+.6}", s / *x as f64);
        }
        println!("  P coefficients {:?}, residual exponent {:.3}", fit.fitted_coeffs, fit.residual_exponent);
    }
    Ok(())
}

pub fn run_example() -> symmoments::Result<()> {
    run_example_to(20_000)
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    let x_max = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    run_example_to(x_max)
}
