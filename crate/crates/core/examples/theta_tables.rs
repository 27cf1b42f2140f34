// The exact error-term exponents θ(d,l) as rationals and rounded decimals.

use symmoments::moments::{theta, theta_bqf, theta_unchecked, ThetaVariant};

pub fn run_example() -> symmoments::Result<()> {
    println!("θ(2, l):");
    for l in 3..=8 {
        let t = theta(2, l)?;
        println!("  l = {l}  {}  = {}", t.decimal(9), t.exact_string());
    }
    println!("θ(d, 2):");
    for d in 3..=8 {
        let t = theta(d, 2)?;
        println!("  d = {d}  {}  = {}", t.decimal(9), t.exact_string());
    }
    println!("sums over values of a binary quadratic form, (d, l) = (2, 3):");
    println!("  h = 1  {}", theta_bqf(2, 3, true)?.decimal(9));
    println!("  h > 1  {}", theta_bqf(2, 3, false)?.decimal(9));

    // (4, 1) is outside the theorem's range; the formula still evaluates.
    let t = theta_unchecked(4, 1, ThetaVariant::Plain)?;
    println!("unchecked θ(4, 1) = {} (not a theorem value)", t.exact_string());
    Ok(())
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    run_example()
}
