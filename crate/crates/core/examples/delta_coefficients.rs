// Ramanujan's τ(n) from the η-product, its integrity checks, and a cache
// round trip through the coefficient CSV format.

use symmoments::eigenform::{
    cache_file_name, check_ramanujan_congruence, delta_coefficients, load_coefficients, write_coefficients,
};

pub fn run_example_to(n: usize) -> symmoments::Result<()> {
    let delta = delta_coefficients(n)?;
    for k in 1..=10 {
        println!("τ({k:>2}) = {:>12}   λ({k:>2}) = {:+.12}", delta.raw(k).unwrap(), delta.lambda(k));
    }
    delta.validate()?;
    check_ramanujan_congruence(&delta, 1000.min(n))?;
    println!("N = {n}: multiplicativity, Hecke recursion, Deligne bound and τ ≡ σ11 mod 691 hold");

    let dir = std::env::temp_dir().join(format!("symmoments-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join(cache_file_name("delta", n));
    write_coefficients(&delta, &path)?;
    let back = load_coefficients(&path, 12)?;
    assert_eq!(back.raw_values(), delta.raw_values());
    println!("round trip through {} ok", path.file_name().unwrap().to_string_lossy());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

pub fn run_example() -> symmoments::Result<()> {
    run_example_to(5_000)
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    run_example_to(n)
}
