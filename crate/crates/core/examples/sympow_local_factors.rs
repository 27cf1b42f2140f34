// Symmetric-power eigenvalues of Δ: the local Euler factor at p, its roots on
// the unit circle, and the tensor-power identity at p.

use symmoments::combinat::tensor_power_multiplicities;
use symmoments::eigenform::{delta_coefficients, satake_angle};
use symmoments::sympow::{chebyshev_u, sym_eigenvalue, sym_local_factor, sym_series, verify_tensor_identity};

pub fn run_example() -> symmoments::Result<()> {
    let delta = delta_coefficients(2_000)?;
    for p in [2, 3, 5, 7] {
        let angle = satake_angle(&delta, p)?;
        println!("p = {p}: λ(p) = {:+.12}, θ_p = {:.12}", delta.lambda(p), angle.theta);
        for d in 1..=4 {
            let factor = sym_local_factor(&delta, p, d)?;
            let direct = chebyshev_u(d, delta.lambda(p) / 2.0);
            println!(
                "  Sym^{d}: λ = {:+.12} (U_d: {:+.12}), roots off unit circle by {:.1e}",
                sym_eigenvalue(&delta, p, 1, d)?,
                direct,
                factor.unit_circle_deviation()
            );
        }
    }

    let mv = tensor_power_multiplicities(2, 3);
    let worst = [2, 3, 5, 7, 11, 13]
        .iter()
        .map(|&p| verify_tensor_identity(&delta, 2, 3, p))
        .collect::<symmoments::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("λ_Sym²(p)³ = Σ K(i,2,3) λ_Sym^i(p) with K = {mv}: max residual {worst:.1e}");

    let s2 = sym_series(&delta, 2, 12)?;
    let row: Vec<String> = (1..=12).map(|n| format!("{:+.4}", s2.value(n))).collect();
    println!("λ_Sym²(n), n = 1..12: {}", row.join(" "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    run_example()
}
