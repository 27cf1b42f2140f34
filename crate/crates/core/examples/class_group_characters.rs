// Class groups of negative discriminants, their characters, and the
// decomposition of r(n, Q) into theta coefficients a_χ(n).

use symmoments::quadform::{
    count_representations, ideal_count, theta_coefficients, verify_character_decomposition, ClassGroup,
};

pub fn run_example() -> symmoments::Result<()> {
    for d in [-4, -20, -23, -84, -260] {
        let g = ClassGroup::new(d)?;
        let forms: Vec<String> = g.forms().iter().map(ToString::to_string).collect();
        println!("D = {d}: h = {}, structure {:?}, forms {}", g.h(), g.structure(), forms.join(" "));
    }

    let g = ClassGroup::new(-23)?;
    println!("\nD = -23 character table:");
    for chi in 0..g.h() {
        let row: Vec<String> = (0..g.h())
            .map(|c| format!("{:>5}", g.character_phase(chi, c)))
            .collect();
        println!("  χ{chi}: {}  (phases, in turns)", row.join(""));
    }

    println!("\n n  ideals  r(n,(1,1,6))  r(n,(2,1,3))  a_χ1(n)");
    let theta = theta_coefficients(&g, 1, 12)?;
    for n in 1..=12u64 {
        println!(
            "{n:>2}  {:>6}  {:>12}  {:>12}  {:>+7.3}",
            ideal_count(-23, n)?,
            count_representations(&g.form(0), n),
            count_representations(&g.form(1), n),
            clean(theta.get(n as usize).re)
        );
    }
    for form in g.forms() {
        let residual = verify_character_decomposition(&g, form, 2_000)?;
        println!("r(n, {form}) = (w/h) Σ χ̄ a_χ(n) for n <= 2000: residual {residual:.1e}");
    }
    Ok(())
}

/// Drops rounding noise so exact zeros print without a sign.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-9 {
        0.0
    } else {
        x
    }
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    run_example()
}
