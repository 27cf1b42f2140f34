// Decompositions of (Sym^d)^{⊗l} into Sym^i, computed four independent ways.

use num_bigint::BigUint;
use symmoments::combinat::{
    kostka_closed_form, kostka_generating, kostka_recursive, kostka_tableau, tensor_power_multiplicities,
};

pub fn run_example() -> symmoments::Result<()> {
    for (d, l) in [(1, 4), (2, 2), (2, 3), (3, 3)] {
        let mv = tensor_power_multiplicities(d, l);
        println!("(Sym^{d})^{{⊗{l}}} = {mv}   (dimension {})", mv.dimension());
    }

    println!("\n  i  closed  recursive  generating  tableaux   for (d, l) = (3, 4)");
    for i in (0..=12).rev().step_by(2) {
        println!(
            "{i:>3}  {:>6}  {:>9}  {:>10}  {:>8}",
            kostka_closed_form(i, 3, 4),
            kostka_recursive(i, 3, 4),
            kostka_generating(i, 3, 4),
            kostka_tableau(i, 3, 4)?,
        );
    }

    let seq: Vec<BigUint> = (1..=8).map(|l| kostka_closed_form(0, 2, l)).collect();
    let seq: Vec<String> = seq.iter().map(ToString::to_string).collect();
    println!("\nK(0,2,l), l = 1..8: {}", seq.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    run_example()
}
