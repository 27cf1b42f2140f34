// The correction factor U(p^{-s}) left after dividing the l-th moment
// L-function by Π L(Sym^i, s)^{K(i,d,l)}: its series starts 1 + 0·X.

use symmoments::eigenform::delta_coefficients;
use symmoments::sympow::verify_local_u_factor;

pub fn run_example() -> symmoments::Result<()> {
    let delta = delta_coefficients(200)?;
    for (d, l) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        println!("(d, l) = ({d}, {l})");
        for p in [2, 3, 5, 97] {
            let c = verify_local_u_factor(&delta, d, l, p, 4)?;
            let terms: Vec<String> = c.iter().map(|x| format!("{x:+.6}")).collect();
            println!("  p = {p:>2}: {}", terms.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> symmoments::Result<()> {
    run_example()
}
