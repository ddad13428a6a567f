//! Combinatorial expansion: `D_n` and the `Λ₀` estimates `D_n^{1/n}`, then
//! the scale `N` chosen for a bump construction at α = 0.99.

use thurston::complex::Complex;
use thurston::expansion::{lambda0_estimate, select_n};
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in rules::ALL {
        let mut cx = Complex::new(&parse_rule(text)?)?;
        println!("{name}");
        for r in lambda0_estimate(&mut cx, 5)? {
            println!("  n = {}: D_n = {:>3}, D_n^(1/n) = {:.6}", r.n, r.dn, r.root);
        }
    }
    let mut cx = Complex::new(&parse_rule(rules::LATTES_2X2)?)?;
    let c26 = thurston::sni::c26(2.0, 2.0, 0.99);
    let choice = select_n(&mut cx, 0.99, 2.0, c26, 2.0, 8)?;
    println!("lattes_2x2 at alpha = 0.99: N = {}, D_N = {}", choice.n, choice.dn);
    Ok(())
}
