//! Certifies the finite-scale visual-metric constants at Λ = 2 and prints
//! the Birkhoff-sum distortion constant they give for a unit seminorm.

use thurston::complex::Complex;
use thurston::metric::certify_constants;
use thurston::potential::distortion_constant_c1;
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in rules::ALL {
        let mut cx = Complex::new(&parse_rule(text)?)?;
        let p = certify_constants(&mut cx, 2.0, 4, 3)?;
        let c1 = distortion_constant_c1(1.0, p.c0_fit, p.lambda, 0.5);
        println!("{name}: C = {}, K = {}, C0 = {}, C1(H = 1, alpha = 0.5) = {c1:.6}", p.c_fit, p.k_fit, p.c0_fit);
    }
    Ok(())
}
