//! Potentials from the expression syntax, their Birkhoff sums at the bump
//! centre, and the eventual-positivity certificate of `1 + bump`.

use std::sync::Arc;

use thurston::complex::{Addr, Complex, SymVertex, Symbolic};
use thurston::potential::{birkhoff_sum, eventually_positive_check, parse_potential_expr, Potential};
use thurston::sni::{BumpFunction, BumpParams};
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cx = Complex::new(&parse_rule(rules::LATTES_2X2)?)?;
    let sym = Symbolic::new(&cx.pattern);
    println!("parsed: {}", parse_potential_expr("sum(const 1; distpow 2:5 0.5 -0.25)")?);

    let params = BumpParams { lambda: 2.0, alpha: 0.5, c26: 8.0, eps: 0.05, n_big: 2, dn: 4 };
    let centre = SymVertex { word: vec![1, 5], corner: 2 };
    let bump = BumpFunction::new(&sym, &centre, 0, params)?;
    let x = Addr::of_vertex(&sym, &centre);
    println!("bump: amplitude = {}, seminorm bound = {:?}", bump.amplitude(), bump.seminorm_bound());
    let phi = Potential::Sum(vec![Potential::Const(1.0), Potential::Bump { weight: 1.0, bump: Arc::new(bump) }]);

    for n in [1, 2, 4, 8] {
        println!("S_{n} phi(x) in {}", birkhoff_sum(&phi, &sym, &x, n));
    }
    println!("{:?}", eventually_positive_check(&phi, &mut cx, &sym, 1.0, 2.0, 0.5, 4)?);
    Ok(())
}
