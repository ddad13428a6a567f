//! Periodic orbit census, the pressure root `s₀` and the prime orbit table
//! for `φ ≡ 1` on the Lattès rule.

use thurston::complex::{Complex, Symbolic};
use thurston::orbit::{enumerate_orbits, prime_orbit_table, solve_s0, table_csv, weighted_length, word_count, PressureModel};
use thurston::potential::Potential;
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cx = Complex::new(&parse_rule(rules::LATTES_2X2)?)?;
    let sym = Symbolic::new(&cx.pattern);
    let p_max = 6;
    let orbits = enumerate_orbits(&sym, p_max, None, 1 << 22)?;
    for p in 1..=p_max {
        let prime = orbits.iter().filter(|o| o.period == p).count();
        println!("p = {p}: trace = {:>5}, primitive orbits = {prime}", word_count(&sym, p));
    }
    let phi = Potential::Const(1.0);
    let model = PressureModel { lambda: 2.0, alpha: 0.5, c0: 1.0 };
    let s0 = solve_s0(&phi, &sym, &model, 3, 1e-10)?;
    println!("s0 in {s0} (log 4 = {})", 4f64.ln());
    let lengths: Vec<_> = orbits.iter().map(|o| weighted_length(&phi, &sym, o)).collect();
    print!("{}", table_csv(&prime_orbit_table(&lengths, p_max, 1.0, s0, 1.0, 1e-10)));
    Ok(())
}
