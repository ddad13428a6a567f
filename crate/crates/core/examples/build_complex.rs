//! Builds the level complexes of both bundled rules and prints their cell counts.

use thurston::complex::Complex;
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in rules::ALL {
        let mut cx = Complex::new(&parse_rule(text)?)?;
        cx.build_to(5)?;
        println!("{name} (m = {}, d = {})", cx.m(), cx.d());
        for n in 0..=5 {
            let lv = cx.level(n);
            println!("  n = {n}: V = {:>6}, E = {:>6}, X = {:>6}, chi = {}", lv.num_vertices(), lv.num_edges(), lv.num_tiles(), lv.euler());
        }
    }
    Ok(())
}
