//! Parses both bundled rules, validates them, and shows what a broken
//! degree line does to the report.

use thurston::{parse_rule, rules, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in rules::ALL {
        let spec = parse_rule(text)?;
        let report = validate(&spec);
        println!("{name}: m = {}, d = {}, valid = {}", spec.m, spec.d, report.is_valid());
    }
    let broken = parse_rule(&rules::LATTES_2X2.replacen("DEG 4", "DEG 3", 1))?;
    print!("lattes_2x2 with DEG 3:\n{}", validate(&broken));
    Ok(())
}
