//! Expanding Thurston maps presented by finite two-tile subdivision rules.

pub mod cli;
pub mod complex;
pub mod expansion;
pub mod interval;
pub mod metric;
pub mod orbit;
pub mod potential;
pub mod rulespec;
pub mod sni;

pub use rulespec::{parse_rule, validate, Color, SubdivisionRuleSpec};

/// Bundled rule documents.
pub mod rules {
    pub const LATTES_2X2: &str = include_str!("../rules/lattes_2x2.rule");
    pub const PENTAGON_5: &str = include_str!("../rules/pentagon_5.rule");

    /// Bundled rules by name.
    pub const ALL: [(&str, &str); 2] = [("lattes_2x2", LATTES_2X2), ("pentagon_5", PENTAGON_5)];

    pub fn by_name(name: &str) -> Option<&'static str> {
        ALL.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
    }
}
