//! Built-in landscapes used by tests, examples and the CLI.

use crate::format::parse_landscape;
use crate::landscape::Landscape;

/// Eleven-state chain `a - b - ... - k` with energies 2,5,1,2,2,2,4,3,0,1,5.
pub const FIG1_JSON: &str = include_str!("../data/fig1.json");

pub fn fig1() -> Landscape {
    parse_landscape(FIG1_JSON).expect("bundled fixture is valid")
}
