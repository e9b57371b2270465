//! Bundled example systems, one per singularity configuration with a limit cycle.

use crate::error::InputError;
use crate::io::parse_system;
use crate::model::PiecewiseSystem;

const SOURCES: [(&str, &str); 6] = [
    ("CCC", include_str!("../fixtures/ccc.json")),
    ("SCC", include_str!("../fixtures/scc.json")),
    ("SCS", include_str!("../fixtures/scs.json")),
    ("CSC", include_str!("../fixtures/csc.json")),
    ("SSS", include_str!("../fixtures/sss.json")),
    ("SSC", include_str!("../fixtures/ssc.json")),
];

/// Names accepted by [`example`], in bundle order.
pub fn example_names() -> Vec<&'static str> {
    SOURCES.iter().map(|(name, _)| *name).collect()
}

/// Case-insensitive lookup of a bundled example.
pub fn example(name: &str) -> Result<PiecewiseSystem, InputError> {
    let (_, text) = SOURCES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| InputError::UnknownFixture(name.to_string()))?;
    Ok(parse_system(text)?.system)
}

pub fn bundle_examples() -> Vec<(&'static str, PiecewiseSystem)> {
    SOURCES
        .iter()
        .map(|(name, text)| {
            (
                *name,
                parse_system(text).expect("bundled fixture parses").system,
            )
        })
        .collect()
}
