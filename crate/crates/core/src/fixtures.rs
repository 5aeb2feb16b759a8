//! Built-in scenarios covering the main verdict classes; used by `selftest`
//! and the integration suite.

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::symbol::GammaSymbolData;

pub const FIXTURES: &[(&str, &str)] = &[
    ("trivial_elliptic", include_str!("../fixtures/trivial_elliptic.json")),
    ("antipodal_elliptic", include_str!("../fixtures/antipodal_elliptic.json")),
    ("antipodal_nonfredholm", include_str!("../fixtures/antipodal_nonfredholm.json")),
    ("klein4_nonelliptic_fredholm", include_str!("../fixtures/klein4_nonelliptic_fredholm.json")),
    ("coset_z2", include_str!("../fixtures/coset_z2.json")),
    ("two_component_mixed", include_str!("../fixtures/two_component_mixed.json")),
    ("antipodal_phase", include_str!("../fixtures/antipodal_phase.json")),
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|(n, _)| *n).collect()
}

pub fn fixture_json(name: &str) -> Result<&'static str> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
        .ok_or_else(|| {
            Error::Parse(format!("unknown fixture '{name}'; available: {}", fixture_names().join(", ")))
        })
}

pub fn fixture_scenario(name: &str) -> Result<Scenario> {
    Scenario::from_json(fixture_json(name)?)
}

pub fn fixture_data(name: &str) -> Result<GammaSymbolData> {
    fixture_scenario(name)?.build()
}
