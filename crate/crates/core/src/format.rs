//! Landscape file format.
//!
//! ```json
//! {
//!   "states": [{"id": "x", "energy": "0"}, {"id": "y", "energy": "1.5"}],
//!   "edges": [["x", "y"], {"pair": ["y", "z"], "q": "0.25"}],
//!   "energy_scale": 1000
//! }
//! ```
//!
//! [`to_json`] emits the canonical form: states in declaration order,
//! energies in shortest decimal form, each undirected edge once in its first
//! declared orientation, and `energy_scale` only when it differs from the
//! default. Canonical documents round-trip byte for byte.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::energy::{format_decimal, parse_decimal, DecimalError, EnergyScale, DEFAULT_SCALE};
use crate::error::{Error, Result};
use crate::landscape::{EdgeSpec, Landscape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    states: Vec<StateEntry>,
    edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    energy_scale: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    id: String,
    energy: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeEntry {
    Pair([String; 2]),
    Weighted { pair: [String; 2], q: String },
}

pub fn load_landscape<R: Read>(source: R, format: Format) -> Result<Landscape> {
    match format {
        Format::Json => {
            let doc: Document = serde_json::from_reader(source)
                .map_err(|e| Error::MalformedInput(e.to_string()))?;
            from_document(doc)
        }
    }
}

pub fn parse_landscape(text: &str) -> Result<Landscape> {
    load_landscape(text.as_bytes(), Format::Json)
}

fn from_document(doc: Document) -> Result<Landscape> {
    let scale = match doc.energy_scale {
        None => EnergyScale::default(),
        Some(s) => EnergyScale::new(s)
            .ok_or_else(|| Error::MalformedInput(format!("energy_scale must be positive, got {s}")))?,
    };
    let states = doc
        .states
        .into_iter()
        .map(|s| {
            let energy = scale.parse(&s.energy).map_err(|e| match e {
                DecimalError::Syntax(_) => Error::MalformedInput(e.to_string()),
                DecimalError::NotRepresentable(text) => Error::ScaleOverflow(text),
            })?;
            Ok((s.id, energy))
        })
        .collect::<Result<Vec<_>>>()?;
    let edges = doc
        .edges
        .into_iter()
        .map(|e| match e {
            EdgeEntry::Pair([a, b]) => Ok(EdgeSpec::new(a, b)),
            EdgeEntry::Weighted { pair: [a, b], q } => {
                let q = parse_decimal(&q).map_err(|e| Error::MalformedInput(e.to_string()))?;
                Ok(EdgeSpec::with_rate(a, b, q))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Landscape::new(states, edges, scale)
}

/// Canonical JSON rendering, terminated by a newline.
pub fn to_json(landscape: &Landscape) -> String {
    let scale = landscape.scale();
    let doc = Document {
        states: (0..landscape.len())
            .map(|x| StateEntry {
                id: landscape.id(x).to_string(),
                energy: scale.format(landscape.energy(x)),
            })
            .collect(),
        edges: landscape
            .edges
            .iter()
            .map(|r| {
                let pair = [landscape.id(r.a).to_string(), landscape.id(r.b).to_string()];
                match r.explicit_q {
                    None => EdgeEntry::Pair(pair),
                    Some(q) => EdgeEntry::Weighted {
                        pair,
                        q: format_decimal(q),
                    },
                }
            })
            .collect(),
        energy_scale: (scale.get() != DEFAULT_SCALE).then_some(scale.get()),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("landscape serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::Energy;
    use crate::fixtures;

    #[test]
    fn fig1_fixture_shape() {
        let l = fixtures::fig1();
        assert_eq!(l.len(), 11);
        assert_eq!(l.edges.len(), 10);
        assert_eq!(l.max_degree(), 2);
        let scale = l.scale();
        let expected = [2, 5, 1, 2, 2, 2, 4, 3, 0, 1, 5];
        for (x, units) in expected.into_iter().enumerate() {
            assert_eq!(l.energy(x), Energy::from_units(units, scale));
        }
    }

    #[test]
    fn minimal_two_state_file() {
        let l = parse_landscape(
            r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"1"}],
                "edges":[{"pair":["x","y"],"q":"0.5"}]}"#,
        )
        .unwrap();
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn asymmetric_rates_are_rejected() {
        let err = parse_landscape(
            r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"1"}],
                "edges":[{"pair":["x","y"],"q":"0.7"},{"pair":["y","x"],"q":"0.3"}]}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::AsymmetricEdge("x".into(), "y".into()));
    }

    #[test]
    fn symmetric_double_listing_is_accepted() {
        let l = parse_landscape(
            r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"1"}],
                "edges":[{"pair":["x","y"],"q":"0.5"},{"pair":["y","x"],"q":"0.50"}]}"#,
        )
        .unwrap();
        assert_eq!(l.edges.len(), 1);
    }

    #[test]
    fn validation_errors() {
        let cases = [
            (r#"{"states":[{"id":"x","energy":"0"},{"id":"x","energy":"1"}],"edges":[]}"#,
             Error::DuplicateState("x".into())),
            (r#"{"states":[{"id":"x","energy":"0"}],"edges":[["x","z"]]}"#,
             Error::UnknownStateInEdge("z".into())),
            (r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"1"}],"edges":[]}"#,
             Error::DisconnectedGraph),
            (r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"1"},{"id":"z","energy":"1"}],
                 "edges":[{"pair":["x","y"],"q":"0.6"},{"pair":["x","z"],"q":"0.6"}]}"#,
             Error::RowSumExceedsOne("x".into())),
            (r#"{"states":[{"id":"x","energy":"0.0000001"}],"edges":[]}"#,
             Error::ScaleOverflow("0.0000001".into())),
        ];
        for (text, expected) in cases {
            assert_eq!(parse_landscape(text).unwrap_err(), expected, "{text}");
        }
        for text in [
            "not json",
            r#"{"states":[{"id":"x","energy":"zero"}],"edges":[]}"#,
            r#"{"states":[],"edges":[]}"#,
            r#"{"states":[{"id":"x","energy":"0"}],"edges":[["x","x"]]}"#,
            r#"{"states":[{"id":"x","energy":"0"},{"id":"y","energy":"0"}],"edges":[{"pair":["x","y"],"q":"0"}]}"#,
            r#"{"states":[{"id":"x","energy":"0"}],"edges":[],"extra":1}"#,
            r#"{"states":[{"id":"x","energy":"0"}],"edges":[],"energy_scale":0}"#,
        ] {
            assert!(
                matches!(parse_landscape(text), Err(Error::MalformedInput(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn canonical_output_round_trips() {
        let text = r#"{"states":[{"id":"p","energy":"1.50"},{"id":"q","energy":"-2"}],
                       "edges":[{"pair":["q","p"],"q":"0.250"}],"energy_scale":100}"#;
        let once = to_json(&parse_landscape(text).unwrap());
        let twice = to_json(&parse_landscape(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.contains("\"1.5\""));
        assert!(once.contains("\"0.25\""));
        assert!(once.contains("\"energy_scale\": 100"));
    }
}
