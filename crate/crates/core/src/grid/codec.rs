//! JSON grid files.
//!
//! ```json
//! {
//!   "signatures": {"n4": {"arity": 4, "rows": [{"bits": "0011", "value": "1 0 0 0"},
//!                                                {"bits": "1100", "value": 1}]}},
//!   "vertices": [{"sig": "n4"}, {"sig": "n4"}],
//!   "edges": [[[0, 1], [1, 1]], [[0, 2], [1, 2]], [[0, 3], [1, 3]], [[0, 4], [1, 4]]]
//! }
//! ```
//!
//! A signature may instead be given as `{"symmetric": [v0, …, vr]}`. Files
//! without `vertices`/`edges` describe a bare signature set.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EOGrid, Endpoint};
use crate::arith::ExactComplex;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowLiteral {
    bits: String,
    value: ExactComplex,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureLiteral {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rows: Option<Vec<RowLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetric: Option<Vec<ExactComplex>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexLiteral {
    sig: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridLiteral {
    signatures: BTreeMap<String, SignatureLiteral>,
    #[serde(default)]
    vertices: Vec<VertexLiteral>,
    #[serde(default)]
    edges: Vec<[[usize; 2]; 2]>,
}

impl SignatureLiteral {
    pub fn from_signature(f: &Signature) -> Self {
        let mut rows: Vec<RowLiteral> =
            f.rows().map(|(a, v)| RowLiteral { bits: a.to_string(), value: v.clone() }).collect();
        rows.sort_by(|x, y| x.bits.cmp(&y.bits));
        SignatureLiteral { arity: Some(f.arity()), rows: Some(rows), symmetric: None }
    }

    pub fn to_signature(&self, context: &str) -> Result<Signature> {
        match (&self.rows, &self.symmetric) {
            (Some(_), Some(_)) => Err(Error::Parse(format!("{context}: give either rows or symmetric, not both"))),
            (None, None) => Err(Error::Parse(format!("{context}: missing rows"))),
            (None, Some(values)) => {
                let f = Signature::symmetric(values).map_err(|e| Error::Parse(format!("{context}: {e}")))?;
                if let Some(a) = self.arity {
                    if a != f.arity() {
                        return Err(Error::Parse(format!(
                            "{context}: arity {a} but {} symmetric values",
                            values.len()
                        )));
                    }
                }
                Ok(f)
            }
            (Some(rows), None) => {
                let arity = self.arity.ok_or_else(|| Error::Parse(format!("{context}: missing arity")))?;
                let mut parsed = Vec::with_capacity(rows.len());
                for (k, r) in rows.iter().enumerate() {
                    let bits: BitString =
                        r.bits.parse().map_err(|e| Error::Parse(format!("{context}.rows[{k}]: {e}")))?;
                    parsed.push((bits, r.value.clone()));
                }
                Signature::from_rows(arity, parsed).map_err(|e| Error::Parse(format!("{context}: {e}")))
            }
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

/// Parses and validates a grid file.
pub fn parse_grid(text: &str) -> Result<EOGrid> {
    let lit: GridLiteral = serde_json::from_str(text).map_err(json_error)?;
    let mut signatures = BTreeMap::new();
    for (name, s) in &lit.signatures {
        signatures.insert(name.clone(), s.to_signature(&format!("signatures.{name}"))?);
    }
    let vertices: Vec<String> = lit.vertices.into_iter().map(|v| v.sig).collect();
    let edges: Vec<(Endpoint, Endpoint)> =
        lit.edges.into_iter().map(|[[v, s], [w, t]]| ((v, s), (w, t))).collect();
    EOGrid::new(signatures, vertices, edges)
}

/// Parses a single signature literal.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let lit: SignatureLiteral = serde_json::from_str(text).map_err(json_error)?;
    lit.to_signature("signature")
}

/// Canonical text: names sorted, rows sorted, each edge written with its
/// smaller endpoint first and edges sorted.
pub fn to_canonical_json(g: &EOGrid) -> String {
    let signatures = g
        .signatures()
        .iter()
        .map(|(n, s)| (n.clone(), SignatureLiteral::from_signature(s)))
        .collect();
    let vertices = g.vertices().iter().map(|n| VertexLiteral { sig: n.clone() }).collect();
    let mut edges: Vec<[[usize; 2]; 2]> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            [[a.0, a.1], [b.0, b.1]]
        })
        .collect();
    edges.sort_unstable();
    let lit = GridLiteral { signatures, vertices, edges };
    let mut out = serde_json::to_string_pretty(&lit).expect("grid literal serializes");
    out.push('\n');
    out
}

/// Canonical text of a one-signature file.
pub fn signature_file(name: &str, f: &Signature) -> String {
    let g = EOGrid::new([(name.to_string(), f.clone())].into_iter().collect(), Vec::new(), Vec::new())
        .expect("signature set without vertices");
    to_canonical_json(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_NEQ4: &str = r#"{
        "signatures": {"n4": {"arity": 4, "rows": [{"bits": "0011", "value": "1 0 0 0"},
                                                   {"bits": "1100", "value": 1}]}},
        "vertices": [{"sig": "n4"}, {"sig": "n4"}],
        "edges": [[[0, 1], [1, 1]], [[0, 2], [1, 2]], [[0, 3], [1, 3]], [[1, 4], [0, 4]]]
    }"#;

    #[test]
    fn parses_two_vertex_grid() {
        let g = parse_grid(TWO_NEQ4).unwrap();
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.vertex_signature(0), &Signature::neq(4).unwrap());
    }

    #[test]
    fn canonical_round_trip() {
        let g = parse_grid(TWO_NEQ4).unwrap();
        let text = to_canonical_json(&g);
        let h = parse_grid(&text).unwrap();
        assert_eq!(to_canonical_json(&h), text);
        assert!(text.contains("\"1 0 0 0\""));
    }

    #[test]
    fn reports_errors() {
        let uncovered = r#"{"signatures": {"n4": {"symmetric": [0, 0, 1, 0, 0]}},
                            "vertices": [{"sig": "n4"}],
                            "edges": [[[0, 1], [0, 2]]]}"#;
        assert!(parse_grid(uncovered).unwrap_err().to_string().contains("slot coverage"));
        let unknown = r#"{"signatures": {}, "vertices": [{"sig": "q"}], "edges": []}"#;
        assert!(parse_grid(unknown).unwrap_err().to_string().contains("unknown signature"));
        let bad_number = r#"{"signatures": {"u": {"arity": 1, "rows": [{"bits": "1", "value": "1/0 0 0 0"}]}}}"#;
        let err = parse_grid(bad_number).unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
        let bad_bits = r#"{"signatures": {"u": {"arity": 2, "rows": [{"bits": "1x", "value": 1}]}}}"#;
        assert!(parse_grid(bad_bits).unwrap_err().to_string().contains("position 1"));
        let width = r#"{"signatures": {"u": {"arity": 3, "rows": [{"bits": "10", "value": 1}]}}}"#;
        assert!(parse_grid(width).is_err());
    }

    #[test]
    fn symmetric_literal() {
        let f = parse_signature(r#"{"symmetric": ["0 0 0 0", 1, 0]}"#).unwrap();
        assert_eq!(f, Signature::neq(2).unwrap());
    }
}
