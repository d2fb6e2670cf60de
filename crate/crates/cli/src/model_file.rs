//! JSON model files:
//!
//! ```text
//! {
//!   "num_vertices": 2,
//!   "edges": [
//!     {"u": 0, "v": 1, "j": 0.5}
//!   ]
//! }
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;
use tractable_ising::model::IsingModel;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("malformed model file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("edge {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index}: duplicate edge between {u} and {v}")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index}: vertex {vertex} out of range for {num_vertices} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, num_vertices: usize },
    #[error("model rejected: {0}")]
    Model(#[from] tractable_ising::Error),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    num_vertices: usize,
    edges: Vec<EdgeRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: usize,
    v: usize,
    j: f64,
}

/// Parses a model file. Edge ids follow the record order.
pub fn parse_model_file(text: &str) -> Result<IsingModel, ModelFileError> {
    let doc: Document = serde_json::from_str(text)?;
    let mut seen = HashSet::with_capacity(doc.edges.len());
    let mut triples = Vec::with_capacity(doc.edges.len());
    for (index, rec) in doc.edges.iter().enumerate() {
        for vertex in [rec.u, rec.v] {
            if vertex >= doc.num_vertices {
                return Err(ModelFileError::VertexOutOfRange { index, vertex, num_vertices: doc.num_vertices });
            }
        }
        if rec.u == rec.v {
            return Err(ModelFileError::SelfLoop { index, vertex: rec.u });
        }
        let (u, v) = (rec.u.min(rec.v), rec.u.max(rec.v));
        if !seen.insert((u, v)) {
            return Err(ModelFileError::DuplicateEdge { index, u, v });
        }
        triples.push((rec.u, rec.v, rec.j));
    }
    Ok(IsingModel::from_triples(doc.num_vertices, &triples)?)
}

/// Canonical text of `m`: `u < v` in every record, edges in id order, one
/// record per line and couplings in shortest round-trip form.
pub fn write_model_file(m: &IsingModel) -> String {
    let mut out = format!("{{\n  \"num_vertices\": {},\n  \"edges\": [", m.num_vertices());
    let triples = m.triples();
    for (i, &(u, v, j)) in triples.iter().enumerate() {
        let sep = if i + 1 < triples.len() { "," } else { "" };
        let j = serde_json::to_string(&j).expect("couplings are finite");
        let _ = write!(out, "\n    {{\"u\": {}, \"v\": {}, \"j\": {j}}}{sep}", u.min(v), u.max(v));
    }
    if !triples.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let m = parse_model_file(r#"{"num_vertices": 2, "edges": [{"u": 0, "v": 1, "j": 0.5}]}"#).unwrap();
        assert_eq!(m.triples(), vec![(0, 1, 0.5)]);
    }

    #[test]
    fn named_errors() {
        let dup = r#"{"num_vertices": 3, "edges": [{"u": 0, "v": 1, "j": 1}, {"u": 1, "v": 0, "j": 2}]}"#;
        assert!(matches!(parse_model_file(dup), Err(ModelFileError::DuplicateEdge { index: 1, u: 0, v: 1 })));
        let self_loop = r#"{"num_vertices": 1, "edges": [{"u": 0, "v": 0, "j": 1}]}"#;
        assert!(matches!(parse_model_file(self_loop), Err(ModelFileError::SelfLoop { vertex: 0, .. })));
        let range = r#"{"num_vertices": 2, "edges": [{"u": 0, "v": 2, "j": 1}]}"#;
        assert!(matches!(parse_model_file(range), Err(ModelFileError::VertexOutOfRange { vertex: 2, .. })));
        let extra = r#"{"num_vertices": 2, "edges": [], "h": [0, 0]}"#;
        assert!(matches!(parse_model_file(extra), Err(ModelFileError::Malformed(_))));
        let missing_j = r#"{"num_vertices": 2, "edges": [{"u": 0, "v": 1}]}"#;
        assert!(matches!(parse_model_file(missing_j), Err(ModelFileError::Malformed(_))));
    }

    #[test]
    fn canonical_round_trip() {
        let text = "{\n  \"num_vertices\": 3,\n  \"edges\": [\n    {\"u\": 0, \"v\": 2, \"j\": -0.1},\n    {\"u\": 1, \"v\": 2, \"j\": 1e-300}\n  ]\n}\n";
        assert_eq!(write_model_file(&parse_model_file(text).unwrap()), text);
        let empty = "{\n  \"num_vertices\": 4,\n  \"edges\": []\n}\n";
        assert_eq!(write_model_file(&parse_model_file(empty).unwrap()), empty);
    }

    #[test]
    fn writer_orders_endpoints() {
        let m = parse_model_file(r#"{"num_vertices": 2, "edges": [{"u": 1, "v": 0, "j": 0.25}]}"#).unwrap();
        assert!(write_model_file(&m).contains("{\"u\": 0, \"v\": 1, \"j\": 0.25}"));
    }
}
