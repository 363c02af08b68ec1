//! JSON interchange format.
//!
//! ```json
//! {
//!   "vertices": ["v1", "v2"],
//!   "edges": ["e"],
//!   "incidences": [
//!     {"id": "i1", "vertex": "v1", "edge": "e", "sign": 1},
//!     {"id": "i2", "vertex": "v2", "edge": "e", "sign": -1}
//!   ]
//! }
//! ```
//!
//! `sign` defaults to `1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{IncidenceHypergraph, IncidenceSpec, OrientedHypergraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceRecord {
    pub id: String,
    pub vertex: String,
    pub edge: String,
    #[serde(default = "one")]
    pub sign: i8,
}

fn one() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphRecord {
    #[serde(default)]
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<String>,
    #[serde(default)]
    pub incidences: Vec<IncidenceRecord>,
}

impl HypergraphRecord {
    pub fn into_oriented(self) -> Result<OrientedHypergraph> {
        if let Some(bad) = self.incidences.iter().find(|i| !(-1..=1).contains(&i.sign)) {
            return Err(Error::Parse(format!(
                "incidence `{}` has sign {}; expected -1, 0 or 1",
                bad.id, bad.sign
            )));
        }
        let signs = self.incidences.iter().map(|i| i.sign).collect();
        let specs = self
            .incidences
            .into_iter()
            .map(|i| IncidenceSpec::new(i.id, i.vertex, i.edge))
            .collect();
        let g = IncidenceHypergraph::from_ids(self.vertices, self.edges, specs)?;
        OrientedHypergraph::new(g, signs)
    }

    pub fn from_oriented(og: &OrientedHypergraph) -> Self {
        let g = og.structure();
        Self {
            vertices: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
            incidences: g
                .incidences()
                .iter()
                .enumerate()
                .map(|(k, i)| IncidenceRecord {
                    id: i.id.clone(),
                    vertex: g.vertices()[i.vertex].clone(),
                    edge: g.edges()[i.edge].clone(),
                    sign: og.sign(k),
                })
                .collect(),
        }
    }
}

pub fn parse_oriented(text: &str) -> Result<OrientedHypergraph> {
    let record: HypergraphRecord = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    record.into_oriented()
}

pub fn to_json(og: &OrientedHypergraph) -> String {
    serde_json::to_string_pretty(&HypergraphRecord::from_oriented(og)).expect("records serialize")
}
