//! Signature grids: instances of the Eulerian orientation counting problem.
//!
//! Vertices carry named signatures; every edge joins two variable slots and
//! implicitly carries the binary disequality, so an assignment of bits to
//! slots contributes only when the two ends of each edge differ.

pub mod brute;
pub mod builtin;
pub mod codec;
pub mod csp;
pub mod random;
pub mod transform;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::signature::Signature;

pub use brute::{brute_force_value, brute_force_value_with_budget, BRUTE_FORCE_BUDGET};
pub use codec::{parse_grid, to_canonical_json};
pub use csp::{csp_to_eo, flatten_to_csp, CSPInstance, Clause};
pub use transform::{dual_grid, pi_transform, tau_set};

/// `(vertex, slot)` with 0-based vertices and 1-based slots.
pub type Endpoint = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EOGrid {
    signatures: BTreeMap<String, Signature>,
    vertices: Vec<String>,
    edges: Vec<(Endpoint, Endpoint)>,
    adjacency: Vec<Vec<Endpoint>>,
}

impl EOGrid {
    /// Validates slot coverage: each slot of each vertex lies on exactly one edge.
    pub fn new(
        signatures: BTreeMap<String, Signature>,
        vertices: Vec<String>,
        edges: Vec<(Endpoint, Endpoint)>,
    ) -> Result<Self> {
        let mut arities = Vec::with_capacity(vertices.len());
        for (v, name) in vertices.iter().enumerate() {
            let sig = signatures
                .get(name)
                .ok_or_else(|| Error::InvalidGrid(format!("vertex {v}: unknown signature {name:?}")))?;
            arities.push(sig.arity());
        }
        let mut adjacency: Vec<Vec<Option<Endpoint>>> = arities.iter().map(|&a| vec![None; a + 1]).collect();
        for (k, &(a, b)) in edges.iter().enumerate() {
            for (end, other) in [(a, b), (b, a)] {
                let (v, s) = end;
                if v >= vertices.len() {
                    return Err(Error::InvalidGrid(format!("edge {k}: no vertex {v}")));
                }
                if s == 0 || s > arities[v] {
                    return Err(Error::InvalidGrid(format!(
                        "edge {k}: slot {s} out of range for vertex {v} of arity {}",
                        arities[v]
                    )));
                }
                if adjacency[v][s].replace(other).is_some() {
                    return Err(Error::InvalidGrid(format!(
                        "slot coverage: vertex {v} slot {s} is on more than one edge"
                    )));
                }
            }
            if a == b {
                return Err(Error::InvalidGrid(format!("edge {k}: both ends are the same slot")));
            }
        }
        let mut adj = Vec::with_capacity(vertices.len());
        for (v, slots) in adjacency.into_iter().enumerate() {
            let mut row = Vec::with_capacity(slots.len());
            for (s, other) in slots.into_iter().enumerate().skip(1) {
                row.push(other.ok_or_else(|| {
                    Error::InvalidGrid(format!(
                        "slot coverage: vertex {v} (arity {}) slot {s} is not on any edge",
                        arities[v]
                    ))
                })?);
            }
            adj.push(row);
        }
        Ok(EOGrid { signatures, vertices, edges, adjacency: adj })
    }

    /// A grid whose vertex `v` carries its own signature named `v{v}`.
    pub fn from_vertex_signatures(sigs: Vec<Signature>, edges: Vec<(Endpoint, Endpoint)>) -> Result<Self> {
        let names: Vec<String> = (0..sigs.len()).map(|v| format!("v{v}")).collect();
        let signatures = names.iter().cloned().zip(sigs).collect();
        Self::new(signatures, names, edges)
    }

    /// Same edges with each vertex's signature replaced.
    pub fn with_vertex_signatures(&self, sigs: Vec<Signature>) -> Result<Self> {
        if sigs.len() != self.vertices.len() {
            return Err(Error::InvalidGrid("vertex count changed".into()));
        }
        for (v, s) in sigs.iter().enumerate() {
            if s.arity() != self.arity(v) {
                return Err(Error::InvalidGrid(format!("vertex {v}: arity changed")));
            }
        }
        Self::from_vertex_signatures(sigs, self.edges.clone())
    }

    pub fn empty() -> Self {
        EOGrid { signatures: BTreeMap::new(), vertices: Vec::new(), edges: Vec::new(), adjacency: Vec::new() }
    }

    pub fn signatures(&self) -> &BTreeMap<String, Signature> {
        &self.signatures
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Endpoint, Endpoint)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_signature(&self, v: usize) -> &Signature {
        &self.signatures[&self.vertices[v]]
    }

    /// Signatures per vertex, in vertex order.
    pub fn vertex_signatures(&self) -> Vec<Signature> {
        (0..self.vertex_count()).map(|v| self.vertex_signature(v).clone()).collect()
    }

    pub fn arity(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// The slot at the other end of the edge through `(v, slot)`.
    pub fn opposite(&self, v: usize, slot: usize) -> Endpoint {
        self.adjacency[v][slot - 1]
    }

    /// Signatures actually used by some vertex.
    pub fn used_signatures(&self) -> Vec<(&str, &Signature)> {
        let mut names: Vec<&String> = self.vertices.iter().collect();
        names.sort();
        names.dedup();
        names.into_iter().map(|n| (n.as_str(), &self.signatures[n])).collect()
    }
}

/// Incremental construction of a grid.
#[derive(Default)]
pub struct GridBuilder {
    signatures: BTreeMap<String, Signature>,
    vertices: Vec<String>,
    edges: Vec<(Endpoint, Endpoint)>,
}

impl GridBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn signature(mut self, name: &str, sig: Signature) -> Self {
        self.signatures.insert(name.to_string(), sig);
        self
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn vertices(mut self, name: &str, count: usize) -> Self {
        self.vertices.extend(std::iter::repeat(name.to_string()).take(count));
        self
    }

    pub fn edge(mut self, a: Endpoint, b: Endpoint) -> Self {
        self.edges.push((a, b));
        self
    }

    pub fn build(self) -> Result<EOGrid> {
        EOGrid::new(self.signatures, self.vertices, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_coverage_is_enforced() {
        let neq4 = Signature::neq(4).unwrap();
        let ok = GridBuilder::new()
            .signature("n", neq4.clone())
            .vertices("n", 2)
            .edge((0, 1), (1, 1))
            .edge((0, 2), (1, 2))
            .edge((0, 3), (1, 3))
            .edge((0, 4), (1, 4))
            .build()
            .unwrap();
        assert_eq!(ok.edges().len(), 4);
        assert_eq!(ok.opposite(1, 3), (0, 3));

        let missing = GridBuilder::new()
            .signature("n", neq4.clone())
            .vertex("n")
            .edge((0, 1), (0, 2))
            .build()
            .unwrap_err();
        assert!(missing.to_string().contains("slot coverage"));
        let twice = GridBuilder::new()
            .signature("n", neq4)
            .vertex("n")
            .edge((0, 1), (0, 2))
            .edge((0, 1), (0, 3))
            .edge((0, 4), (0, 2))
            .build()
            .unwrap_err();
        assert!(twice.to_string().contains("slot coverage"));
        let unknown = GridBuilder::new().vertex("x").build().unwrap_err();
        assert!(unknown.to_string().contains("unknown signature"));
    }
}
