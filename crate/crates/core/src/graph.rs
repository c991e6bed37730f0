//! Finite directed multigraphs with opaque string ids.
//!
//! A graph is a quadruple (vertices, edges, src, rng). Parallel edges and
//! loops are allowed. Everything is immutable after construction and all
//! derived data (fibers, orderings) is deterministic in the lexicographic
//! order of ids.
//!
//! This is the discrete specialization of a topological graph: over a
//! discrete vertex space the conditions on the structure maps (source a
//! local homeomorphism, openness) hold automatically, so nothing of the
//! kind is checked here.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Endpoint, Error, GraphViolation, IdKind, Result};
use crate::id::{EdgeId, VertexId};

/// A finite directed multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteGraph {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    src: BTreeMap<EdgeId, VertexId>,
    rng: BTreeMap<EdgeId, VertexId>,
    // s-fibers and r-fibers, edge ids sorted
    out: BTreeMap<VertexId, Vec<EdgeId>>,
    inc: BTreeMap<VertexId, Vec<EdgeId>>,
}

impl DiscreteGraph {
    /// Validate a raw description and build a graph.
    ///
    /// Either returns the graph or an `Error::Graph` carrying every violation
    /// found (dangling endpoints, duplicate ids).
    pub fn build(
        vertices: Vec<VertexId>,
        edges: Vec<(EdgeId, VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut violations = Vec::new();

        let mut vset: BTreeSet<VertexId> = BTreeSet::new();
        for v in &vertices {
            if !vset.insert(v.clone()) {
                violations.push(GraphViolation::DuplicateId {
                    id: v.to_string(),
                    kind: IdKind::Vertex,
                });
            }
        }

        let mut src = BTreeMap::new();
        let mut rng = BTreeMap::new();
        let mut eset: BTreeSet<EdgeId> = BTreeSet::new();
        for (e, s, r) in &edges {
            if !eset.insert(e.clone()) {
                violations.push(GraphViolation::DuplicateId {
                    id: e.to_string(),
                    kind: IdKind::Edge,
                });
                continue;
            }
            if !vset.contains(s) {
                violations.push(GraphViolation::DanglingEndpoint {
                    edge: e.to_string(),
                    endpoint: Endpoint::Src,
                    missing: s.to_string(),
                });
            }
            if !vset.contains(r) {
                violations.push(GraphViolation::DanglingEndpoint {
                    edge: e.to_string(),
                    endpoint: Endpoint::Rng,
                    missing: r.to_string(),
                });
            }
            src.insert(e.clone(), s.clone());
            rng.insert(e.clone(), r.clone());
        }

        if !violations.is_empty() {
            return Err(Error::Graph(violations));
        }

        let vertices: Vec<VertexId> = vset.into_iter().collect();
        let edge_ids: Vec<EdgeId> = eset.into_iter().collect();

        let mut out: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
        let mut inc: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
        for v in &vertices {
            out.insert(v.clone(), Vec::new());
            inc.insert(v.clone(), Vec::new());
        }
        for e in &edge_ids {
            out.get_mut(&src[e]).unwrap().push(e.clone());
            inc.get_mut(&rng[e]).unwrap().push(e.clone());
        }

        Ok(DiscreteGraph {
            vertices,
            edges: edge_ids,
            src,
            rng,
            out,
            inc,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        Self::build(
            vertices.iter().map(|v| VertexId::from(*v)).collect(),
            edges
                .iter()
                .map(|(e, s, r)| (EdgeId::from(*e), VertexId::from(*s), VertexId::from(*r)))
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self::build(Vec::new(), Vec::new()).unwrap()
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in ascending id order.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.out.contains_key(v)
    }

    pub fn has_edge(&self, e: &EdgeId) -> bool {
        self.src.contains_key(e)
    }

    /// Source of an edge. Panics on an unknown edge id.
    pub fn src(&self, e: &EdgeId) -> &VertexId {
        &self.src[e]
    }

    /// Range of an edge. Panics on an unknown edge id.
    pub fn rng(&self, e: &EdgeId) -> &VertexId {
        &self.rng[e]
    }

    /// The s-fiber s⁻¹(v): edges emitted by `v`, in id order.
    pub fn out_edges(&self, v: &VertexId) -> &[EdgeId] {
        self.out.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// The r-fiber r⁻¹(v): edges received by `v`, in id order.
    pub fn in_edges(&self, v: &VertexId) -> &[EdgeId] {
        self.inc.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of parallel edges from `u` to `v`.
    pub fn multiplicity(&self, u: &VertexId, v: &VertexId) -> usize {
        self.out_edges(u)
            .iter()
            .filter(|e| self.rng(e) == v)
            .count()
    }

    /// Classify vertices into sources, finite receivers and regular vertices.
    ///
    /// On a finite graph every vertex receives finitely many edges, so the
    /// finite receivers are all vertices and the regular vertices are exactly
    /// the non-sources.
    pub fn vertex_classes(&self) -> VertexClassification {
        let sources: Vec<VertexId> = self
            .vertices
            .iter()
            .filter(|v| self.in_edges(v).is_empty())
            .cloned()
            .collect();
        let finite_receivers = self.vertices.clone();
        let regular: Vec<VertexId> = self
            .vertices
            .iter()
            .filter(|v| !self.in_edges(v).is_empty())
            .cloned()
            .collect();
        VertexClassification {
            sources,
            finite_receivers,
            regular,
        }
    }

    /// Stable DOT rendering: nodes in id order, then edges in id order with
    /// the edge id as label. Byte-identical across runs.
    pub fn to_dot(&self) -> String {
        let mut dot = String::from("digraph G {\n");
        for v in &self.vertices {
            dot.push_str(&format!("  {};\n", dot_quote(v.as_str())));
        }
        for e in &self.edges {
            dot.push_str(&format!(
                "  {} -> {} [label={}];\n",
                dot_quote(self.src(e).as_str()),
                dot_quote(self.rng(e).as_str()),
                dot_quote(e.as_str())
            ));
        }
        dot.push_str("}\n");
        dot
    }
}

fn dot_quote(s: &str) -> String {
    let mut quoted = String::with_capacity(s.len() + 2);
    quoted.push('"');
    for ch in s.chars() {
        if ch == '"' || ch == '\\' {
            quoted.push('\\');
        }
        quoted.push(ch);
    }
    quoted.push('"');
    quoted
}

/// The partition of vertices used by the Cuntz-Krieger relation: sources
/// receive nothing, regular vertices receive at least one and finitely many
/// edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClassification {
    pub sources: Vec<VertexId>,
    pub finite_receivers: Vec<VertexId>,
    pub regular: Vec<VertexId>,
}
