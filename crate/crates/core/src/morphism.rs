//! Graph morphisms, covering analysis and isomorphism search.
//!
//! A morphism is a pair of total maps (on vertices and edges) making the
//! source and range squares commute. A covering, in the discrete setting, is
//! a surjective morphism that restricts to a bijection on every s-fiber and
//! every r-fiber; this is exactly unique path lifting for both structure
//! maps.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::id::{EdgeId, VertexId};

pub const DEFAULT_ISO_VERTEX_BOUND: usize = 64;
pub const DEFAULT_ISO_EDGE_BOUND: usize = 256;

#[derive(Debug, Clone)]
pub struct GraphMorphism {
    domain: DiscreteGraph,
    codomain: DiscreteGraph,
    v_map: BTreeMap<VertexId, VertexId>,
    e_map: BTreeMap<EdgeId, EdgeId>,
}

/// Flags reported by [`GraphMorphism::analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub is_morphism: bool,
    /// First edge whose square fails to commute, when `is_morphism` is false.
    pub offending_edge: Option<EdgeId>,
    pub is_surjective: bool,
    pub has_unique_s_lifting: bool,
    pub is_covering: bool,
}

impl GraphMorphism {
    /// Build a morphism candidate. Fails with `NotAMorphism` when the maps are
    /// not total on the domain or point outside the codomain; commutativity of
    /// the squares is reported by [`analyze`](Self::analyze), not enforced
    /// here.
    pub fn new(
        domain: DiscreteGraph,
        codomain: DiscreteGraph,
        v_map: BTreeMap<VertexId, VertexId>,
        e_map: BTreeMap<EdgeId, EdgeId>,
    ) -> Result<Self> {
        for v in domain.vertices() {
            match v_map.get(v) {
                None => {
                    return Err(Error::NotAMorphism {
                        reason: format!("v_map is not defined on vertex {v}"),
                    })
                }
                Some(w) if !codomain.has_vertex(w) => {
                    return Err(Error::NotAMorphism {
                        reason: format!("v_map sends {v} to missing vertex {w}"),
                    })
                }
                _ => {}
            }
        }
        for e in domain.edges() {
            match e_map.get(e) {
                None => {
                    return Err(Error::NotAMorphism {
                        reason: format!("e_map is not defined on edge {e}"),
                    })
                }
                Some(f) if !codomain.has_edge(f) => {
                    return Err(Error::NotAMorphism {
                        reason: format!("e_map sends {e} to missing edge {f}"),
                    })
                }
                _ => {}
            }
        }
        Ok(GraphMorphism {
            domain,
            codomain,
            v_map,
            e_map,
        })
    }

    pub fn identity(graph: &DiscreteGraph) -> Self {
        let v_map = graph
            .vertices()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        let e_map = graph
            .edges()
            .iter()
            .map(|e| (e.clone(), e.clone()))
            .collect();
        GraphMorphism {
            domain: graph.clone(),
            codomain: graph.clone(),
            v_map,
            e_map,
        }
    }

    pub fn domain(&self) -> &DiscreteGraph {
        &self.domain
    }

    pub fn codomain(&self) -> &DiscreteGraph {
        &self.codomain
    }

    pub fn v_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.v_map
    }

    pub fn e_map(&self) -> &BTreeMap<EdgeId, EdgeId> {
        &self.e_map
    }

    /// Image of a domain vertex. Panics on an unknown vertex.
    pub fn apply_vertex(&self, v: &VertexId) -> &VertexId {
        &self.v_map[v]
    }

    /// Image of a domain edge. Panics on an unknown edge.
    pub fn apply_edge(&self, e: &EdgeId) -> &EdgeId {
        &self.e_map[e]
    }

    /// Both maps bijective onto the codomain.
    pub fn is_bijective(&self) -> bool {
        let v_images: BTreeSet<&VertexId> = self.v_map.values().collect();
        let e_images: BTreeSet<&EdgeId> = self.e_map.values().collect();
        v_images.len() == self.domain.vertex_count()
            && v_images.len() == self.codomain.vertex_count()
            && e_images.len() == self.domain.edge_count()
            && e_images.len() == self.codomain.edge_count()
    }

    /// Invert a bijective morphism.
    pub fn inverse(&self) -> Option<GraphMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let v_map = self
            .v_map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let e_map = self
            .e_map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        Some(GraphMorphism {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            v_map,
            e_map,
        })
    }

    /// Compose with another morphism (`self` after `first`).
    pub fn compose(&self, first: &GraphMorphism) -> Result<GraphMorphism> {
        let v_map: BTreeMap<VertexId, VertexId> = first
            .v_map
            .iter()
            .map(|(a, b)| (a.clone(), self.v_map[b].clone()))
            .collect();
        let e_map: BTreeMap<EdgeId, EdgeId> = first
            .e_map
            .iter()
            .map(|(a, b)| (a.clone(), self.e_map[b].clone()))
            .collect();
        GraphMorphism::new(first.domain.clone(), self.codomain.clone(), v_map, e_map)
    }

    /// Compute the morphism/covering report.
    pub fn analyze(&self) -> MorphismReport {
        let mut is_morphism = true;
        let mut offending_edge = None;
        for e in self.domain.edges() {
            let img = &self.e_map[e];
            let src_ok = self.v_map[self.domain.src(e)] == *self.codomain.src(img);
            let rng_ok = self.v_map[self.domain.rng(e)] == *self.codomain.rng(img);
            if !src_ok || !rng_ok {
                is_morphism = false;
                offending_edge = Some(e.clone());
                break;
            }
        }

        let v_images: BTreeSet<&VertexId> = self.v_map.values().collect();
        let e_images: BTreeSet<&EdgeId> = self.e_map.values().collect();
        let is_surjective = v_images.len() == self.codomain.vertex_count()
            && e_images.len() == self.codomain.edge_count();

        let mut has_unique_s_lifting = is_morphism && is_surjective;
        if has_unique_s_lifting {
            has_unique_s_lifting = self.fibers_biject(true);
        }
        let mut is_covering = has_unique_s_lifting;
        if is_covering {
            is_covering = self.fibers_biject(false);
        }

        MorphismReport {
            is_morphism,
            offending_edge,
            is_surjective,
            has_unique_s_lifting,
            is_covering,
        }
    }

    /// Check that `e_map` restricts to a bijection on the fiber over every
    /// domain vertex (s-fibers when `source` is true, r-fibers otherwise).
    fn fibers_biject(&self, source: bool) -> bool {
        for v in self.domain.vertices() {
            let w = &self.v_map[v];
            let (dom_fiber, cod_fiber) = if source {
                (self.domain.out_edges(v), self.codomain.out_edges(w))
            } else {
                (self.domain.in_edges(v), self.codomain.in_edges(w))
            };
            if dom_fiber.len() != cod_fiber.len() {
                return false;
            }
            let images: BTreeSet<&EdgeId> = dom_fiber.iter().map(|e| &self.e_map[e]).collect();
            if images.len() != dom_fiber.len() {
                return false;
            }
        }
        true
    }
}

/// Search for an isomorphism between two graphs.
///
/// Deterministic backtracking over vertex bijections in lexicographic id
/// order with degree-profile pruning; the edge bijection matches parallel
/// edges in id order. Returns `Ok(None)` when the graphs are not isomorphic.
pub fn find_isomorphism(e: &DiscreteGraph, f: &DiscreteGraph) -> Result<Option<GraphMorphism>> {
    find_isomorphism_bounded(e, f, DEFAULT_ISO_VERTEX_BOUND, DEFAULT_ISO_EDGE_BOUND)
}

pub fn find_isomorphism_bounded(
    e: &DiscreteGraph,
    f: &DiscreteGraph,
    max_vertices: usize,
    max_edges: usize,
) -> Result<Option<GraphMorphism>> {
    for g in [e, f] {
        if g.vertex_count() > max_vertices || g.edge_count() > max_edges {
            return Err(Error::SizeBoundExceeded {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                max_vertices,
                max_edges,
            });
        }
    }
    if e.vertex_count() != f.vertex_count() || e.edge_count() != f.edge_count() {
        return Ok(None);
    }

    let profile = |g: &DiscreteGraph, v: &VertexId| -> (usize, usize, usize) {
        (
            g.out_edges(v).len(),
            g.in_edges(v).len(),
            g.multiplicity(v, v),
        )
    };

    let dom: Vec<VertexId> = e.vertices().to_vec();
    let cod: Vec<VertexId> = f.vertices().to_vec();

    {
        let mut dp: Vec<_> = dom.iter().map(|v| profile(e, v)).collect();
        let mut cp: Vec<_> = cod.iter().map(|v| profile(f, v)).collect();
        dp.sort_unstable();
        cp.sort_unstable();
        if dp != cp {
            return Ok(None);
        }
    }

    let mut assignment: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    if !assign(e, f, &dom, &cod, &profile, 0, &mut assignment, &mut used) {
        return Ok(None);
    }

    // Pair parallel edges in id order within each mapped endpoint pair.
    let mut e_map: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut grouped: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    for edge in e.edges() {
        grouped
            .entry((e.src(edge).clone(), e.rng(edge).clone()))
            .or_default()
            .push(edge.clone());
    }
    for ((u, v), dom_edges) in grouped {
        let fu = assignment[&u].clone();
        let fv = assignment[&v].clone();
        let cod_edges: Vec<EdgeId> = f
            .out_edges(&fu)
            .iter()
            .filter(|c| f.rng(c) == &fv)
            .cloned()
            .collect();
        debug_assert_eq!(dom_edges.len(), cod_edges.len());
        for (a, b) in dom_edges.into_iter().zip(cod_edges) {
            e_map.insert(a, b);
        }
    }

    let morphism = GraphMorphism::new(e.clone(), f.clone(), assignment, e_map)?;
    debug_assert!(morphism.analyze().is_morphism);
    Ok(Some(morphism))
}

#[allow(clippy::too_many_arguments)]
fn assign(
    e: &DiscreteGraph,
    f: &DiscreteGraph,
    dom: &[VertexId],
    cod: &[VertexId],
    profile: &dyn Fn(&DiscreteGraph, &VertexId) -> (usize, usize, usize),
    depth: usize,
    assignment: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
) -> bool {
    if depth == dom.len() {
        return true;
    }
    let v = &dom[depth];
    let vp = profile(e, v);
    for w in cod {
        if used.contains(w) || profile(f, w) != vp {
            continue;
        }
        // multiplicities to and from every already-assigned vertex must match
        let consistent = assignment.iter().all(|(u, fu)| {
            e.multiplicity(v, u) == f.multiplicity(w, fu)
                && e.multiplicity(u, v) == f.multiplicity(fu, w)
        });
        if !consistent {
            continue;
        }
        assignment.insert(v.clone(), w.clone());
        used.insert(w.clone());
        if assign(e, f, dom, cod, profile, depth + 1, assignment, used) {
            return true;
        }
        assignment.remove(v);
        used.remove(w);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> DiscreteGraph {
        DiscreteGraph::from_parts(&["0", "1"], &[("e0", "0", "1"), ("e1", "1", "0")]).unwrap()
    }

    fn bouquet(n: usize) -> DiscreteGraph {
        let edges: Vec<(String, &str, &str)> =
            (0..n).map(|i| (format!("e{i}"), "v", "v")).collect();
        let refs: Vec<(&str, &str, &str)> =
            edges.iter().map(|(e, s, r)| (e.as_str(), *s, *r)).collect();
        DiscreteGraph::from_parts(&["v"], &refs).unwrap()
    }

    #[test]
    fn identity_has_all_flags() {
        for g in [two_cycle(), bouquet(2), DiscreteGraph::empty()] {
            let report = GraphMorphism::identity(&g).analyze();
            assert!(report.is_morphism);
            assert!(report.is_surjective);
            assert!(report.has_unique_s_lifting);
            assert!(report.is_covering);
        }
    }

    #[test]
    fn two_cycle_covers_the_loop() {
        // wrap the 2-cycle around one vertex with one loop; both fiber
        // bijections hold, checked here by enumeration
        let base = DiscreteGraph::from_parts(&["v"], &[("e", "v", "v")]).unwrap();
        let cover = two_cycle();
        let v_map = [("0", "v"), ("1", "v")]
            .into_iter()
            .map(|(a, b)| (VertexId::from(a), VertexId::from(b)))
            .collect();
        let e_map = [("e0", "e"), ("e1", "e")]
            .into_iter()
            .map(|(a, b)| (EdgeId::from(a), EdgeId::from(b)))
            .collect();
        let q = GraphMorphism::new(cover.clone(), base.clone(), v_map, e_map).unwrap();
        let report = q.analyze();
        assert!(report.is_morphism);
        assert!(report.is_covering);
        // fiber bijections by hand: each vertex of the 2-cycle emits and
        // receives exactly one edge, as does v in the base
        for v in cover.vertices() {
            assert_eq!(cover.out_edges(v).len(), 1);
            assert_eq!(cover.in_edges(v).len(), 1);
        }
        assert_eq!(base.out_edges(&"v".into()).len(), 1);
    }

    #[test]
    fn collapsing_two_loops_onto_one_is_not_s_lifting() {
        let dom = bouquet(2);
        let cod = bouquet(1);
        let v_map = [(VertexId::from("v"), VertexId::from("v"))]
            .into_iter()
            .collect();
        let e_map = [
            (EdgeId::from("e0"), EdgeId::from("e0")),
            (EdgeId::from("e1"), EdgeId::from("e0")),
        ]
        .into_iter()
        .collect();
        let phi = GraphMorphism::new(dom, cod, v_map, e_map).unwrap();
        let report = phi.analyze();
        assert!(report.is_morphism);
        assert!(report.is_surjective);
        assert!(!report.has_unique_s_lifting);
        assert!(!report.is_covering);
    }

    #[test]
    fn non_commuting_square_is_flagged_with_edge() {
        let g = two_cycle();
        let v_map = [("0", "1"), ("1", "0")]
            .into_iter()
            .map(|(a, b)| (VertexId::from(a), VertexId::from(b)))
            .collect();
        // swap vertices but fix edges: squares cannot commute
        let e_map = [("e0", "e0"), ("e1", "e1")]
            .into_iter()
            .map(|(a, b)| (EdgeId::from(a), EdgeId::from(b)))
            .collect();
        let phi = GraphMorphism::new(g.clone(), g, v_map, e_map).unwrap();
        let report = phi.analyze();
        assert!(!report.is_morphism);
        assert_eq!(report.offending_edge, Some(EdgeId::from("e0")));
    }

    #[test]
    fn missing_edge_image_is_not_a_morphism() {
        let g = two_cycle();
        let v_map = g
            .vertices()
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        let e_map = [(EdgeId::from("e0"), EdgeId::from("e0"))]
            .into_iter()
            .collect();
        let err = GraphMorphism::new(g.clone(), g, v_map, e_map).unwrap_err();
        assert_eq!(err.name(), "NotAMorphism");
    }

    #[test]
    fn isomorphism_of_equal_graphs_is_identity() {
        let g = two_cycle();
        let iso = find_isomorphism(&g, &g).unwrap().unwrap();
        assert_eq!(iso.apply_vertex(&"0".into()), &VertexId::from("0"));
        assert_eq!(iso.apply_vertex(&"1".into()), &VertexId::from("1"));
    }

    #[test]
    fn isomorphism_of_relabeled_two_cycle() {
        let g = two_cycle();
        let h =
            DiscreteGraph::from_parts(&["a", "b"], &[("x", "a", "b"), ("y", "b", "a")]).unwrap();
        let iso = find_isomorphism(&g, &h).unwrap().unwrap();
        let report = iso.analyze();
        assert!(report.is_morphism);
        assert!(iso.is_bijective());
        let inv = iso.inverse().unwrap();
        assert!(inv.analyze().is_morphism);
        let round = inv.compose(&iso).unwrap();
        for v in g.vertices() {
            assert_eq!(round.apply_vertex(v), v);
        }
    }

    #[test]
    fn two_cycle_is_not_the_bouquet() {
        assert!(find_isomorphism(&two_cycle(), &bouquet(2))
            .unwrap()
            .is_none());
    }

    #[test]
    fn parallel_edges_must_match() {
        let g =
            DiscreteGraph::from_parts(&["u", "v"], &[("e0", "u", "v"), ("e1", "u", "v")]).unwrap();
        let h =
            DiscreteGraph::from_parts(&["u", "v"], &[("e0", "u", "v"), ("e1", "v", "u")]).unwrap();
        assert!(find_isomorphism(&g, &h).unwrap().is_none());
    }

    #[test]
    fn size_bound_is_enforced() {
        let g = bouquet(3);
        let err = find_isomorphism_bounded(&g, &g, 64, 2).unwrap_err();
        assert_eq!(err.name(), "SizeBoundExceeded");
    }
}
