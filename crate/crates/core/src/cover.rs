//! Connectivity, free presentations of the fundamental group, universal
//! cover balls via reduced-walk unfolding, and derived (voltage) covers.
//!
//! Connectivity treats edges as traversable in both directions: on a graph
//! with discrete vertex space the continuous pieces of a connecting path are
//! constant, so path connectivity is exactly walk reachability.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::action::{Cocycle, PermAction};
use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::id::{encode_parts, EdgeId, VertexId};
use crate::morphism::GraphMorphism;
use crate::walk::{letters_at, Letter, Walk, DEFAULT_WALK_CAP};

/// Partition of the vertices into walk-reachability classes, each sorted,
/// ordered by their minimal vertex.
pub fn connected_components(graph: &DiscreteGraph) -> Vec<Vec<VertexId>> {
    let mut unseen: BTreeSet<VertexId> = graph.vertices().iter().cloned().collect();
    let mut components = Vec::new();
    while let Some(start) = unseen.iter().next().cloned() {
        let mut component = Vec::new();
        let mut queue = VecDeque::new();
        unseen.remove(&start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for letter in letters_at(graph, &v, true) {
                let w = letter.rng(graph);
                if unseen.remove(w) {
                    queue.push_back(w.clone());
                }
            }
            component.push(v);
        }
        component.sort();
        components.push(component);
    }
    components
}

pub fn is_connected(graph: &DiscreteGraph) -> bool {
    connected_components(graph).len() <= 1
}

/// A free presentation of the fundamental group of a finite connected graph:
/// one generator per edge outside a spanning forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreePresentation {
    pub rank: usize,
    pub generator_edges: Vec<EdgeId>,
    pub spanning_forest: Vec<EdgeId>,
}

/// Deterministic spanning forest: BFS from the minimal unvisited vertex,
/// scanning incident edges (in both directions) in edge-id order.
fn spanning_forest(graph: &DiscreteGraph) -> Vec<EdgeId> {
    let mut forest = Vec::new();
    let mut unseen: BTreeSet<VertexId> = graph.vertices().iter().cloned().collect();
    while let Some(start) = unseen.iter().next().cloned() {
        unseen.remove(&start);
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let mut incident: Vec<(EdgeId, VertexId)> = letters_at(graph, &v, true)
                .into_iter()
                .map(|l| (l.edge().clone(), l.rng(graph).clone()))
                .collect();
            incident.sort();
            for (e, w) in incident {
                if unseen.remove(&w) {
                    forest.push(e);
                    queue.push_back(w);
                }
            }
        }
    }
    forest.sort();
    forest
}

/// Present π₁ of a finite connected graph as a free group: rank
/// |E¹| − |E⁰| + 1, generated by the edges outside a spanning tree.
///
/// A connected graph is nonempty: the fundamental group needs a basepoint.
pub fn pi1_presentation(graph: &DiscreteGraph) -> Result<FreePresentation> {
    if graph.vertex_count() == 0 || !is_connected(graph) {
        return Err(Error::NotConnected);
    }
    let forest = spanning_forest(graph);
    let forest_set: BTreeSet<&EdgeId> = forest.iter().collect();
    let generator_edges: Vec<EdgeId> = graph
        .edges()
        .iter()
        .filter(|e| !forest_set.contains(e))
        .cloned()
        .collect();
    let rank = generator_edges.len();
    debug_assert_eq!(
        rank,
        graph.edge_count() + 1 - graph.vertex_count(),
        "complement of a spanning tree has |E| - |V| + 1 edges"
    );
    Ok(FreePresentation {
        rank,
        generator_edges,
        spanning_forest: forest,
    })
}

/// A finite window of the universal cover: the tree of reduced walks from a
/// basepoint up to a given length.
#[derive(Debug, Clone)]
pub struct CoverBall {
    pub tree: DiscreteGraph,
    /// Covering map onto the base: a walk goes to its terminal vertex, a
    /// lifted edge to the base edge it lifts.
    pub covering_map: GraphMorphism,
    pub radius: usize,
    pub basepoint: VertexId,
    /// Walks of length exactly `radius`; covering properties hold only at
    /// interior (non-boundary) vertices of the window.
    pub boundary: Vec<VertexId>,
}

impl CoverBall {
    pub fn is_boundary(&self, v: &VertexId) -> bool {
        self.boundary.binary_search(v).is_ok()
    }

    /// Fiber bijectivity of the covering map over every interior vertex:
    /// the s- and r-fibers of a walk of length < radius match the base
    /// fibers of its terminal vertex exactly.
    pub fn interior_fibers_biject(&self) -> bool {
        let base = self.covering_map.codomain();
        for v in self.tree.vertices() {
            if self.is_boundary(v) {
                continue;
            }
            let image = self.covering_map.apply_vertex(v);
            for (fiber, base_fiber) in [
                (self.tree.out_edges(v), base.out_edges(image)),
                (self.tree.in_edges(v), base.in_edges(image)),
            ] {
                if fiber.len() != base_fiber.len() {
                    return false;
                }
                let images: BTreeSet<&EdgeId> = fiber
                    .iter()
                    .map(|e| self.covering_map.apply_edge(e))
                    .collect();
                if images.len() != fiber.len() {
                    return false;
                }
            }
        }
        true
    }
}

/// Unfold reduced walks from `base` up to length `radius` into a tree.
///
/// Tree vertices are reduced walks; the walk w' extending w by a letter is
/// joined to w by a lift of the letter's edge, oriented as in the base. The
/// covering map sends a walk to its terminal vertex.
pub fn universal_cover_ball(
    graph: &DiscreteGraph,
    base: &VertexId,
    radius: usize,
) -> Result<CoverBall> {
    universal_cover_ball_capped(graph, base, radius, DEFAULT_WALK_CAP)
}

pub fn universal_cover_ball_capped(
    graph: &DiscreteGraph,
    base: &VertexId,
    radius: usize,
    cap: usize,
) -> Result<CoverBall> {
    if !graph.has_vertex(base) {
        return Err(Error::Parse(format!("unknown basepoint {base}")));
    }
    if !is_connected(graph) {
        return Err(Error::NotConnected);
    }

    let mut vertices: Vec<VertexId> = Vec::new();
    let mut v_proj: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut edges: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();
    let mut e_proj: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut boundary = Vec::new();

    let root = Walk::trivial(base.clone());
    let root_id = VertexId::new(root.id());
    vertices.push(root_id.clone());
    v_proj.insert(root_id.clone(), base.clone());
    if radius == 0 {
        boundary.push(root_id);
    }
    let mut frontier = vec![root];

    for depth in 1..=radius {
        let mut next = Vec::new();
        for walk in &frontier {
            let walk_id = VertexId::new(walk.id());
            for letter in letters_at(graph, walk.terminal(), true) {
                if let Some(first) = walk.letters().first() {
                    if first.cancels(&letter) {
                        continue;
                    }
                }
                let mut letters = Vec::with_capacity(walk.len() + 1);
                letters.push(letter.clone());
                letters.extend(walk.letters().iter().cloned());
                let extended = Walk::new(graph, walk.basepoint().clone(), letters)
                    .expect("extension by a composable letter is a walk");
                let extended_id = VertexId::new(extended.id());
                vertices.push(extended_id.clone());
                v_proj.insert(extended_id.clone(), extended.terminal().clone());
                if vertices.len() > cap {
                    return Err(Error::ExplosionGuard { cap });
                }
                // a forward letter lifts its edge from the old walk to the
                // new one; a backward letter lifts it the other way round
                let (edge, from, to) = match &letter {
                    Letter::Fwd(e) => (e.clone(), walk_id.clone(), extended_id.clone()),
                    Letter::Rev(e) => (e.clone(), extended_id.clone(), walk_id.clone()),
                };
                let lift_source_walk = if matches!(letter, Letter::Fwd(_)) {
                    walk.id()
                } else {
                    extended.id()
                };
                let lift_id = EdgeId::new(encode_parts(&[edge.as_str(), &lift_source_walk], '|'));
                e_proj.insert(lift_id.clone(), edge);
                edges.push((lift_id, from, to));
                if depth == radius {
                    boundary.push(VertexId::new(extended.id()));
                }
                next.push(extended);
            }
        }
        frontier = next;
    }

    let tree = DiscreteGraph::build(vertices, edges)?;
    let covering_map = GraphMorphism::new(tree.clone(), graph.clone(), v_proj, e_proj)?;
    boundary.sort();
    Ok(CoverBall {
        tree,
        covering_map,
        radius,
        basepoint: base.clone(),
        boundary,
    })
}

/// Build the derived cover of a cocycle through a right action σ on a finite
/// fiber F: vertices E⁰ × F, edges E¹ × F, s(e,x) = (s(e),x) and
/// r(e,x) = (r(e), x·σ(c(e))). The projection is a covering; with σ the
/// regular representation the result is the skew product.
pub fn derived_cover(
    cocycle: &Cocycle,
    sigma: &PermAction,
) -> Result<(DiscreteGraph, GraphMorphism)> {
    if cocycle.group() != sigma.group() {
        return Err(Error::NotAnAction(
            "the fiber action and the cocycle use different groups".into(),
        ));
    }
    let base = cocycle.graph();
    let fiber: Vec<String> = (0..sigma.degree()).map(|x| x.to_string()).collect();

    let vid = |v: &VertexId, x: usize| -> VertexId {
        VertexId::new(encode_parts(&[v.as_str(), &fiber[x]], '|'))
    };
    let eid = |e: &EdgeId, x: usize| -> EdgeId {
        EdgeId::new(encode_parts(&[e.as_str(), &fiber[x]], '|'))
    };

    let mut vertices = Vec::new();
    let mut v_proj = BTreeMap::new();
    for v in base.vertices() {
        for x in 0..sigma.degree() {
            let id = vid(v, x);
            v_proj.insert(id.clone(), v.clone());
            vertices.push(id);
        }
    }
    let mut edges = Vec::new();
    let mut e_proj = BTreeMap::new();
    for e in base.edges() {
        for x in 0..sigma.degree() {
            let id = eid(e, x);
            let target = sigma.apply(x, cocycle.label(e));
            e_proj.insert(id.clone(), e.clone());
            edges.push((id, vid(base.src(e), x), vid(base.rng(e), target)));
        }
    }
    let cover = DiscreteGraph::build(vertices, edges)?;
    let projection = GraphMorphism::new(cover.clone(), base.clone(), v_proj, e_proj)?;
    Ok((cover, projection))
}
