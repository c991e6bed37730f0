//! Group actions on graphs: validation, freeness, quotients, skew products,
//! cocycle extraction and the fiber-cardinality bound.
//!
//! An action stores one vertex map and one edge map per group element
//! (for finite groups: every element; for symbolic groups: the generators
//! and their inverses, with words applied syllable by syllable). Actions on
//! finite index sets (`PermAction`) are kept separately; they drive derived
//! covers and are written as right actions so that the regular
//! representation reproduces the skew product on the nose.
//!
//! Only freeness is ever checked: a finite group acting on a finite graph
//! is automatically proper, and the symbolic kinds are only ever handled
//! through bounded balls, so no properness probe exists here.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::group::{GroupElem, GroupModel};
use crate::id::{encode_parts, EdgeId, VertexId};
use crate::morphism::GraphMorphism;

/// Word-length bound used when probing freeness of symbolic-group actions.
pub const DEFAULT_FREENESS_BOUND: usize = 4;
const BALL_CAP: usize = 1_000_000;

type VMap = BTreeMap<VertexId, VertexId>;
type EMap = BTreeMap<EdgeId, EdgeId>;

#[derive(Debug, Clone)]
pub struct GraphAction {
    group: GroupModel,
    graph: DiscreteGraph,
    act_v: BTreeMap<String, VMap>,
    act_e: BTreeMap<String, EMap>,
}

/// Result of a freeness probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Freeness {
    pub free: bool,
    /// A non-identity element and the vertex it fixes, when not free.
    pub witness: Option<(String, VertexId)>,
}

impl GraphAction {
    /// Build an action from maps for a set of elements: all of a finite
    /// group is reached by closing under composition (the listed elements
    /// must generate), symbolic groups must list exactly their canonical
    /// generators. The result is fully validated.
    pub fn from_generator_maps(
        group: GroupModel,
        graph: DiscreteGraph,
        gens: Vec<(GroupElem, VMap, EMap)>,
    ) -> Result<Self> {
        let action = match &group {
            GroupModel::Finite(_) => {
                let mut act_v: BTreeMap<String, VMap> = BTreeMap::new();
                let mut act_e: BTreeMap<String, EMap> = BTreeMap::new();
                let id_str = group.elem_str(&group.identity());
                act_v.insert(id_str.clone(), identity_vmap(&graph));
                act_e.insert(id_str.clone(), identity_emap(&graph));

                let mut frontier: VecDeque<GroupElem> = VecDeque::new();
                frontier.push_back(group.identity());
                while let Some(g) = frontier.pop_front() {
                    let gv = act_v[&group.elem_str(&g)].clone();
                    let ge = act_e[&group.elem_str(&g)].clone();
                    for (s, sv, se) in &gens {
                        let h = group.mul(&g, s);
                        let key = group.elem_str(&h);
                        if act_v.contains_key(&key) {
                            continue;
                        }
                        // λ_{g·s} = λ_g ∘ λ_s
                        let hv = compose_vmap(&gv, sv)?;
                        let he = compose_emap(&ge, se)?;
                        act_v.insert(key.clone(), hv);
                        act_e.insert(key, he);
                        frontier.push_back(h);
                    }
                }
                let all = group.elements().unwrap();
                if let Some(missing) = all.iter().find(|g| !act_v.contains_key(&group.elem_str(g)))
                {
                    return Err(Error::NotGenerating {
                        missing: group.elem_str(missing),
                    });
                }
                GraphAction {
                    group,
                    graph,
                    act_v,
                    act_e,
                }
            }
            GroupModel::Free { .. } | GroupModel::FreeAbelian { .. } => {
                let canonical = group.symbolic_generators().unwrap();
                let mut by_key: BTreeMap<String, (VMap, EMap)> = BTreeMap::new();
                for (g, vm, em) in gens {
                    by_key.insert(group.elem_str(&g), (vm, em));
                }
                let mut act_v = BTreeMap::new();
                let mut act_e = BTreeMap::new();
                for g in &canonical {
                    let key = group.elem_str(g);
                    let (vm, em) = by_key.remove(&key).ok_or_else(|| {
                        Error::Parse(format!("no map supplied for generator {key}"))
                    })?;
                    // store the inverse maps alongside
                    let inv_key = group.elem_str(&group.inv(g));
                    let ivm = invert_vmap(&vm, &graph)?;
                    let iem = invert_emap(&em, &graph)?;
                    act_v.insert(key.clone(), vm);
                    act_e.insert(key, em);
                    act_v.insert(inv_key.clone(), ivm);
                    act_e.insert(inv_key, iem);
                }
                if let Some(extra) = by_key.keys().next() {
                    return Err(Error::Parse(format!(
                        "{extra} is not a canonical generator of the group"
                    )));
                }
                GraphAction {
                    group,
                    graph,
                    act_v,
                    act_e,
                }
            }
        };
        action.validate()?;
        Ok(action)
    }

    /// Build an action from one map per group element (finite groups only).
    pub fn from_full_maps(
        group: GroupModel,
        graph: DiscreteGraph,
        act_v: BTreeMap<String, VMap>,
        act_e: BTreeMap<String, EMap>,
    ) -> Result<Self> {
        if !group.is_finite() {
            return Err(Error::UnsupportedCase(
                "full action tables exist only for finite groups".into(),
            ));
        }
        for g in group.elements().unwrap() {
            let key = group.elem_str(&g);
            if !act_v.contains_key(&key) || !act_e.contains_key(&key) {
                return Err(Error::Parse(format!("no map supplied for element {key}")));
            }
        }
        let action = GraphAction {
            group,
            graph,
            act_v,
            act_e,
        };
        action.validate()?;
        Ok(action)
    }

    /// The action of the trivial subgroup's worth of structure: every listed
    /// element acts identically. Convenience for tests and trivial quotients.
    pub fn trivial(group: GroupModel, graph: DiscreteGraph) -> Result<Self> {
        match &group {
            GroupModel::Finite(_) => {
                let mut act_v = BTreeMap::new();
                let mut act_e = BTreeMap::new();
                for g in group.elements().unwrap() {
                    act_v.insert(group.elem_str(&g), identity_vmap(&graph));
                    act_e.insert(group.elem_str(&g), identity_emap(&graph));
                }
                Self::from_full_maps(group, graph, act_v, act_e)
            }
            _ => {
                let gens = group
                    .symbolic_generators()
                    .unwrap()
                    .into_iter()
                    .map(|g| (g, identity_vmap(&graph), identity_emap(&graph)))
                    .collect();
                Self::from_generator_maps(group, graph, gens)
            }
        }
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn graph(&self) -> &DiscreteGraph {
        &self.graph
    }

    /// Vertex maps keyed by canonical element rendering.
    pub fn vertex_maps(&self) -> &BTreeMap<String, VMap> {
        &self.act_v
    }

    /// Edge maps keyed by canonical element rendering.
    pub fn edge_maps(&self) -> &BTreeMap<String, EMap> {
        &self.act_e
    }

    pub fn apply_vertex(&self, g: &GroupElem, v: &VertexId) -> VertexId {
        match &self.group {
            GroupModel::Finite(_) => self.act_v[&self.group.elem_str(g)][v].clone(),
            _ => self.apply_word(g, v.clone(), |key, x| self.act_v[key][&x].clone()),
        }
    }

    pub fn apply_edge(&self, g: &GroupElem, e: &EdgeId) -> EdgeId {
        match &self.group {
            GroupModel::Finite(_) => self.act_e[&self.group.elem_str(g)][e].clone(),
            _ => self.apply_word(g, e.clone(), |key, x| self.act_e[key][&x].clone()),
        }
    }

    /// Apply λ for a symbolic word syllable by syllable. λ is a homomorphism,
    /// so λ_{s₁s₂…sₖ}(x) applies the map of sₖ first.
    fn apply_word<T, F>(&self, g: &GroupElem, start: T, step: F) -> T
    where
        F: Fn(&str, T) -> T,
    {
        let syllables: Vec<(usize, i64)> = match g {
            GroupElem::Word(w) => w.clone(),
            GroupElem::Vector(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(g, &e)| (g, e))
                .collect(),
            GroupElem::Finite(_) => panic!("finite element applied through the word path"),
        };
        let gens = self.group.symbolic_generators().unwrap();
        let mut x = start;
        for &(gen, exp) in syllables.iter().rev() {
            let letter = if exp > 0 {
                self.group.elem_str(&gens[gen])
            } else {
                self.group.elem_str(&self.group.inv(&gens[gen]))
            };
            for _ in 0..exp.unsigned_abs() {
                x = step(&letter, x);
            }
        }
        x
    }

    /// Re-run all validation: bijectivity of each stored map, equivariance
    /// with the structure maps, and the homomorphism property (all element
    /// pairs for finite groups, commuting generators for free-abelian ones).
    pub fn validate(&self) -> Result<()> {
        for (key, vm) in &self.act_v {
            let em = self.act_e.get(key).ok_or_else(|| {
                Error::Parse(format!("element {key} has a vertex map but no edge map"))
            })?;
            check_vmap_bijective(key, vm, &self.graph)?;
            check_emap_bijective(key, em, &self.graph)?;
            for e in self.graph.edges() {
                let img = &em[e];
                if vm[self.graph.src(e)] != *self.graph.src(img)
                    || vm[self.graph.rng(e)] != *self.graph.rng(img)
                {
                    return Err(Error::NotEquivariant {
                        element: key.clone(),
                        edge: e.to_string(),
                    });
                }
            }
        }
        match &self.group {
            GroupModel::Finite(_) => {
                let elements = self.group.elements().unwrap();
                for g in &elements {
                    for h in &elements {
                        let gh = self.group.mul(g, h);
                        let gk = self.group.elem_str(g);
                        let hk = self.group.elem_str(h);
                        let ghk = self.group.elem_str(&gh);
                        let composes_v =
                            self.graph.vertices().iter().all(|v| {
                                self.act_v[&gk][&self.act_v[&hk][v]] == self.act_v[&ghk][v]
                            });
                        let composes_e =
                            self.graph.edges().iter().all(|e| {
                                self.act_e[&gk][&self.act_e[&hk][e]] == self.act_e[&ghk][e]
                            });
                        if !composes_v || !composes_e {
                            return Err(Error::NotHomomorphism { g: gk, h: hk });
                        }
                    }
                }
            }
            GroupModel::FreeAbelian { .. } => {
                let gens = self.group.symbolic_generators().unwrap();
                for a in &gens {
                    for b in &gens {
                        let ab = self.group.mul(a, b);
                        let commutes = self.graph.vertices().iter().all(|v| {
                            self.apply_vertex(&ab, v)
                                == self.apply_vertex(b, &self.apply_vertex(a, v))
                        });
                        if !commutes {
                            return Err(Error::NotHomomorphism {
                                g: self.group.elem_str(a),
                                h: self.group.elem_str(b),
                            });
                        }
                    }
                }
            }
            GroupModel::Free { .. } => {
                // a free group has no relations: any choice of automorphisms
                // for the generators is a homomorphism
            }
        }
        Ok(())
    }

    /// Probe freeness: no non-identity element may fix a vertex. Exhaustive
    /// for finite groups; symbolic groups are checked on words up to
    /// [`DEFAULT_FREENESS_BOUND`].
    pub fn is_free(&self) -> Result<Freeness> {
        match &self.group {
            GroupModel::Finite(_) => self.freeness_over(self.group.elements().unwrap()),
            _ => self.is_free_bounded(DEFAULT_FREENESS_BOUND),
        }
    }

    pub fn is_free_bounded(&self, bound: usize) -> Result<Freeness> {
        self.freeness_over(self.group.ball(bound, BALL_CAP)?)
    }

    fn freeness_over(&self, elements: Vec<GroupElem>) -> Result<Freeness> {
        for g in elements {
            if self.group.is_identity(&g) {
                continue;
            }
            for v in self.graph.vertices() {
                if self.apply_vertex(&g, v) == *v {
                    return Ok(Freeness {
                        free: false,
                        witness: Some((self.group.elem_str(&g), v.clone())),
                    });
                }
            }
        }
        Ok(Freeness {
            free: true,
            witness: None,
        })
    }

    /// Check that no non-identity element fixes an edge (finite groups).
    /// Freeness on vertices already implies this; exposed so the implication
    /// can be tested exhaustively.
    pub fn edge_fixing_witness(&self) -> Option<(String, EdgeId)> {
        let elements = self.group.elements()?;
        for g in elements {
            if self.group.is_identity(&g) {
                continue;
            }
            for e in self.graph.edges() {
                if self.apply_edge(&g, e) == *e {
                    return Some((self.group.elem_str(&g), e.clone()));
                }
            }
        }
        None
    }

    fn require_free_finite(&self) -> Result<()> {
        if !self.group.is_finite() {
            return Err(Error::UnsupportedCase(
                "quotients and cocycle extraction need a finite group".into(),
            ));
        }
        let freeness = self.is_free()?;
        if let Some((element, vertex)) = freeness.witness {
            return Err(Error::NotFree {
                element,
                vertex: vertex.to_string(),
            });
        }
        Ok(())
    }

    /// Vertex orbit of `v`, sorted.
    pub fn vertex_orbit(&self, v: &VertexId) -> Vec<VertexId> {
        let elements = self.group.elements().expect("orbits need a finite group");
        let set: BTreeSet<VertexId> = elements.iter().map(|g| self.apply_vertex(g, v)).collect();
        set.into_iter().collect()
    }

    /// Edge orbit of `e`, sorted.
    pub fn edge_orbit(&self, e: &EdgeId) -> Vec<EdgeId> {
        let elements = self.group.elements().expect("orbits need a finite group");
        let set: BTreeSet<EdgeId> = elements.iter().map(|g| self.apply_edge(g, e)).collect();
        set.into_iter().collect()
    }

    /// Quotient of a free action of a finite group: vertices and edges are
    /// orbits, named after their minimal member. The orbit map is a covering.
    pub fn quotient_graph(&self) -> Result<Quotient> {
        self.require_free_finite()?;
        let mut v_map: VMap = BTreeMap::new();
        for v in self.graph.vertices() {
            if v_map.contains_key(v) {
                continue;
            }
            let orbit = self.vertex_orbit(v);
            let rep = orbit[0].clone();
            for w in orbit {
                v_map.insert(w, rep.clone());
            }
        }
        let mut e_map: EMap = BTreeMap::new();
        for e in self.graph.edges() {
            if e_map.contains_key(e) {
                continue;
            }
            let orbit = self.edge_orbit(e);
            let rep = orbit[0].clone();
            for f in orbit {
                e_map.insert(f, rep.clone());
            }
        }
        let q_vertices: BTreeSet<VertexId> = v_map.values().cloned().collect();
        let q_edges: BTreeSet<EdgeId> = e_map.values().cloned().collect();
        let quotient = DiscreteGraph::build(
            q_vertices.into_iter().collect(),
            q_edges
                .into_iter()
                .map(|e| {
                    let s = v_map[self.graph.src(&e)].clone();
                    let r = v_map[self.graph.rng(&e)].clone();
                    (e, s, r)
                })
                .collect(),
        )?;
        let map = GraphMorphism::new(self.graph.clone(), quotient.clone(), v_map, e_map)?;
        Ok(Quotient {
            graph: quotient,
            map,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: DiscreteGraph,
    /// Orbit map from the acted-on graph onto the quotient.
    pub map: GraphMorphism,
}

fn identity_vmap(graph: &DiscreteGraph) -> VMap {
    graph
        .vertices()
        .iter()
        .map(|v| (v.clone(), v.clone()))
        .collect()
}

fn identity_emap(graph: &DiscreteGraph) -> EMap {
    graph
        .edges()
        .iter()
        .map(|e| (e.clone(), e.clone()))
        .collect()
}

fn compose_vmap(outer: &VMap, inner: &VMap) -> Result<VMap> {
    inner
        .iter()
        .map(|(x, y)| {
            let z = outer
                .get(y)
                .ok_or_else(|| Error::Parse(format!("map undefined at {y}")))?;
            Ok((x.clone(), z.clone()))
        })
        .collect()
}

fn compose_emap(outer: &EMap, inner: &EMap) -> Result<EMap> {
    inner
        .iter()
        .map(|(x, y)| {
            let z = outer
                .get(y)
                .ok_or_else(|| Error::Parse(format!("map undefined at {y}")))?;
            Ok((x.clone(), z.clone()))
        })
        .collect()
}

fn invert_vmap(map: &VMap, graph: &DiscreteGraph) -> Result<VMap> {
    check_vmap_bijective("generator", map, graph)?;
    Ok(map.iter().map(|(a, b)| (b.clone(), a.clone())).collect())
}

fn invert_emap(map: &EMap, graph: &DiscreteGraph) -> Result<EMap> {
    check_emap_bijective("generator", map, graph)?;
    Ok(map.iter().map(|(a, b)| (b.clone(), a.clone())).collect())
}

fn check_vmap_bijective(key: &str, map: &VMap, graph: &DiscreteGraph) -> Result<()> {
    let total = graph.vertices().iter().all(|v| map.contains_key(v));
    let in_graph = map.values().all(|v| graph.has_vertex(v));
    let images: BTreeSet<&VertexId> = map.values().collect();
    if !total || !in_graph || map.len() != graph.vertex_count() || images.len() != map.len() {
        return Err(Error::NotBijective {
            element: key.to_string(),
        });
    }
    Ok(())
}

fn check_emap_bijective(key: &str, map: &EMap, graph: &DiscreteGraph) -> Result<()> {
    let total = graph.edges().iter().all(|e| map.contains_key(e));
    let in_graph = map.values().all(|e| graph.has_edge(e));
    let images: BTreeSet<&EdgeId> = map.values().collect();
    if !total || !in_graph || map.len() != graph.edge_count() || images.len() != map.len() {
        return Err(Error::NotBijective {
            element: key.to_string(),
        });
    }
    Ok(())
}

/// An edge labeling c : E¹ → G.
#[derive(Debug, Clone)]
pub struct Cocycle {
    graph: DiscreteGraph,
    group: GroupModel,
    labels: BTreeMap<EdgeId, GroupElem>,
}

impl Cocycle {
    /// A cocycle must label every edge of its graph and nothing else.
    pub fn new(
        graph: DiscreteGraph,
        group: GroupModel,
        labels: BTreeMap<EdgeId, GroupElem>,
    ) -> Result<Self> {
        for e in graph.edges() {
            if !labels.contains_key(e) {
                return Err(Error::InvalidCocycle(format!("edge {e} has no label")));
            }
        }
        for e in labels.keys() {
            if !graph.has_edge(e) {
                return Err(Error::InvalidCocycle(format!(
                    "label for {e}, which is not an edge of the graph"
                )));
            }
        }
        Ok(Cocycle {
            graph,
            group,
            labels,
        })
    }

    pub fn constant_identity(graph: DiscreteGraph, group: GroupModel) -> Self {
        let labels = graph
            .edges()
            .iter()
            .map(|e| (e.clone(), group.identity()))
            .collect();
        Cocycle {
            graph,
            group,
            labels,
        }
    }

    pub fn graph(&self) -> &DiscreteGraph {
        &self.graph
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn label(&self, e: &EdgeId) -> &GroupElem {
        &self.labels[e]
    }

    pub fn labels(&self) -> &BTreeMap<EdgeId, GroupElem> {
        &self.labels
    }
}

/// A skew product together with its projection and, for finite groups, the
/// free translation action.
#[derive(Debug, Clone)]
pub struct SkewProduct {
    pub graph: DiscreteGraph,
    /// Projection onto the base graph, (x, g) ↦ x.
    pub projection: GraphMorphism,
    /// Left translation g·(x, h) = (x, gh). `None` for truncated infinite
    /// groups: translation does not preserve a finite ball.
    pub action: Option<GraphAction>,
}

/// Build the skew product E ×_c G: vertices E⁰ × G, edges E¹ × G, with
/// s̃(e,g) = (s(e), g) and r̃(e,g) = (r(e), g·c(e)).
///
/// For infinite (symbolic) groups a truncation radius is required: vertices
/// keep elements of word length ≤ radius and an edge survives only when both
/// endpoints do.
pub fn skew_product(cocycle: &Cocycle, radius: Option<usize>) -> Result<SkewProduct> {
    let group = cocycle.group().clone();
    let base = cocycle.graph().clone();
    let elements: Vec<GroupElem> = if group.is_finite() {
        group.elements().unwrap()
    } else {
        let radius = radius.ok_or(Error::TruncationRequired)?;
        group.ball(radius, BALL_CAP)?
    };
    let in_window: BTreeSet<String> = elements.iter().map(|g| group.elem_str(g)).collect();

    let vid = |x: &VertexId, g: &GroupElem| -> VertexId {
        VertexId::new(encode_parts(&[x.as_str(), &group.elem_str(g)], '|'))
    };
    let eid = |e: &EdgeId, g: &GroupElem| -> EdgeId {
        EdgeId::new(encode_parts(&[e.as_str(), &group.elem_str(g)], '|'))
    };

    let mut vertices = Vec::new();
    let mut v_proj: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for x in base.vertices() {
        for g in &elements {
            let id = vid(x, g);
            v_proj.insert(id.clone(), x.clone());
            vertices.push(id);
        }
    }
    let mut edges = Vec::new();
    let mut e_proj: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for e in base.edges() {
        for g in &elements {
            let target = group.mul(g, cocycle.label(e));
            if !in_window.contains(&group.elem_str(&target)) {
                continue;
            }
            let id = eid(e, g);
            e_proj.insert(id.clone(), e.clone());
            edges.push((id, vid(base.src(e), g), vid(base.rng(e), &target)));
        }
    }
    let graph = DiscreteGraph::build(vertices, edges)?;

    let action = if group.is_finite() {
        let mut act_v: BTreeMap<String, VMap> = BTreeMap::new();
        let mut act_e: BTreeMap<String, EMap> = BTreeMap::new();
        for t in &elements {
            let mut vm: VMap = BTreeMap::new();
            for x in base.vertices() {
                for g in &elements {
                    vm.insert(vid(x, g), vid(x, &group.mul(t, g)));
                }
            }
            let mut em: EMap = BTreeMap::new();
            for e in base.edges() {
                for g in &elements {
                    if e_proj.contains_key(&eid(e, g)) {
                        em.insert(eid(e, g), eid(e, &group.mul(t, g)));
                    }
                }
            }
            act_v.insert(group.elem_str(t), vm);
            act_e.insert(group.elem_str(t), em);
        }
        Some(GraphAction::from_full_maps(
            group,
            graph.clone(),
            act_v,
            act_e,
        )?)
    } else {
        None
    };

    let projection = GraphMorphism::new(graph.clone(), base.clone(), v_proj, e_proj)?;
    Ok(SkewProduct {
        graph,
        projection,
        action,
    })
}

/// The data recovered from a free action of a finite group: quotient,
/// trivializing cocycle, and the verified equivariant isomorphism from the
/// rebuilt skew product back onto the original graph.
#[derive(Debug, Clone)]
pub struct CocycleExtraction {
    pub quotient: DiscreteGraph,
    pub quotient_map: GraphMorphism,
    pub cocycle: Cocycle,
    /// The rebuilt skew product (quotient ×_c G) with its translation action.
    pub skew: SkewProduct,
    /// Equivariant isomorphism from `skew.graph` onto the original graph.
    pub iso: GraphMorphism,
}

/// Trivialize a free action of a finite group as a skew product over its
/// quotient.
///
/// The transversal takes the minimal-id vertex of each orbit. Each quotient
/// edge is lifted to the unique orbit member whose source lies on the
/// transversal; the cocycle value is the unique element carrying the
/// transversal representative of the range orbit to the lift's range. The
/// returned isomorphism sends (x̄, g) to g · (transversal lift of x̄) and is
/// checked to be a bijective equivariant morphism before returning.
pub fn extract_cocycle(action: &GraphAction) -> Result<CocycleExtraction> {
    action.require_free_finite()?;
    let group = action.group().clone();
    let graph = action.graph().clone();
    let elements = group.elements().unwrap();
    let Quotient {
        graph: quotient,
        map: quotient_map,
    } = action.quotient_graph()?;

    // quotient ids are orbit representatives, so the transversal is literal:
    // the quotient vertex v̄ lifts to the vertex of the same id
    let transversal = |qv: &VertexId| -> VertexId { VertexId::new(qv.as_str()) };

    // unique g with g · t = v
    let carry = |t: &VertexId, v: &VertexId| -> GroupElem {
        elements
            .iter()
            .find(|g| action.apply_vertex(g, t) == *v)
            .expect("orbit members are reachable from the representative")
            .clone()
    };

    let mut labels: BTreeMap<EdgeId, GroupElem> = BTreeMap::new();
    let mut lifts: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for qe in quotient.edges() {
        let rep_edge = EdgeId::new(qe.as_str());
        // move the representative edge so its source sits on the transversal
        let src_rep = transversal(quotient.src(qe));
        let to_transversal = group.inv(&carry(&src_rep, graph.src(&rep_edge)));
        let lift = action.apply_edge(&to_transversal, &rep_edge);
        debug_assert_eq!(graph.src(&lift), &src_rep);
        let rng_rep = transversal(quotient.rng(qe));
        labels.insert(qe.clone(), carry(&rng_rep, graph.rng(&lift)));
        lifts.insert(qe.clone(), lift);
    }
    let cocycle = Cocycle::new(quotient.clone(), group.clone(), labels)?;
    let skew = skew_product(&cocycle, None)?;

    // iso: (x̄, g) ↦ g · lift(x̄)
    let mut v_map: VMap = BTreeMap::new();
    for qv in quotient.vertices() {
        let t = transversal(qv);
        for g in &elements {
            let id = VertexId::new(encode_parts(&[qv.as_str(), &group.elem_str(g)], '|'));
            v_map.insert(id, action.apply_vertex(g, &t));
        }
    }
    let mut e_map: EMap = BTreeMap::new();
    for qe in quotient.edges() {
        for g in &elements {
            let id = EdgeId::new(encode_parts(&[qe.as_str(), &group.elem_str(g)], '|'));
            e_map.insert(id, action.apply_edge(g, &lifts[qe]));
        }
    }
    let iso = GraphMorphism::new(skew.graph.clone(), graph.clone(), v_map, e_map)?;

    // the construction guarantees all three properties; verify anyway
    let report = iso.analyze();
    assert!(
        report.is_morphism,
        "extracted isomorphism must be a morphism"
    );
    assert!(
        iso.is_bijective(),
        "extracted isomorphism must be bijective"
    );
    let translation = skew
        .action
        .as_ref()
        .expect("finite skew products carry an action");
    for g in &elements {
        for v in skew.graph.vertices() {
            assert_eq!(
                iso.apply_vertex(&translation.apply_vertex(g, v)),
                &action.apply_vertex(g, iso.apply_vertex(v)),
                "extracted isomorphism must be equivariant"
            );
        }
        for e in skew.graph.edges() {
            assert_eq!(
                iso.apply_edge(&translation.apply_edge(g, e)),
                &action.apply_edge(g, iso.apply_edge(e)),
                "extracted isomorphism must be equivariant"
            );
        }
    }

    Ok(CocycleExtraction {
        quotient,
        quotient_map,
        cocycle,
        skew,
        iso,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberBound {
    pub bound: usize,
    /// A vertex attaining the bound (minimal id among maximizers).
    pub witness: Option<VertexId>,
}

/// Over a quotient map q, compute d = max over vertices v of
/// |q⁻¹(K) ∩ s⁻¹(v)| for a set K of quotient edges.
pub fn fiber_bound(q: &GraphMorphism, k: &BTreeSet<EdgeId>) -> Result<FiberBound> {
    for e in k {
        if !q.codomain().has_edge(e) {
            return Err(Error::UnknownEdge(e.to_string()));
        }
    }
    let mut best: Option<(usize, VertexId)> = None;
    for v in q.domain().vertices() {
        let count = q
            .domain()
            .out_edges(v)
            .iter()
            .filter(|e| k.contains(q.apply_edge(e)))
            .count();
        let better = match &best {
            None => true,
            Some((b, _)) => count > *b,
        };
        if better {
            best = Some((count, v.clone()));
        }
    }
    Ok(match best {
        Some((bound, witness)) => FiberBound {
            bound,
            witness: Some(witness),
        },
        None => FiberBound {
            bound: 0,
            witness: None,
        },
    })
}

/// A right action of a group on the finite set {0, …, degree−1}; the fiber
/// of a derived cover. Written on the right so that the regular
/// representation x·g matches the skew-product range map exactly.
#[derive(Debug, Clone)]
pub struct PermAction {
    group: GroupModel,
    degree: usize,
    perms: BTreeMap<String, Vec<usize>>,
}

impl PermAction {
    /// Build from one permutation per generator (finite groups: the listed
    /// elements must generate; homomorphism checked on all pairs).
    pub fn from_generator_perms(
        group: GroupModel,
        degree: usize,
        gens: Vec<(GroupElem, Vec<usize>)>,
    ) -> Result<Self> {
        for (g, p) in &gens {
            check_perm(&group.elem_str(g), p, degree)?;
        }
        let perms = match &group {
            GroupModel::Finite(_) => {
                let mut perms: BTreeMap<String, Vec<usize>> = BTreeMap::new();
                perms.insert(group.elem_str(&group.identity()), (0..degree).collect());
                let mut frontier = VecDeque::new();
                frontier.push_back(group.identity());
                while let Some(g) = frontier.pop_front() {
                    let pg = perms[&group.elem_str(&g)].clone();
                    for (s, ps) in &gens {
                        let h = group.mul(&g, s);
                        let key = group.elem_str(&h);
                        if perms.contains_key(&key) {
                            continue;
                        }
                        // right action: x·(g·s) = (x·g)·s
                        let ph: Vec<usize> = (0..degree).map(|x| ps[pg[x]]).collect();
                        perms.insert(key, ph);
                        frontier.push_back(h);
                    }
                }
                if let Some(missing) = group
                    .elements()
                    .unwrap()
                    .iter()
                    .find(|g| !perms.contains_key(&group.elem_str(g)))
                {
                    return Err(Error::NotAnAction(format!(
                        "the labeled elements do not generate ({} is unreached)",
                        group.elem_str(missing)
                    )));
                }
                // homomorphism on all pairs
                let elements = group.elements().unwrap();
                for g in &elements {
                    for h in &elements {
                        let pg = &perms[&group.elem_str(g)];
                        let ph = &perms[&group.elem_str(h)];
                        let pgh = &perms[&group.elem_str(&group.mul(g, h))];
                        if (0..degree).any(|x| ph[pg[x]] != pgh[x]) {
                            return Err(Error::NotAnAction(format!(
                                "permutations do not compose at ({}, {})",
                                group.elem_str(g),
                                group.elem_str(h)
                            )));
                        }
                    }
                }
                perms
            }
            GroupModel::Free { .. } | GroupModel::FreeAbelian { .. } => {
                let canonical = group.symbolic_generators().unwrap();
                let mut by_key: BTreeMap<String, Vec<usize>> = BTreeMap::new();
                for (g, p) in gens {
                    by_key.insert(group.elem_str(&g), p);
                }
                let mut perms = BTreeMap::new();
                for g in &canonical {
                    let key = group.elem_str(g);
                    let p = by_key.remove(&key).ok_or_else(|| {
                        Error::NotAnAction(format!("no permutation for generator {key}"))
                    })?;
                    let mut inv = vec![0usize; degree];
                    for (x, &y) in p.iter().enumerate() {
                        inv[y] = x;
                    }
                    perms.insert(group.elem_str(&group.inv(g)), inv);
                    perms.insert(key, p);
                }
                if let Some(extra) = by_key.keys().next() {
                    return Err(Error::NotAnAction(format!(
                        "{extra} is not a canonical generator"
                    )));
                }
                if matches!(group, GroupModel::FreeAbelian { .. }) {
                    for a in &canonical {
                        for b in &canonical {
                            let pa = &perms[&group.elem_str(a)];
                            let pb = &perms[&group.elem_str(b)];
                            if (0..degree).any(|x| pa[pb[x]] != pb[pa[x]]) {
                                return Err(Error::NotAnAction(format!(
                                    "generators {} and {} do not commute on the fiber",
                                    group.elem_str(a),
                                    group.elem_str(b)
                                )));
                            }
                        }
                    }
                }
                perms
            }
        };
        Ok(PermAction {
            group,
            degree,
            perms,
        })
    }

    /// The right regular representation of a finite group on its own
    /// elements, indexed in sorted name order.
    pub fn regular(group: &GroupModel) -> Result<Self> {
        let elements = group.elements().ok_or_else(|| {
            Error::NotAnAction("the regular representation needs a finite group".into())
        })?;
        let degree = elements.len();
        let index: BTreeMap<String, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, g)| (group.elem_str(g), i))
            .collect();
        let mut perms = BTreeMap::new();
        for g in &elements {
            let p: Vec<usize> = elements
                .iter()
                .map(|x| index[&group.elem_str(&group.mul(x, g))])
                .collect();
            perms.insert(group.elem_str(g), p);
        }
        Ok(PermAction {
            group: group.clone(),
            degree,
            perms,
        })
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Apply the right action: x · g.
    pub fn apply(&self, x: usize, g: &GroupElem) -> usize {
        match &self.group {
            GroupModel::Finite(_) => self.perms[&self.group.elem_str(g)][x],
            _ => {
                let syllables: Vec<(usize, i64)> = match g {
                    GroupElem::Word(w) => w.clone(),
                    GroupElem::Vector(v) => v
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e != 0)
                        .map(|(g, &e)| (g, e))
                        .collect(),
                    GroupElem::Finite(_) => unreachable!(),
                };
                let gens = self.group.symbolic_generators().unwrap();
                let mut x = x;
                // right action reads the word left to right
                for &(gen, exp) in &syllables {
                    let letter = if exp > 0 {
                        self.group.elem_str(&gens[gen])
                    } else {
                        self.group.elem_str(&self.group.inv(&gens[gen]))
                    };
                    for _ in 0..exp.unsigned_abs() {
                        x = self.perms[&letter][x];
                    }
                }
                x
            }
        }
    }
}

fn check_perm(key: &str, p: &[usize], degree: usize) -> Result<()> {
    let in_range = p.iter().all(|&x| x < degree);
    let images: BTreeSet<usize> = p.iter().copied().collect();
    if p.len() != degree || !in_range || images.len() != degree {
        return Err(Error::NotAnAction(format!(
            "{key} is not a permutation of 0..{degree}"
        )));
    }
    Ok(())
}
