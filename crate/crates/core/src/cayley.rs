//! Cayley graphs E(G,S): vertices are group elements, edges are pairs
//! (generator, element) with s(h,g) = g and r(h,g) = gh. Finite groups give
//! the whole graph with its free left-translation action; symbolic groups
//! give a ball of bounded word length.
//!
//! Cayley graphs of non-discrete groups, such as (ℝ,+) with generators
//! {1, θ}, have a continuous vertex space and are out of scope; only the
//! discrete and symbolic kinds are materialized.

use std::collections::BTreeMap;

use crate::action::GraphAction;
use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::group::{GroupElem, GroupModel};
use crate::id::{encode_parts, EdgeId, VertexId};

const BALL_CAP: usize = 1_000_000;

/// An ordered generating set. Repeats are allowed and create parallel edges,
/// since edges are indexed by (generator position, element).
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    group: GroupModel,
    generators: Vec<GroupElem>,
}

impl GeneratingSet {
    /// For finite groups the closure of the generators must be the whole
    /// group; symbolic groups accept any nonempty list of elements.
    pub fn new(group: GroupModel, generators: Vec<GroupElem>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGroup(
                "a generating set must be nonempty".into(),
            ));
        }
        if let Some(finite) = group.finite() {
            let idxs: Vec<usize> = generators
                .iter()
                .map(|g| match g {
                    GroupElem::Finite(i) => *i,
                    _ => panic!("finite group with symbolic generator"),
                })
                .collect();
            let reached = finite.closure(&idxs);
            if reached.len() != finite.order() {
                let missing = group
                    .elements()
                    .unwrap()
                    .into_iter()
                    .find(|g| match g {
                        GroupElem::Finite(i) => !reached.contains(i),
                        _ => false,
                    })
                    .unwrap();
                return Err(Error::NotGenerating {
                    missing: group.elem_str(&missing),
                });
            }
        }
        Ok(GeneratingSet { group, generators })
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn generators(&self) -> &[GroupElem] {
        &self.generators
    }
}

#[derive(Debug, Clone)]
pub struct CayleyGraph {
    pub graph: DiscreteGraph,
    /// Left translation λ_γ(g) = γg, free; present for finite groups only
    /// (translation does not preserve a truncated ball).
    pub action: Option<GraphAction>,
}

/// Build the Cayley graph of a generating set. Finite groups ignore the
/// radius; symbolic groups require one, keeping vertices in the word-length
/// ball and edges whose two endpoints both survive.
pub fn cayley_graph(gens: &GeneratingSet, radius: Option<usize>) -> Result<CayleyGraph> {
    let group = gens.group().clone();
    let elements: Vec<GroupElem> = if group.is_finite() {
        group.elements().unwrap()
    } else {
        let radius = radius.ok_or(Error::TruncationRequired)?;
        group.ball(radius, BALL_CAP)?
    };
    let window: std::collections::BTreeSet<String> =
        elements.iter().map(|g| group.elem_str(g)).collect();

    let vid = |g: &GroupElem| VertexId::new(group.elem_str(g));
    let eid = |pos: usize, g: &GroupElem| {
        EdgeId::new(encode_parts(&[&format!("e{pos}"), &group.elem_str(g)], '|'))
    };

    let vertices: Vec<VertexId> = elements.iter().map(&vid).collect();
    let mut edges = Vec::new();
    for (pos, h) in gens.generators().iter().enumerate() {
        for g in &elements {
            let target = group.mul(g, h);
            if !window.contains(&group.elem_str(&target)) {
                continue;
            }
            edges.push((eid(pos, g), vid(g), vid(&target)));
        }
    }
    let graph = DiscreteGraph::build(vertices, edges)?;

    let action = if group.is_finite() {
        let mut act_v = BTreeMap::new();
        let mut act_e = BTreeMap::new();
        for t in &elements {
            let vm: BTreeMap<VertexId, VertexId> = elements
                .iter()
                .map(|g| (vid(g), vid(&group.mul(t, g))))
                .collect();
            let mut em: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
            for (pos, _) in gens.generators().iter().enumerate() {
                for g in &elements {
                    em.insert(eid(pos, g), eid(pos, &group.mul(t, g)));
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

    Ok(CayleyGraph { graph, action })
}
