//! Property suites: executable statements of the structural theorems this
//! crate is built around, runnable on user inputs (the CLI `check`
//! subcommand) and over randomized batteries (the acceptance tests).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::action::{extract_cocycle, fiber_bound, skew_product, Cocycle, GraphAction};
use crate::cover::{is_connected, pi1_presentation, universal_cover_ball};
use crate::error::Result;
use crate::graph::DiscreteGraph;
use crate::id::VertexId;
use crate::morphism::find_isomorphism_bounded;

/// Outcome of one property check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Pass,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Fail,
            detail,
        }
    }

    fn skipped(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail,
        }
    }
}

/// Trivialize a free action and rebuild it: the extracted cocycle's skew
/// product must be equivariantly isomorphic to the original graph (the
/// extraction verifies equivariance edge by edge; this re-checks the
/// isomorphism flags and the quotient covering).
pub fn gross_tucker_roundtrip(action: &GraphAction) -> CheckOutcome {
    const NAME: &str = "gross_tucker_roundtrip";
    match action.is_free() {
        Ok(freeness) if !freeness.free => {
            let (element, vertex) = freeness.witness.unwrap();
            return CheckOutcome::skipped(
                NAME,
                format!("action is not free ({element} fixes {vertex})"),
            );
        }
        Err(err) => return CheckOutcome::fail(NAME, err.to_string()),
        Ok(_) => {}
    }
    match extract_cocycle(action) {
        Ok(extraction) => {
            let report = extraction.iso.analyze();
            if !report.is_morphism || !extraction.iso.is_bijective() {
                return CheckOutcome::fail(NAME, "rebuilt skew product is not isomorphic".into());
            }
            let q_report = extraction.quotient_map.analyze();
            if !q_report.is_covering {
                return CheckOutcome::fail(NAME, "orbit map is not a covering".into());
            }
            CheckOutcome::pass(
                NAME,
                format!(
                    "quotient has {} vertices / {} edges; skew product rebuilt and matched",
                    extraction.quotient.vertex_count(),
                    extraction.quotient.edge_count()
                ),
            )
        }
        Err(err) => CheckOutcome::fail(NAME, err.to_string()),
    }
}

/// The translation action on a skew product is free and its quotient is
/// isomorphic to the base graph.
pub fn quotient_of_skew_roundtrip(cocycle: &Cocycle) -> CheckOutcome {
    const NAME: &str = "quotient_of_skew_roundtrip";
    if !cocycle.group().is_finite() {
        return CheckOutcome::skipped(NAME, "needs a finite group".into());
    }
    let run = || -> Result<CheckOutcome> {
        let skew = skew_product(cocycle, None)?;
        let action = skew
            .action
            .as_ref()
            .expect("finite groups carry the action");
        let freeness = action.is_free()?;
        if !freeness.free {
            return Ok(CheckOutcome::fail(
                NAME,
                "translation action on the skew product is not free".into(),
            ));
        }
        let quotient = action.quotient_graph()?;
        let base = cocycle.graph();
        let bound_v = base.vertex_count().max(64);
        let bound_e = base.edge_count().max(256);
        match find_isomorphism_bounded(&quotient.graph, base, bound_v, bound_e)? {
            Some(_) => Ok(CheckOutcome::pass(
                NAME,
                format!(
                    "skew product over {} has free translation; quotient matches the base",
                    cocycle.group()
                ),
            )),
            None => Ok(CheckOutcome::fail(
                NAME,
                "quotient of the skew product is not isomorphic to the base".into(),
            )),
        }
    };
    run().unwrap_or_else(|err| CheckOutcome::fail(NAME, err.to_string()))
}

/// Free rank of π₁ equals |E¹| − |E⁰| + 1 on a connected graph.
pub fn pi1_rank_formula(graph: &DiscreteGraph) -> CheckOutcome {
    const NAME: &str = "pi1_rank_formula";
    if graph.vertex_count() == 0 || !is_connected(graph) {
        return CheckOutcome::skipped(NAME, "graph is empty or not connected".into());
    }
    match pi1_presentation(graph) {
        Ok(p) => {
            let expected = graph.edge_count() as i64 - graph.vertex_count() as i64 + 1;
            if p.rank as i64 == expected && p.generator_edges.len() == p.rank {
                CheckOutcome::pass(NAME, format!("rank {} = |E1| - |E0| + 1", p.rank))
            } else {
                CheckOutcome::fail(
                    NAME,
                    format!("rank {} but |E1| - |E0| + 1 = {expected}", p.rank),
                )
            }
        }
        Err(err) => CheckOutcome::fail(NAME, err.to_string()),
    }
}

/// The reduced-walk unfolding is a tree and its covering map restricts to
/// fiber bijections over every interior vertex.
pub fn cover_ball_properties(
    graph: &DiscreteGraph,
    base: &VertexId,
    radius: usize,
) -> CheckOutcome {
    const NAME: &str = "cover_ball_tree";
    if !is_connected(graph) {
        return CheckOutcome::skipped(NAME, "graph is not connected".into());
    }
    match universal_cover_ball(graph, base, radius) {
        Ok(ball) => {
            if !undirected_acyclic(&ball.tree) {
                return CheckOutcome::fail(NAME, "unfolded ball contains a cycle".into());
            }
            if !ball.covering_map.analyze().is_morphism {
                return CheckOutcome::fail(NAME, "covering map is not a morphism".into());
            }
            if !ball.interior_fibers_biject() {
                return CheckOutcome::fail(
                    NAME,
                    "interior fibers do not match the base fibers".into(),
                );
            }
            CheckOutcome::pass(
                NAME,
                format!(
                    "radius-{radius} ball from {base}: {} vertices, acyclic, fibers match",
                    ball.tree.vertex_count()
                ),
            )
        }
        Err(err) => CheckOutcome::fail(NAME, err.to_string()),
    }
}

/// d = max_v |q⁻¹(K) ∩ s⁻¹(v)| really bounds every fiber count, re-checked
/// directly for K the whole quotient edge set.
pub fn fiber_bound_consistency(action: &GraphAction) -> CheckOutcome {
    const NAME: &str = "fiber_bound";
    let run = || -> Result<CheckOutcome> {
        let quotient = action.quotient_graph()?;
        let all: BTreeSet<_> = quotient.graph.edges().iter().cloned().collect();
        let fb = fiber_bound(&quotient.map, &all)?;
        for v in action.graph().vertices() {
            let count = action
                .graph()
                .out_edges(v)
                .iter()
                .filter(|e| all.contains(quotient.map.apply_edge(e)))
                .count();
            if count > fb.bound {
                return Ok(CheckOutcome::fail(
                    NAME,
                    format!(
                        "vertex {v} emits {count} preimage edges, bound was {}",
                        fb.bound
                    ),
                ));
            }
        }
        Ok(CheckOutcome::pass(
            NAME,
            format!("bound {} holds", fb.bound),
        ))
    };
    run().unwrap_or_else(|err| CheckOutcome::skipped(NAME, err.to_string()))
}

/// Union-find cycle test over the undirected edge set, independent of any
/// tree-building code path.
pub fn undirected_acyclic(graph: &DiscreteGraph) -> bool {
    let index: std::collections::BTreeMap<&VertexId, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut parent: Vec<usize> = (0..graph.vertex_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in graph.edges() {
        let a = find(&mut parent, index[graph.src(e)]);
        let b = find(&mut parent, index[graph.rng(e)]);
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;
    use crate::id::EdgeId;

    fn two_cycle() -> DiscreteGraph {
        DiscreteGraph::from_parts(&["0", "1"], &[("e0", "0", "1"), ("e1", "1", "0")]).unwrap()
    }

    fn swap_action() -> GraphAction {
        let z2 = GroupModel::cyclic(2).unwrap();
        let g = z2.parse_elem("1").unwrap();
        let vm = [("0", "1"), ("1", "0")]
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        let em = [("e0", "e1"), ("e1", "e0")]
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        GraphAction::from_generator_maps(z2, two_cycle(), vec![(g, vm, em)]).unwrap()
    }

    #[test]
    fn suites_pass_on_the_swap_action() {
        assert_eq!(
            gross_tucker_roundtrip(&swap_action()).status,
            CheckStatus::Pass
        );
        assert_eq!(
            fiber_bound_consistency(&swap_action()).status,
            CheckStatus::Pass
        );
    }

    #[test]
    fn suites_pass_on_a_small_cocycle() {
        let z2 = GroupModel::cyclic(2).unwrap();
        let gen = z2.parse_elem("1").unwrap();
        let base = DiscreteGraph::from_parts(&["v"], &[("e", "v", "v")]).unwrap();
        let cocycle =
            Cocycle::new(base, z2, [(EdgeId::from("e"), gen)].into_iter().collect()).unwrap();
        assert_eq!(
            quotient_of_skew_roundtrip(&cocycle).status,
            CheckStatus::Pass
        );
    }

    #[test]
    fn rank_and_ball_suites() {
        let g = two_cycle();
        assert_eq!(pi1_rank_formula(&g).status, CheckStatus::Pass);
        assert_eq!(
            cover_ball_properties(&g, &"0".into(), 3).status,
            CheckStatus::Pass
        );
    }

    #[test]
    fn non_free_actions_are_skipped() {
        let g = DiscreteGraph::from_parts(&["v"], &[]).unwrap();
        let action = GraphAction::trivial(GroupModel::cyclic(2).unwrap(), g).unwrap();
        assert_eq!(gross_tucker_roundtrip(&action).status, CheckStatus::Skipped);
    }

    #[test]
    fn acyclicity_oracle_sees_cycles() {
        assert!(!undirected_acyclic(&two_cycle()));
        let tree = DiscreteGraph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert!(undirected_acyclic(&tree));
        let loop_graph = DiscreteGraph::from_parts(&["v"], &[("e", "v", "v")]).unwrap();
        assert!(!undirected_acyclic(&loop_graph));
    }
}
