//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use graphact::{
    skew_product, Cocycle, DiscreteGraph, EdgeId, GraphAction, GroupElem, GroupModel, VertexId,
};

pub fn bouquet(n: usize) -> DiscreteGraph {
    let edges: Vec<(String, &str, &str)> = (0..n).map(|i| (format!("e{i}"), "v", "v")).collect();
    let refs: Vec<(&str, &str, &str)> =
        edges.iter().map(|(e, s, r)| (e.as_str(), *s, *r)).collect();
    DiscreteGraph::from_parts(&["v"], &refs).unwrap()
}

pub fn cycle(n: usize) -> DiscreteGraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..n)
        .map(|i| {
            (
                format!("e{i}"),
                format!("v{i}"),
                format!("v{}", (i + 1) % n),
            )
        })
        .collect();
    build(&vertices, &edges)
}

pub fn path_graph(n: usize) -> DiscreteGraph {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..n.saturating_sub(1))
        .map(|i| (format!("e{i}"), format!("v{i}"), format!("v{}", i + 1)))
        .collect();
    build(&vertices, &edges)
}

fn build(vertices: &[String], edges: &[(String, String, String)]) -> DiscreteGraph {
    let vrefs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let erefs: Vec<(&str, &str, &str)> = edges
        .iter()
        .map(|(e, s, r)| (e.as_str(), s.as_str(), r.as_str()))
        .collect();
    DiscreteGraph::from_parts(&vrefs, &erefs).unwrap()
}

/// Arbitrary multigraph with at least one vertex.
pub fn random_graph(rng: &mut StdRng, max_vertices: usize, max_edges: usize) -> DiscreteGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let m = rng.gen_range(0..=max_edges);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String, String)> = (0..m)
        .map(|i| {
            (
                format!("e{i}"),
                format!("v{}", rng.gen_range(0..n)),
                format!("v{}", rng.gen_range(0..n)),
            )
        })
        .collect();
    build(&vertices, &edges)
}

/// Connected multigraph: a random spanning tree plus extra edges, with
/// random orientations.
pub fn random_connected_graph(
    rng: &mut StdRng,
    max_vertices: usize,
    max_extra_edges: usize,
) -> DiscreteGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        let (a, b) = if rng.gen_bool(0.5) {
            (i, parent)
        } else {
            (parent, i)
        };
        edges.push((
            format!("e{}", edges.len()),
            format!("v{a}"),
            format!("v{b}"),
        ));
    }
    for _ in 0..rng.gen_range(0..=max_extra_edges) {
        edges.push((
            format!("e{}", edges.len()),
            format!("v{}", rng.gen_range(0..n)),
            format!("v{}", rng.gen_range(0..n)),
        ));
    }
    build(&vertices, &edges)
}

/// Connected graph whose vertices all have undirected degree at most
/// `max_degree` (loops count twice); keeps cover balls small.
pub fn random_bounded_degree_graph(
    rng: &mut StdRng,
    max_vertices: usize,
    max_extra_edges: usize,
    max_degree: usize,
) -> DiscreteGraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut degree = vec![0usize; n];
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        degree[i] += 1;
        degree[parent] += 1;
        edges.push((
            format!("e{}", edges.len()),
            format!("v{parent}"),
            format!("v{i}"),
        ));
    }
    for _ in 0..max_extra_edges {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let cost = if a == b { 2 } else { 1 };
        if degree[a] + cost > max_degree || degree[b] + cost > max_degree {
            continue;
        }
        degree[a] += cost;
        degree[b] += if a == b { 0 } else { 1 };
        edges.push((
            format!("e{}", edges.len()),
            format!("v{a}"),
            format!("v{b}"),
        ));
    }
    build(&vertices, &edges)
}

pub fn battery_groups() -> Vec<GroupModel> {
    vec![
        GroupModel::cyclic(2).unwrap(),
        GroupModel::cyclic(3).unwrap(),
        GroupModel::cyclic(4).unwrap(),
        GroupModel::symmetric(3).unwrap(),
    ]
}

pub fn random_cocycle(rng: &mut StdRng, graph: &DiscreteGraph, group: &GroupModel) -> Cocycle {
    let elements = group.elements().unwrap();
    let labels: BTreeMap<EdgeId, GroupElem> = graph
        .edges()
        .iter()
        .map(|e| {
            (
                e.clone(),
                elements[rng.gen_range(0..elements.len())].clone(),
            )
        })
        .collect();
    Cocycle::new(graph.clone(), group.clone(), labels).unwrap()
}

/// A uniformly scrambled free action: a random skew product (every free
/// action arises this way up to equivariant isomorphism) whose vertex and
/// edge ids are then renamed by a random bijection, with the action
/// conjugated to match.
pub fn random_free_action(
    rng: &mut StdRng,
    group: &GroupModel,
    max_vertices: usize,
    max_edges: usize,
) -> GraphAction {
    let order = group.order().unwrap();
    let base = random_graph(rng, (max_vertices / order).max(1), max_edges / order);
    let cocycle = random_cocycle(rng, &base, group);
    let skew = skew_product(&cocycle, None).unwrap();
    let action = skew.action.unwrap();
    relabel_action(rng, &action)
}

fn relabel_action(rng: &mut StdRng, action: &GraphAction) -> GraphAction {
    let graph = action.graph();
    let mut v_perm: Vec<usize> = (0..graph.vertex_count()).collect();
    v_perm.shuffle(rng);
    let mut e_perm: Vec<usize> = (0..graph.edge_count()).collect();
    e_perm.shuffle(rng);
    let v_name: BTreeMap<&VertexId, VertexId> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v, VertexId::new(format!("u{}", v_perm[i]))))
        .collect();
    let e_name: BTreeMap<&EdgeId, EdgeId> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (e, EdgeId::new(format!("f{}", e_perm[i]))))
        .collect();

    let renamed = DiscreteGraph::build(
        v_name.values().cloned().collect(),
        graph
            .edges()
            .iter()
            .map(|e| {
                (
                    e_name[e].clone(),
                    v_name[graph.src(e)].clone(),
                    v_name[graph.rng(e)].clone(),
                )
            })
            .collect(),
    )
    .unwrap();

    let act_v = action
        .vertex_maps()
        .iter()
        .map(|(k, m)| {
            (
                k.clone(),
                m.iter()
                    .map(|(a, b)| (v_name[a].clone(), v_name[b].clone()))
                    .collect(),
            )
        })
        .collect();
    let act_e = action
        .edge_maps()
        .iter()
        .map(|(k, m)| {
            (
                k.clone(),
                m.iter()
                    .map(|(a, b)| (e_name[a].clone(), e_name[b].clone()))
                    .collect(),
            )
        })
        .collect();
    GraphAction::from_full_maps(action.group().clone(), renamed, act_v, act_e).unwrap()
}

/// Independent oracle: number of length-n paths by summing the n-th power
/// of the adjacency count matrix.
pub fn path_count_by_matrix_power(graph: &DiscreteGraph, n: usize) -> u128 {
    let verts = graph.vertices();
    let k = verts.len();
    if k == 0 {
        return 0;
    }
    let index: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut adj = vec![vec![0u128; k]; k];
    for e in graph.edges() {
        adj[index[graph.src(e)]][index[graph.rng(e)]] += 1;
    }
    let mut power = vec![vec![0u128; k]; k];
    for (i, row) in power.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..n {
        let mut next = vec![vec![0u128; k]; k];
        for i in 0..k {
            for l in 0..k {
                if power[i][l] == 0 {
                    continue;
                }
                for j in 0..k {
                    next[i][j] += power[i][l] * adj[l][j];
                }
            }
        }
        power = next;
    }
    power.iter().flatten().sum()
}

/// Independent oracle: dimension of the cycle space of the undirected
/// multigraph, |E| minus the GF(2) rank of the vertex-edge incidence matrix
/// (loops give zero columns).
pub fn gf2_cycle_space_dim(graph: &DiscreteGraph) -> usize {
    let index: BTreeMap<&VertexId, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    assert!(graph.vertex_count() <= 128, "oracle uses a 128-bit mask");
    let mut pivots: Vec<u128> = Vec::new();
    let mut rank = 0usize;
    for e in graph.edges() {
        let mut column: u128 = 0;
        column ^= 1 << index[graph.src(e)];
        column ^= 1 << index[graph.rng(e)];
        for p in &pivots {
            let low = p & p.wrapping_neg();
            if column & low != 0 {
                column ^= p;
            }
        }
        if column != 0 {
            pivots.push(column);
            rank += 1;
        }
    }
    graph.edge_count() - rank
}

/// Undirected BFS depth of every vertex from `root`.
pub fn undirected_depths(graph: &DiscreteGraph, root: &VertexId) -> BTreeMap<VertexId, usize> {
    let mut depth: BTreeMap<VertexId, usize> = BTreeMap::new();
    depth.insert(root.clone(), 0);
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(root.clone());
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        let mut neighbors: Vec<VertexId> = Vec::new();
        for e in graph.out_edges(&v) {
            neighbors.push(graph.rng(e).clone());
        }
        for e in graph.in_edges(&v) {
            neighbors.push(graph.src(e).clone());
        }
        for w in neighbors {
            if !depth.contains_key(&w) {
                depth.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    depth
}
