//! Walks and reduced walks.
//!
//! A walk is a sequence of letters, each an edge or a reversed edge. Letters
//! are stored in composition order: `letters[0]` is the letter traversed
//! last, so consecutive letters satisfy s(letters\[i\]) = r(letters\[i+1\]) and
//! the walk runs from `basepoint = s(letters[n-1])` to `r(letters[0])`. A
//! walk is reduced when no letter is immediately undone by its reverse.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::id::{encode_parts, EdgeId, VertexId};

pub const DEFAULT_WALK_CAP: usize = 1_000_000;

/// An edge traversed forwards or backwards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Fwd(EdgeId),
    Rev(EdgeId),
}

impl Letter {
    pub fn edge(&self) -> &EdgeId {
        match self {
            Letter::Fwd(e) | Letter::Rev(e) => e,
        }
    }

    /// Start vertex of the letter (s of the edge, or r when reversed).
    pub fn src<'g>(&self, graph: &'g DiscreteGraph) -> &'g VertexId {
        match self {
            Letter::Fwd(e) => graph.src(e),
            Letter::Rev(e) => graph.rng(e),
        }
    }

    /// End vertex of the letter.
    pub fn rng<'g>(&self, graph: &'g DiscreteGraph) -> &'g VertexId {
        match self {
            Letter::Fwd(e) => graph.rng(e),
            Letter::Rev(e) => graph.src(e),
        }
    }

    pub fn reversed(&self) -> Letter {
        match self {
            Letter::Fwd(e) => Letter::Rev(e.clone()),
            Letter::Rev(e) => Letter::Fwd(e.clone()),
        }
    }

    /// True when the two letters form a cancelling pair e·ē or ē·e.
    pub fn cancels(&self, other: &Letter) -> bool {
        match (self, other) {
            (Letter::Fwd(a), Letter::Rev(b)) | (Letter::Rev(a), Letter::Fwd(b)) => a == b,
            _ => false,
        }
    }

    /// Injective rendering with a fixed-width orientation prefix.
    pub fn token(&self) -> String {
        match self {
            Letter::Fwd(e) => format!(">{e}"),
            Letter::Rev(e) => format!("<{e}"),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Fwd(e) => write!(f, "{e}"),
            Letter::Rev(e) => write!(f, "~{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Walk {
    basepoint: VertexId,
    /// Composition order: the first entry is the letter traversed last.
    letters: Vec<Letter>,
    terminal: VertexId,
}

impl Walk {
    pub fn trivial(v: VertexId) -> Self {
        Walk {
            terminal: v.clone(),
            basepoint: v,
            letters: Vec::new(),
        }
    }

    /// Build a walk from letters in composition order, validating that the
    /// basepoint exists and consecutive letters compose.
    pub fn new(graph: &DiscreteGraph, basepoint: VertexId, letters: Vec<Letter>) -> Result<Self> {
        if !graph.has_vertex(&basepoint) {
            return Err(Error::Parse(format!("unknown basepoint {basepoint}")));
        }
        let mut expected = basepoint.clone();
        for letter in letters.iter().rev() {
            if !graph.has_edge(letter.edge()) {
                return Err(Error::Parse(format!("unknown edge {}", letter.edge())));
            }
            if letter.src(graph) != &expected {
                return Err(Error::Parse(format!(
                    "letters do not compose at {letter} (expected start {expected})"
                )));
            }
            expected = letter.rng(graph).clone();
        }
        Ok(Walk {
            basepoint,
            letters,
            terminal: expected,
        })
    }

    /// Build a walk from letters in traversal (chronological) order.
    pub fn from_traversal(
        graph: &DiscreteGraph,
        start: VertexId,
        mut traversal: Vec<Letter>,
    ) -> Result<Self> {
        traversal.reverse();
        Walk::new(graph, start, traversal)
    }

    pub fn basepoint(&self) -> &VertexId {
        &self.basepoint
    }

    /// The vertex reached by the walk, r(letters\[0\]).
    pub fn terminal(&self) -> &VertexId {
        &self.terminal
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Letters in traversal order (first traversed first).
    pub fn traversal(&self) -> impl Iterator<Item = &Letter> {
        self.letters.iter().rev()
    }

    /// Injective id for use as a synthesized vertex name: length prefix plus
    /// letter tokens joined with an escaped separator.
    pub fn id(&self) -> String {
        let tokens: Vec<String> = self.letters.iter().map(Letter::token).collect();
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        format!("{}:{}", self.letters.len(), encode_parts(&refs, '.'))
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "({})", self.basepoint);
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Enumerate walks of exactly length `n`.
///
/// With `reduced = false`, only forward letters are used and the result is
/// exactly the path space Eⁿ. With `reduced = true`, letters range over edges
/// and reversed edges and only reduced walks are produced. `from` restricts
/// to walks starting at the given vertex. Enumeration is breadth-first with
/// letters extended in (edge id, orientation) order, so the output is
/// deterministic.
pub fn enumerate_walks(
    graph: &DiscreteGraph,
    n: usize,
    reduced: bool,
    from: Option<&VertexId>,
) -> Result<Vec<Walk>> {
    enumerate_walks_capped(graph, n, reduced, from, DEFAULT_WALK_CAP)
}

pub fn enumerate_walks_capped(
    graph: &DiscreteGraph,
    n: usize,
    reduced: bool,
    from: Option<&VertexId>,
    cap: usize,
) -> Result<Vec<Walk>> {
    if let Some(v) = from {
        if !graph.has_vertex(v) {
            return Err(Error::Parse(format!("unknown vertex {v}")));
        }
    }
    let starts: Vec<VertexId> = match from {
        Some(v) => vec![v.clone()],
        None => graph.vertices().to_vec(),
    };
    let mut level: Vec<Walk> = starts.into_iter().map(Walk::trivial).collect();
    if level.len() > cap {
        return Err(Error::ExplosionGuard { cap });
    }
    for _ in 0..n {
        let mut next = Vec::new();
        for walk in &level {
            for letter in letters_at(graph, walk.terminal(), reduced) {
                if reduced {
                    if let Some(last) = walk.letters().first() {
                        if last.cancels(&letter) {
                            continue;
                        }
                    }
                }
                let mut letters = Vec::with_capacity(walk.len() + 1);
                letters.push(letter.clone());
                letters.extend(walk.letters().iter().cloned());
                let terminal = letter.rng(graph).clone();
                next.push(Walk {
                    basepoint: walk.basepoint().clone(),
                    letters,
                    terminal,
                });
                if next.len() > cap {
                    return Err(Error::ExplosionGuard { cap });
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// Letters starting at `v`, in deterministic order: forward letters by edge
/// id, then (in reduced-walk mode) reversed letters by edge id.
pub(crate) fn letters_at(graph: &DiscreteGraph, v: &VertexId, with_reversed: bool) -> Vec<Letter> {
    let mut letters: Vec<Letter> = graph
        .out_edges(v)
        .iter()
        .map(|e| Letter::Fwd(e.clone()))
        .collect();
    if with_reversed {
        letters.extend(graph.in_edges(v).iter().map(|e| Letter::Rev(e.clone())));
    }
    letters
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bouquet(n: usize) -> DiscreteGraph {
        let edges: Vec<(String, &str, &str)> =
            (0..n).map(|i| (format!("e{i}"), "v", "v")).collect();
        let refs: Vec<(&str, &str, &str)> =
            edges.iter().map(|(e, s, r)| (e.as_str(), *s, *r)).collect();
        DiscreteGraph::from_parts(&["v"], &refs).unwrap()
    }

    /// Brute-force oracle: generate every letter sequence and filter.
    fn walk_count_oracle(graph: &DiscreteGraph, n: usize, reduced: bool) -> usize {
        let mut alphabet: Vec<Letter> = Vec::new();
        for e in graph.edges() {
            alphabet.push(Letter::Fwd(e.clone()));
            if reduced {
                alphabet.push(Letter::Rev(e.clone()));
            }
        }
        let mut sequences: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for seq in &sequences {
                for letter in &alphabet {
                    let mut s = seq.clone();
                    s.push(letter.clone());
                    next.push(s);
                }
            }
            sequences = next;
        }
        sequences
            .into_iter()
            .filter(|seq| {
                // composable in traversal order
                let composable = seq.windows(2).all(|w| w[0].rng(graph) == w[1].src(graph));
                let no_cancel = !reduced || seq.windows(2).all(|w| !w[1].cancels(&w[0]));
                composable && no_cancel
            })
            .count()
    }

    #[test]
    fn bouquet_paths_of_length_two() {
        let walks = enumerate_walks(&bouquet(2), 2, false, None).unwrap();
        assert_eq!(walks.len(), 4);
        assert_eq!(walk_count_oracle(&bouquet(2), 2, false), 4);
        for w in &walks {
            assert!(w.is_reduced());
            assert_eq!(w.len(), 2);
        }
    }

    #[test]
    fn bouquet_reduced_walks_of_length_two() {
        // 4 first letters, 3 non-cancelling successors each
        let walks = enumerate_walks(&bouquet(2), 2, true, None).unwrap();
        assert_eq!(walks.len(), 12);
        assert_eq!(walk_count_oracle(&bouquet(2), 2, true), 12);
    }

    #[test]
    fn length_zero_walks_are_the_vertices() {
        let g = DiscreteGraph::from_parts(&["a", "b"], &[("e", "a", "b")]).unwrap();
        let walks = enumerate_walks(&g, 0, false, None).unwrap();
        assert_eq!(walks.len(), 2);
        assert!(walks.iter().all(Walk::is_empty));
        let from_a = enumerate_walks(&g, 0, true, Some(&"a".into())).unwrap();
        assert_eq!(from_a.len(), 1);
        assert_eq!(from_a[0].basepoint(), &VertexId::from("a"));
    }

    #[test]
    fn reduced_walks_cross_a_non_loop_edge_both_ways() {
        let g = DiscreteGraph::from_parts(&["u", "v"], &[("e", "v", "u")]).unwrap();
        let from_v = enumerate_walks(&g, 1, true, Some(&"v".into())).unwrap();
        assert_eq!(from_v.len(), 1);
        assert_eq!(from_v[0].terminal(), &VertexId::from("u"));
        let from_u = enumerate_walks(&g, 1, true, Some(&"u".into())).unwrap();
        assert_eq!(from_u.len(), 1);
        assert_eq!(from_u[0].letters()[0], Letter::Rev(EdgeId::from("e")));
    }

    #[test]
    fn explosion_guard_fires() {
        let err = enumerate_walks_capped(&bouquet(2), 10, false, None, 100).unwrap_err();
        assert_eq!(err.name(), "ExplosionGuard");
    }

    #[test]
    fn walk_composition_order_is_validated() {
        let g = DiscreteGraph::from_parts(&["a", "b", "c"], &[("e0", "a", "b"), ("e1", "b", "c")])
            .unwrap();
        // traversal a -e0-> b -e1-> c ; composition order is [e1, e0]
        let w = Walk::new(
            &g,
            "a".into(),
            vec![Letter::Fwd("e1".into()), Letter::Fwd("e0".into())],
        )
        .unwrap();
        assert_eq!(w.terminal(), &VertexId::from("c"));
        assert!(Walk::new(
            &g,
            "a".into(),
            vec![Letter::Fwd("e0".into()), Letter::Fwd("e1".into())],
        )
        .is_err());
        let t = Walk::from_traversal(
            &g,
            "a".into(),
            vec![Letter::Fwd("e0".into()), Letter::Fwd("e1".into())],
        )
        .unwrap();
        assert_eq!(t, w);
    }

    #[test]
    fn walk_ids_are_injective() {
        let g = bouquet(2);
        let walks = enumerate_walks(&g, 2, true, None).unwrap();
        let ids: std::collections::BTreeSet<String> = walks.iter().map(Walk::id).collect();
        assert_eq!(ids.len(), walks.len());
    }
}
