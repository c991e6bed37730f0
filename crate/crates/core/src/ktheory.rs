//! K-theory of finite graph algebras, used as a computable necessary
//! condition for Morita equivalence.
//!
//! With A(v,w) counting the edges from w to v, the matrix Aᵗ − I is viewed
//! as a map from the lattice over the regular vertices into the lattice over
//! all vertices: K₀ is its cokernel and K₁ its kernel, both read off the
//! Smith normal form. The convention (domain restricted to regular vertices,
//! sources excluded) is the standard one for graph algebras.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::graph::DiscreteGraph;
use crate::matrix::{smith_normal_form, IntMatrix};

/// K₀ and K₁ of a finite graph algebra: free ranks plus the torsion part of
/// K₀ as invariant factors in divisibility order (K₁ is always free).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups {
    pub k0_free_rank: usize,
    pub k0_torsion: Vec<BigInt>,
    pub k1_free_rank: usize,
}

impl fmt::Display for KGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let torsion: Vec<String> = self.k0_torsion.iter().map(|d| format!("Z/{d}")).collect();
        let mut k0: Vec<String> = Vec::new();
        if self.k0_free_rank > 0 {
            k0.push(format!("Z^{}", self.k0_free_rank));
        }
        k0.extend(torsion);
        let k0 = if k0.is_empty() {
            "0".into()
        } else {
            k0.join(" + ")
        };
        let k1 = if self.k1_free_rank == 0 {
            "0".into()
        } else {
            format!("Z^{}", self.k1_free_rank)
        };
        write!(f, "K0 = {k0}, K1 = {k1}")
    }
}

/// The presentation matrix Aᵗ − I with columns restricted to the regular
/// vertices: entry (u, w) counts edges from u to w, minus one on the
/// diagonal. Rows and columns follow the sorted vertex order.
pub fn k_theory_matrix(graph: &DiscreteGraph) -> IntMatrix {
    let vertices = graph.vertices();
    let regular = graph.vertex_classes().regular;
    let mut m = IntMatrix::zero(vertices.len(), regular.len());
    for (row, u) in vertices.iter().enumerate() {
        for (col, w) in regular.iter().enumerate() {
            let mut entry = BigInt::from(graph.multiplicity(u, w) as i64);
            if u == w {
                entry -= BigInt::one();
            }
            *m.get_mut(row, col) = entry;
        }
    }
    m
}

pub fn graph_k_theory(graph: &DiscreteGraph) -> KGroups {
    let m = k_theory_matrix(graph);
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    let k0_torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| d > &BigInt::one())
        .collect();
    KGroups {
        k0_free_rank: m.rows() - rank,
        k0_torsion,
        k1_free_rank: m.cols() - rank,
    }
}

/// Outcome of comparing K-theory as a Morita-equivalence witness. Equal
/// K-groups are merely *consistent* with equivalence; unequal ones refute
/// it. This is a necessary condition, never a proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoritaVerdict {
    Consistent,
    Refuted { component: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaComparison {
    pub verdict: MoritaVerdict,
    pub left: KGroups,
    pub right: KGroups,
}

impl MoritaComparison {
    pub const NOTE: &'static str =
        "necessary condition only: equal K-theory does not prove Morita equivalence";
}

pub fn morita_witness(e1: &DiscreteGraph, e2: &DiscreteGraph) -> MoritaComparison {
    let left = graph_k_theory(e1);
    let right = graph_k_theory(e2);
    let verdict = if left.k0_free_rank != right.k0_free_rank {
        MoritaVerdict::Refuted {
            component: format!(
                "k0_free_rank: {} vs {}",
                left.k0_free_rank, right.k0_free_rank
            ),
        }
    } else if left.k0_torsion != right.k0_torsion {
        MoritaVerdict::Refuted {
            component: format!(
                "k0_torsion: [{}] vs [{}]",
                join(&left.k0_torsion),
                join(&right.k0_torsion)
            ),
        }
    } else if left.k1_free_rank != right.k1_free_rank {
        MoritaVerdict::Refuted {
            component: format!(
                "k1_free_rank: {} vs {}",
                left.k1_free_rank, right.k1_free_rank
            ),
        }
    } else {
        MoritaVerdict::Consistent
    };
    MoritaComparison {
        verdict,
        left,
        right,
    }
}

fn join(xs: &[BigInt]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Cokernel presentation of an arbitrary integer matrix (viewed as a map
/// into the row lattice): free rank and invariant factors > 1. Used for
/// abelianizations of finite presentations.
pub fn cokernel(m: &IntMatrix) -> (usize, Vec<BigInt>) {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let torsion = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| d > &BigInt::one())
        .collect();
    (m.rows() - rank, torsion)
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

    fn two_cycle() -> DiscreteGraph {
        DiscreteGraph::from_parts(&["0", "1"], &[("e0", "0", "1"), ("e1", "1", "0")]).unwrap()
    }

    #[test]
    fn bouquet_of_two_loops_has_trivial_k_theory() {
        // presentation matrix [1]
        let k = graph_k_theory(&bouquet(2));
        assert_eq!(k.k0_free_rank, 0);
        assert!(k.k0_torsion.is_empty());
        assert_eq!(k.k1_free_rank, 0);
    }

    #[test]
    fn bouquet_of_n_loops_has_cyclic_k0() {
        // presentation matrix [n-1]
        for n in 2..=7 {
            let k = graph_k_theory(&bouquet(n));
            assert_eq!(k.k0_free_rank, 0);
            assert_eq!(k.k1_free_rank, 0);
            if n == 2 {
                assert!(k.k0_torsion.is_empty());
            } else {
                assert_eq!(k.k0_torsion, vec![BigInt::from(n as i64 - 1)]);
            }
        }
    }

    #[test]
    fn two_cycle_matrix_and_k_theory() {
        let m = k_theory_matrix(&two_cycle());
        assert_eq!(m, IntMatrix::from_i64(2, 2, &[-1, 1, 1, -1]).unwrap());
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::from_i64(2, 2, &[1, 0, 0, 0]).unwrap());
        let k = graph_k_theory(&two_cycle());
        assert_eq!(k.k0_free_rank, 1);
        assert!(k.k0_torsion.is_empty());
        assert_eq!(k.k1_free_rank, 1);
    }

    #[test]
    fn loop_and_two_cycle_are_consistent() {
        let comparison = morita_witness(&two_cycle(), &bouquet(1));
        assert_eq!(comparison.verdict, MoritaVerdict::Consistent);
        assert_eq!(comparison.left.k0_free_rank, 1);
        assert_eq!(comparison.right.k1_free_rank, 1);
    }

    #[test]
    fn different_bouquets_are_refuted() {
        let comparison = morita_witness(&bouquet(2), &bouquet(3));
        match comparison.verdict {
            MoritaVerdict::Refuted { component } => {
                assert!(component.contains("k0_torsion"));
            }
            MoritaVerdict::Consistent => panic!("O_2 and O_3 have different K0"),
        }
    }

    #[test]
    fn self_comparison_is_consistent() {
        let g = two_cycle();
        assert_eq!(morita_witness(&g, &g).verdict, MoritaVerdict::Consistent);
    }

    #[test]
    fn sources_are_excluded_from_the_domain() {
        // single edge u <- v: v is a source, so the matrix is 2x1
        let g = DiscreteGraph::from_parts(&["u", "v"], &[("e", "v", "u")]).unwrap();
        let m = k_theory_matrix(&g);
        assert_eq!((m.rows(), m.cols()), (2, 1));
        let k = graph_k_theory(&g);
        // column (-1, 1): rank 1, so K0 = Z and K1 = 0 (this algebra is M_2)
        assert_eq!(k.k0_free_rank, 1);
        assert!(k.k0_torsion.is_empty());
        assert_eq!(k.k1_free_rank, 0);
    }

    #[test]
    fn free_rank_difference_matches_source_count() {
        for g in [bouquet(4), two_cycle()] {
            let k = graph_k_theory(&g);
            let regular = g.vertex_classes().regular.len();
            assert_eq!(
                k.k0_free_rank as i64 - k.k1_free_rank as i64,
                g.vertex_count() as i64 - regular as i64
            );
        }
    }
}
