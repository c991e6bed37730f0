//! Symmetry toolkit for directed multigraphs.
//!
//! Graphs here are finite directed multigraphs (E⁰, E¹, s, r) with opaque
//! string ids. On top of them the crate builds:
//!
//! - group models (finite Cayley tables, symbolic free / free-abelian
//!   groups) and their actions on graphs, with validation and freeness
//!   probes;
//! - quotients of free actions, skew products E ×_c G along edge cocycles,
//!   and the trivialization of a free finite-group action as a skew product
//!   over its quotient;
//! - Cayley graphs with their translation actions;
//! - connectivity, free presentations of the fundamental group, finite
//!   windows of the universal cover by reduced-walk unfolding, and derived
//!   (voltage) covers over permutation fibers;
//! - symbolic circle graphs 𝕋 → 𝕋 with Baumslag-Solitar fundamental groups
//!   and Bass-Serre tree balls;
//! - exact integer Smith normal form and the K-theory of finite graph
//!   algebras, as a necessary-condition witness for Morita equivalence.
//!
//! Everything is a pure function over immutable values; batches of
//! independent cases parallelize through [`batch`] (rayon behind the
//! `parallel` feature, on by default).

#![forbid(unsafe_code)]

pub mod action;
pub mod batch;
pub mod cayley;
pub mod circle;
pub mod cover;
pub mod error;
pub mod graph;
pub mod group;
pub mod id;
pub mod json;
pub mod ktheory;
pub mod matrix;
pub mod morphism;
pub mod suite;
pub mod walk;

pub use action::{
    extract_cocycle, fiber_bound, skew_product, Cocycle, CocycleExtraction, FiberBound, Freeness,
    GraphAction, PermAction, Quotient, SkewProduct,
};
pub use cayley::{cayley_graph, CayleyGraph, GeneratingSet};
pub use circle::{bass_serre_ball, CircleGraph, GroupPresentation, RotationTag};
pub use cover::{
    connected_components, derived_cover, is_connected, pi1_presentation, universal_cover_ball,
    CoverBall, FreePresentation,
};
pub use error::{Error, Result};
pub use graph::{DiscreteGraph, VertexClassification};
pub use group::{FiniteGroup, GroupElem, GroupModel};
pub use id::{EdgeId, VertexId};
pub use ktheory::{graph_k_theory, morita_witness, KGroups, MoritaVerdict};
pub use matrix::{smith_normal_form, IntMatrix, SmithNormalForm};
pub use morphism::{find_isomorphism, GraphMorphism, MorphismReport};
pub use walk::{enumerate_walks, Letter, Walk};
