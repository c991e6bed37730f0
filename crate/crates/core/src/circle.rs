//! Symbolic handling of the circle graphs E⁰ = E¹ = 𝕋 with s(z) = zⁿ and
//! r(z) = e^{2πiθ}zᵐ.
//!
//! Nothing here touches the topology of the circle: θ is carried only as a
//! rational/irrational tag, fundamental groups are returned as finite
//! presentations, and the universal covers as symbolic records. The only
//! honest combinatorics is the Bass-Serre tree of the Baumslag-Solitar group
//! B(n,m) = ⟨a,b | abⁿa⁻¹ = bᵐ⟩, of which we materialize finite balls:
//! vertices are cosets g⟨b⟩, edges cosets g⟨bⁿ⟩, with s(g⟨bⁿ⟩) = g⟨b⟩ and
//! r(g⟨bⁿ⟩) = ga⁻¹⟨b⟩.
//!
//! The rotation case is an instance of a general mapping-torus pattern: for
//! a graph with E⁰ = E¹ = X, s = id and r = h a homeomorphism, the
//! realization is the mapping torus of h and the fundamental group is
//! π₁(X) ⋊ ℤ twisted by h. That pattern is recorded here for orientation
//! only; no machinery for arbitrary X exists.

use num_integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::id::{encode_parts, EdgeId, VertexId};
use crate::ktheory::cokernel;
use crate::matrix::IntMatrix;
use num_bigint::BigInt;

pub const DEFAULT_TREE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationTag {
    Rational,
    Irrational,
}

/// The topological graph z ↦ zⁿ (source), z ↦ e^{2πiθ}zᵐ (range) on the
/// circle, with θ tracked symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircleGraph {
    n: i64,
    m: i64,
    rotation: Option<RotationTag>,
}

impl CircleGraph {
    /// Both winding numbers must be nonzero: z ↦ zⁿ is a local
    /// homeomorphism exactly when n ≠ 0.
    pub fn new(n: i64, m: i64, rotation: Option<RotationTag>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedCase(
                "the source winding n must be nonzero (s must be a local homeomorphism)".into(),
            ));
        }
        if m == 0 {
            return Err(Error::UnsupportedCase(
                "the range winding m must be nonzero".into(),
            ));
        }
        Ok(CircleGraph { n, m, rotation })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn rotation(&self) -> Option<RotationTag> {
        self.rotation
    }

    fn case(&self) -> Result<Case> {
        match (self.n, self.m, self.rotation) {
            (1, 1, Some(tag)) => Ok(Case::Rotation(tag)),
            (1, 1, None) => Ok(Case::Rotation(RotationTag::Rational)),
            (n, m, None) if n >= 1 && m >= 1 => Ok(Case::Power { n, m }),
            _ => Err(Error::UnsupportedCase(format!(
                "no symbolic model for n={}, m={}, rotation={:?}",
                self.n, self.m, self.rotation
            ))),
        }
    }

    /// Fundamental group of the geometric realization.
    ///
    /// The rotation case (n = m = 1) gives the 2-torus, so ℤ²; the power
    /// case gives the Baumslag-Solitar group B(n,m) with the amenability
    /// facts recorded: amenable when n = 1 or m = 1, non-amenable when both
    /// differ from 1 and are coprime, otherwise unknown.
    pub fn pi1_presentation(&self) -> Result<GroupPresentation> {
        match self.case()? {
            Case::Rotation(_) => Ok(GroupPresentation {
                generators: vec!["a".into(), "b".into()],
                relators: vec![bs_relator(1, 1)],
                tags: PresentationTags {
                    kind: PresentationKind::FreeAbelian,
                    amenability: Amenability::Amenable,
                },
            }),
            Case::Power { n, m } => {
                let amenability = if n == 1 || m == 1 {
                    Amenability::Amenable
                } else if gcd(n, m) == 1 {
                    Amenability::NonAmenable
                } else {
                    Amenability::Unknown
                };
                let kind = if n == 1 && m == 1 {
                    PresentationKind::FreeAbelian
                } else {
                    PresentationKind::BaumslagSolitar
                };
                Ok(GroupPresentation {
                    generators: vec!["a".into(), "b".into()],
                    relators: vec![bs_relator(n, m)],
                    tags: PresentationTags { kind, amenability },
                })
            }
        }
    }

    /// Symbolic description of the universal covering graph and its deck
    /// transformation group.
    pub fn universal_cover_description(&self) -> Result<CoverRecord> {
        match self.case()? {
            Case::Rotation(tag) => {
                let theta = match (self.rotation, tag) {
                    (None, _) => "0".to_string(),
                    (Some(RotationTag::Rational), _) => "theta (rational)".to_string(),
                    (Some(RotationTag::Irrational), _) => "theta (irrational)".to_string(),
                };
                Ok(CoverRecord {
                    vertex_space: "R x Z".into(),
                    edge_space: "R x Z".into(),
                    source_map: "s(y,k) = (y,k)".into(),
                    range_map: "r(y,k) = (y+theta, k+1)".into(),
                    deck_action: "(j,m).(y,k) = (j+y+m*theta, k+m)".into(),
                    deck_group: self.pi1_presentation()?,
                    theta: Some(theta),
                })
            }
            Case::Power { n, m } => Ok(CoverRecord {
                vertex_space: "T0 x R".into(),
                edge_space: "T1 x R".into(),
                source_map: format!("s(t,y) = (s(t), {n}*y)"),
                range_map: format!("r(t,y) = (r(t), {m}*y)"),
                deck_action: "left translation on the Bass-Serre tree factor".into(),
                deck_group: self.pi1_presentation()?,
                theta: None,
            }),
        }
    }

    /// Property flags of the associated algebra, quoted facts only: the
    /// power case with m ∉ nℤ is simple and purely infinite; the irrational
    /// rotation case is the algebra A_θ. Everything else is left unknown.
    pub fn algebra_properties(&self) -> AlgebraProperties {
        let mut props = AlgebraProperties {
            simple: None,
            purely_infinite: None,
            algebra: None,
        };
        match (self.n, self.m, self.rotation) {
            (1, 1, Some(RotationTag::Irrational)) => {
                props.algebra = Some("irrational rotation algebra A_theta".into());
            }
            (n, m, None) if n >= 1 && m % n != 0 => {
                props.simple = Some(true);
                props.purely_infinite = Some(true);
            }
            _ => {}
        }
        props
    }
}

enum Case {
    Rotation(RotationTag),
    Power { n: i64, m: i64 },
}

fn bs_relator(n: i64, m: i64) -> String {
    // a b^n a^-1 b^-m
    let bn = if n == 1 {
        "b".to_string()
    } else {
        format!("b^{n}")
    };
    let bm = format!("b^-{m}");
    format!("a*{bn}*a^-1*{bm}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresentationKind {
    FreeAbelian,
    BaumslagSolitar,
    Semidirect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Amenability {
    Amenable,
    NonAmenable,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationTags {
    pub kind: PresentationKind,
    pub amenability: Amenability,
}

/// A finite presentation ⟨generators | relators⟩ with classification tags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub tags: PresentationTags,
}

impl GroupPresentation {
    /// Exponent-sum matrix (one row per generator, one column per relator).
    pub fn relator_exponent_matrix(&self) -> Result<IntMatrix> {
        let mut entries = vec![0i64; self.generators.len() * self.relators.len()];
        for (col, relator) in self.relators.iter().enumerate() {
            for (row, sum) in relator_exponents(relator, &self.generators)?
                .into_iter()
                .enumerate()
            {
                entries[row * self.relators.len() + col] = sum;
            }
        }
        IntMatrix::from_i64(self.generators.len(), self.relators.len(), &entries)
    }

    /// Abelianization as (free rank, invariant factors > 1), computed as the
    /// cokernel of the exponent matrix.
    pub fn abelianization(&self) -> Result<(usize, Vec<BigInt>)> {
        Ok(cokernel(&self.relator_exponent_matrix()?))
    }
}

fn relator_exponents(word: &str, generators: &[String]) -> Result<Vec<i64>> {
    let mut sums = vec![0i64; generators.len()];
    if word.trim() == "1" || word.trim().is_empty() {
        return Ok(sums);
    }
    for part in word.split('*') {
        let (name, exp) = match part.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {part}")))?,
            ),
            None => (part.trim(), 1),
        };
        let idx = generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::Parse(format!("{name} is not a listed generator")))?;
        sums[idx] += exp;
    }
    Ok(sums)
}

/// Symbolic record of a universal covering graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub vertex_space: String,
    pub edge_space: String,
    pub source_map: String,
    pub range_map: String,
    pub deck_group: GroupPresentation,
    pub deck_action: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraProperties {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purely_infinite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
}

/// A radius-k ball of the Bass-Serre tree of B(n,m) around the coset ⟨b⟩.
///
/// Around a vertex with Britton-reduced representative g, the incident edge
/// cosets split as g bᵗ ⟨bⁿ⟩ for t = 0..n−1 (source side, neighbours
/// g bᵗ a⁻¹ ⟨b⟩) and g bˢ a ⟨bⁿ⟩ for s = 0..m−1 (range side, neighbours
/// g bˢ a ⟨b⟩), so every interior vertex meets exactly n+m edges. Walking
/// back along the move just taken is excluded by the pinch relations
/// a⁻¹bᵐʲa = bⁿʲ, which single out t = 0 after an `a` move and s = 0 after
/// an `a⁻¹` move; the ball is therefore unfolded with no identifications.
///
/// Vertex ids spell the move word: `()` is the base coset, a move `b^t a^-1`
/// renders as `b{t}A` and `b^s a` as `b{s}a`, joined by dots. Edge ids are
/// `{vertex}|b{t}-` (source-side) and `{vertex}|b{s}+` (range-side) for the
/// vertex they were unfolded from.
pub fn bass_serre_ball(n: i64, m: i64, radius: usize) -> Result<DiscreteGraph> {
    bass_serre_ball_capped(n, m, radius, DEFAULT_TREE_CAP)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Move {
    /// b^t a^-1 : crosses the edge g bᵗ ⟨bⁿ⟩ away from its source
    AInv(i64),
    /// b^s a : crosses the edge g bˢ a ⟨bⁿ⟩ towards its range
    A(i64),
}

pub fn bass_serre_ball_capped(n: i64, m: i64, radius: usize, cap: usize) -> Result<DiscreteGraph> {
    if n < 1 || m < 1 {
        return Err(Error::UnsupportedCase(
            "the Bass-Serre ball needs positive n and m".into(),
        ));
    }

    struct Node {
        id: VertexId,
        last: Option<Move>,
    }

    let mut vertices: Vec<VertexId> = Vec::new();
    let mut edges: Vec<(EdgeId, VertexId, VertexId)> = Vec::new();

    let root = Node {
        id: VertexId::from("()"),
        last: None,
    };
    vertices.push(root.id.clone());
    let mut frontier = vec![root];

    for _ in 0..radius {
        let mut next = Vec::new();
        for node in &frontier {
            let mut moves: Vec<Move> = Vec::new();
            for t in 0..n {
                moves.push(Move::AInv(t));
            }
            for s in 0..m {
                moves.push(Move::A(s));
            }
            for mv in moves {
                // skip the move that backtracks to the parent
                match (node.last, mv) {
                    (Some(Move::AInv(_)), Move::A(0)) => continue,
                    (Some(Move::A(_)), Move::AInv(0)) => continue,
                    _ => {}
                }
                let (token, edge_token) = match mv {
                    Move::AInv(t) => (format!("b{t}A"), format!("b{t}-")),
                    Move::A(s) => (format!("b{s}a"), format!("b{s}+")),
                };
                let child_id = if node.id.as_str() == "()" {
                    VertexId::new(token)
                } else {
                    VertexId::new(format!("{}.{}", node.id, token))
                };
                let edge_id = EdgeId::new(encode_parts(&[node.id.as_str(), &edge_token], '|'));
                // source-side edges leave the current vertex; range-side
                // edges arrive at it
                let (from, to) = match mv {
                    Move::AInv(_) => (node.id.clone(), child_id.clone()),
                    Move::A(_) => (child_id.clone(), node.id.clone()),
                };
                edges.push((edge_id, from, to));
                vertices.push(child_id.clone());
                if vertices.len() > cap {
                    return Err(Error::ExplosionGuard { cap });
                }
                next.push(Node {
                    id: child_id,
                    last: Some(mv),
                });
            }
        }
        frontier = next;
    }

    DiscreteGraph::build(vertices, edges)
}
