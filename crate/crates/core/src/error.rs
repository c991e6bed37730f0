use thiserror::Error;

/// A single defect found while validating a raw graph description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    /// An edge endpoint names a vertex that is not in the vertex set.
    DanglingEndpoint {
        edge: String,
        endpoint: Endpoint,
        missing: String,
    },
    /// The same id appears twice in the vertex list or the edge list.
    DuplicateId { id: String, kind: IdKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Src,
    Rng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdKind {
    Vertex,
    Edge,
}

impl std::fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphViolation::DanglingEndpoint {
                edge,
                endpoint,
                missing,
            } => {
                let which = match endpoint {
                    Endpoint::Src => "src",
                    Endpoint::Rng => "rng",
                };
                write!(
                    f,
                    "edge {edge} has {which} pointing to missing vertex {missing}"
                )
            }
            GraphViolation::DuplicateId { id, kind } => {
                let which = match kind {
                    IdKind::Vertex => "vertex",
                    IdKind::Edge => "edge",
                };
                write!(f, "duplicate {which} id {id}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid graph: {}", format_violations(.0))]
    Graph(Vec<GraphViolation>),

    #[error("not a graph morphism: {reason}")]
    NotAMorphism { reason: String },

    #[error("isomorphism search refused: {vertices} vertices / {edges} edges exceeds bound {max_vertices}+{max_edges}")]
    SizeBoundExceeded {
        vertices: usize,
        edges: usize,
        max_vertices: usize,
        max_edges: usize,
    },

    #[error("enumeration would exceed the cap of {cap} items")]
    ExplosionGuard { cap: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("action of {element} is not equivariant at edge {edge}")]
    NotEquivariant { element: String, edge: String },

    #[error("action maps do not compose as a homomorphism at ({g}, {h})")]
    NotHomomorphism { g: String, h: String },

    #[error("{element} does not act as a bijection")]
    NotBijective { element: String },

    #[error("action is not free: {element} fixes vertex {vertex}")]
    NotFree { element: String, vertex: String },

    #[error("a truncation radius is required for an infinite group")]
    TruncationRequired,

    #[error("edge {0} is not an edge of the quotient graph")]
    UnknownEdge(String),

    #[error("the listed elements do not generate the group ({missing} is not reached)")]
    NotGenerating { missing: String },

    #[error("graph is not connected")]
    NotConnected,

    #[error("not a group action on the fiber: {0}")]
    NotAnAction(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(violations: &[GraphViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// Stable machine-readable name, used in the CLI `error` field.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Graph(violations) => match violations.first() {
                Some(GraphViolation::DanglingEndpoint { .. }) => "DanglingEndpoint",
                Some(GraphViolation::DuplicateId { .. }) => "DuplicateId",
                None => "InvalidGraph",
            },
            Error::NotAMorphism { .. } => "NotAMorphism",
            Error::SizeBoundExceeded { .. } => "SizeBoundExceeded",
            Error::ExplosionGuard { .. } => "ExplosionGuard",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::NotEquivariant { .. } => "NotEquivariant",
            Error::NotHomomorphism { .. } => "NotHomomorphism",
            Error::NotBijective { .. } => "NotBijective",
            Error::NotFree { .. } => "NotFree",
            Error::TruncationRequired => "TruncationRequired",
            Error::UnknownEdge(_) => "UnknownEdge",
            Error::NotGenerating { .. } => "NotGenerating",
            Error::NotConnected => "NotConnected",
            Error::NotAnAction(_) => "NotAnAction",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::InvalidCocycle(_) => "InvalidCocycle",
            Error::InvalidMatrix(_) => "InvalidMatrix",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
