//! JSON interchange schemas.
//!
//! JSON is the single interchange format. All serializations are canonical:
//! collections are sorted, struct fields keep a fixed order, and integers
//! that may exceed 64 bits travel as decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::action::{Cocycle, GraphAction, PermAction};
use crate::circle::{CircleGraph, RotationTag};
use crate::cover::{CoverBall, FreePresentation};
use crate::error::{Error, Result};
use crate::graph::{DiscreteGraph, VertexClassification};
use crate::group::{FiniteGroup, GroupModel};
use crate::id::{EdgeId, VertexId};
use crate::ktheory::KGroups;
use crate::matrix::{IntMatrix, SmithNormalForm};
use crate::morphism::GraphMorphism;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub rng: String,
}

/// `{"vertices":[id...],"edges":[{"id","src","rng"}...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(graph: &DiscreteGraph) -> Self {
        GraphDoc {
            vertices: graph.vertices().iter().map(|v| v.to_string()).collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.to_string(),
                    src: graph.src(e).to_string(),
                    rng: graph.rng(e).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<DiscreteGraph> {
        DiscreteGraph::build(
            self.vertices.iter().map(VertexId::new).collect(),
            self.edges
                .iter()
                .map(|e| {
                    (
                        EdgeId::new(&e.id),
                        VertexId::new(&e.src),
                        VertexId::new(&e.rng),
                    )
                })
                .collect(),
        )
    }
}

/// Group schema, tagged by `kind`. `cyclic` and `symmetric` are input
/// shorthands; canonical output always uses the explicit finite table or the
/// symbolic kinds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupDoc {
    Finite {
        elements: Vec<String>,
        table: Vec<Vec<String>>,
    },
    Cyclic {
        order: usize,
    },
    Symmetric {
        degree: usize,
    },
    Free {
        rank: usize,
    },
    FreeAbelian {
        rank: usize,
    },
}

impl GroupDoc {
    pub fn from_group(group: &GroupModel) -> Self {
        match group {
            GroupModel::Finite(g) => GroupDoc::Finite {
                elements: g.names().to_vec(),
                table: g.table_names(),
            },
            GroupModel::Free { rank } => GroupDoc::Free { rank: *rank },
            GroupModel::FreeAbelian { rank } => GroupDoc::FreeAbelian { rank: *rank },
        }
    }

    pub fn to_group(&self) -> Result<GroupModel> {
        match self {
            GroupDoc::Finite { elements, table } => Ok(GroupModel::Finite(
                FiniteGroup::from_table(elements.clone(), table.clone())?,
            )),
            GroupDoc::Cyclic { order } => GroupModel::cyclic(*order),
            GroupDoc::Symmetric { degree } => GroupModel::symmetric(*degree),
            GroupDoc::Free { rank } => GroupModel::free(*rank),
            GroupDoc::FreeAbelian { rank } => GroupModel::free_abelian(*rank),
        }
    }
}

/// `{"group":{...},"act_v":{elem:{v:gv}},"act_e":{elem:{e:ge}}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionDoc {
    pub group: GroupDoc,
    pub act_v: BTreeMap<String, BTreeMap<String, String>>,
    pub act_e: BTreeMap<String, BTreeMap<String, String>>,
}

impl ActionDoc {
    pub fn from_action(action: &GraphAction) -> Self {
        let render_v = |m: &BTreeMap<VertexId, VertexId>| {
            m.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        let render_e = |m: &BTreeMap<EdgeId, EdgeId>| {
            m.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        ActionDoc {
            group: GroupDoc::from_group(action.group()),
            act_v: action
                .vertex_maps()
                .iter()
                .map(|(k, m)| (k.clone(), render_v(m)))
                .collect(),
            act_e: action
                .edge_maps()
                .iter()
                .map(|(k, m)| (k.clone(), render_e(m)))
                .collect(),
        }
    }

    pub fn to_action(&self, graph: &DiscreteGraph) -> Result<GraphAction> {
        let group = self.group.to_group()?;
        let mut gens = Vec::new();
        for (key, vm) in &self.act_v {
            let elem = group.parse_elem(key)?;
            let em = self.act_e.get(key).ok_or_else(|| {
                Error::Parse(format!("element {key} appears in act_v but not act_e"))
            })?;
            if group.is_identity(&elem) {
                // the identity is seeded by the action builder; a supplied
                // map may only restate it
                let fixes_all = vm.iter().all(|(a, b)| a == b) && em.iter().all(|(a, b)| a == b);
                if !fixes_all {
                    return Err(Error::NotHomomorphism {
                        g: key.clone(),
                        h: key.clone(),
                    });
                }
                continue;
            }
            gens.push((
                elem,
                vm.iter()
                    .map(|(a, b)| (VertexId::new(a), VertexId::new(b)))
                    .collect(),
                em.iter()
                    .map(|(a, b)| (EdgeId::new(a), EdgeId::new(b)))
                    .collect(),
            ));
        }
        GraphAction::from_generator_maps(group, graph.clone(), gens)
    }
}

/// `{"group":{...},"label":{edge:word}}`; the group may instead be supplied
/// by a separate group document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    pub label: BTreeMap<String, String>,
}

impl CocycleDoc {
    pub fn from_cocycle(cocycle: &Cocycle) -> Self {
        CocycleDoc {
            group: Some(GroupDoc::from_group(cocycle.group())),
            label: cocycle
                .labels()
                .iter()
                .map(|(e, g)| (e.to_string(), cocycle.group().elem_str(g)))
                .collect(),
        }
    }

    pub fn to_cocycle(
        &self,
        graph: &DiscreteGraph,
        group_override: Option<&GroupModel>,
    ) -> Result<Cocycle> {
        let group = match (group_override, &self.group) {
            (Some(g), _) => g.clone(),
            (None, Some(doc)) => doc.to_group()?,
            (None, None) => {
                return Err(Error::InvalidCocycle(
                    "no group supplied, embed one under \"group\" or pass a group document".into(),
                ))
            }
        };
        let mut labels = BTreeMap::new();
        for (edge, word) in &self.label {
            labels.insert(EdgeId::new(edge), group.parse_elem(word)?);
        }
        Cocycle::new(graph.clone(), group, labels)
    }
}

/// `{"group":{...},"generators":[word...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSetDoc {
    pub group: GroupDoc,
    pub generators: Vec<String>,
}

impl GenSetDoc {
    pub fn to_generating_set(&self) -> Result<crate::cayley::GeneratingSet> {
        let group = self.group.to_group()?;
        let generators = self
            .generators
            .iter()
            .map(|w| group.parse_elem(w))
            .collect::<Result<Vec<_>>>()?;
        crate::cayley::GeneratingSet::new(group, generators)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermSpec {
    Named(String),
    Explicit(BTreeMap<String, Vec<usize>>),
}

/// `{"group":{...},"degree":n,"perms":{elem:[images...]}}`, or
/// `"perms":"regular"` for the right regular representation of a finite
/// group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub perms: PermSpec,
}

impl PermDoc {
    pub fn to_perm_action(&self, group_override: Option<&GroupModel>) -> Result<PermAction> {
        let group = match (group_override, &self.group) {
            (Some(g), _) => g.clone(),
            (None, Some(doc)) => doc.to_group()?,
            (None, None) => {
                return Err(Error::NotAnAction(
                    "no group supplied for the fiber action".into(),
                ))
            }
        };
        match &self.perms {
            PermSpec::Named(name) if name == "regular" => {
                let sigma = PermAction::regular(&group)?;
                if let Some(d) = self.degree {
                    if d != sigma.degree() {
                        return Err(Error::NotAnAction(format!(
                            "regular representation has degree {}, not {d}",
                            sigma.degree()
                        )));
                    }
                }
                Ok(sigma)
            }
            PermSpec::Named(name) => Err(Error::NotAnAction(format!(
                "unknown permutation spec {name}"
            ))),
            PermSpec::Explicit(perms) => {
                let degree = self.degree.ok_or_else(|| {
                    Error::NotAnAction("explicit permutations need a degree".into())
                })?;
                let mut gens = Vec::new();
                for (key, p) in perms {
                    let elem = group.parse_elem(key)?;
                    if group.is_identity(&elem) {
                        if p.iter().enumerate().any(|(x, &y)| x != y) {
                            return Err(Error::NotAnAction(format!(
                                "{key} is the identity but its permutation moves points"
                            )));
                        }
                        continue;
                    }
                    gens.push((elem, p.clone()));
                }
                PermAction::from_generator_perms(group, degree, gens)
            }
        }
    }
}

/// `{"n":2,"m":3,"rotation":"irrational"|"rational"|null}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleDoc {
    pub n: i64,
    pub m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<RotationTag>,
}

impl CircleDoc {
    pub fn to_circle(&self) -> Result<CircleGraph> {
        CircleGraph::new(self.n, self.m, self.rotation)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntValue {
    Num(i64),
    Str(String),
}

/// `{"rows":r,"cols":c,"entries":[[..]..]}` with entries as decimal strings
/// (plain numbers accepted on input).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<IntValue>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &IntMatrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            entries: (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| IntValue::Str(m.get(i, j).to_string()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<IntMatrix> {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        if self.entries.len() != self.rows {
            return Err(Error::InvalidMatrix(format!(
                "expected {} rows, found {}",
                self.rows,
                self.entries.len()
            )));
        }
        for row in &self.entries {
            if row.len() != self.cols {
                return Err(Error::InvalidMatrix(format!(
                    "expected {} columns, found {}",
                    self.cols,
                    row.len()
                )));
            }
            for value in row {
                entries.push(match value {
                    IntValue::Num(x) => BigInt::from(*x),
                    IntValue::Str(s) => s.parse::<BigInt>().map_err(|_| {
                        Error::InvalidMatrix(format!("{s} is not a decimal integer"))
                    })?,
                });
            }
        }
        IntMatrix::new(self.rows, self.cols, entries)
    }
}

/// `{"v_map":{..},"e_map":{..}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub v_map: BTreeMap<String, String>,
    pub e_map: BTreeMap<String, String>,
}

impl MorphismDoc {
    pub fn from_morphism(phi: &GraphMorphism) -> Self {
        MorphismDoc {
            v_map: phi
                .v_map()
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            e_map: phi
                .e_map()
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassesDoc {
    pub sources: Vec<String>,
    pub finite_receivers: Vec<String>,
    pub regular: Vec<String>,
}

impl ClassesDoc {
    pub fn from_classes(classes: &VertexClassification) -> Self {
        let render = |v: &[VertexId]| v.iter().map(|x| x.to_string()).collect();
        ClassesDoc {
            sources: render(&classes.sources),
            finite_receivers: render(&classes.finite_receivers),
            regular: render(&classes.regular),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Pi1Doc {
    pub rank: usize,
    pub generator_edges: Vec<String>,
    pub spanning_forest: Vec<String>,
}

impl Pi1Doc {
    pub fn from_presentation(p: &FreePresentation) -> Self {
        Pi1Doc {
            rank: p.rank,
            generator_edges: p.generator_edges.iter().map(|e| e.to_string()).collect(),
            spanning_forest: p.spanning_forest.iter().map(|e| e.to_string()).collect(),
        }
    }
}

/// Graph JSON plus the covering data of a universal-cover window.
#[derive(Debug, Clone, Serialize)]
pub struct CoverBallDoc {
    pub graph: GraphDoc,
    pub covering_map: MorphismDoc,
    pub boundary: Vec<String>,
    pub basepoint: String,
    pub radius: usize,
}

impl CoverBallDoc {
    pub fn from_ball(ball: &CoverBall) -> Self {
        CoverBallDoc {
            graph: GraphDoc::from_graph(&ball.tree),
            covering_map: MorphismDoc::from_morphism(&ball.covering_map),
            boundary: ball.boundary.iter().map(|v| v.to_string()).collect(),
            basepoint: ball.basepoint.to_string(),
            radius: ball.radius,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KGroupsDoc {
    pub k0_free_rank: usize,
    pub k0_torsion: Vec<String>,
    pub k1_free_rank: usize,
}

impl KGroupsDoc {
    pub fn from_k_groups(k: &KGroups) -> Self {
        KGroupsDoc {
            k0_free_rank: k.k0_free_rank,
            k0_torsion: k.k0_torsion.iter().map(|d| d.to_string()).collect(),
            k1_free_rank: k.k1_free_rank,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SnfDoc {
    pub d: MatrixDoc,
    pub u: MatrixDoc,
    pub v: MatrixDoc,
}

impl SnfDoc {
    pub fn from_snf(snf: &SmithNormalForm) -> Self {
        SnfDoc {
            d: MatrixDoc::from_matrix(&snf.d),
            u: MatrixDoc::from_matrix(&snf.u),
            v: MatrixDoc::from_matrix(&snf.v),
        }
    }
}

/// A classified input document.
#[derive(Debug, Clone)]
pub enum Doc {
    Graph(GraphDoc),
    Action(ActionDoc),
    Cocycle(CocycleDoc),
    Group(GroupDoc),
    GenSet(GenSetDoc),
    Perm(PermDoc),
    Circle(CircleDoc),
    Matrix(MatrixDoc),
}

impl Doc {
    pub fn kind(&self) -> &'static str {
        match self {
            Doc::Graph(_) => "graph",
            Doc::Action(_) => "action",
            Doc::Cocycle(_) => "cocycle",
            Doc::Group(_) => "group",
            Doc::GenSet(_) => "generating-set",
            Doc::Perm(_) => "fiber-action",
            Doc::Circle(_) => "circle",
            Doc::Matrix(_) => "matrix",
        }
    }
}

/// Classify an input document by its distinguishing keys.
pub fn classify(value: &serde_json::Value) -> Result<Doc> {
    let object = value
        .as_object()
        .ok_or_else(|| Error::Parse("input document must be a JSON object".into()))?;
    let parse = |err: serde_json::Error| Error::Parse(err.to_string());
    if object.contains_key("act_v") {
        return Ok(Doc::Action(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("label") {
        return Ok(Doc::Cocycle(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("vertices") {
        return Ok(Doc::Graph(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("entries") {
        return Ok(Doc::Matrix(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("perms") {
        return Ok(Doc::Perm(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("generators") {
        return Ok(Doc::GenSet(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("kind") {
        return Ok(Doc::Group(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    if object.contains_key("n") && object.contains_key("m") {
        return Ok(Doc::Circle(
            serde_json::from_value(value.clone()).map_err(parse)?,
        ));
    }
    Err(Error::Parse(
        "unrecognized document: expected a graph, action, cocycle, group, generating set, \
         fiber action, circle description, or matrix"
            .into(),
    ))
}
