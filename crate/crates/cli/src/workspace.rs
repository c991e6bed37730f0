//! Input document handling and subcommand dispatch.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use graphact::json::{
    classify, ActionDoc, CircleDoc, ClassesDoc, CocycleDoc, CoverBallDoc, Doc, GenSetDoc, GraphDoc,
    KGroupsDoc, MatrixDoc, MorphismDoc, PermDoc, Pi1Doc, SnfDoc,
};
use graphact::suite::{self, CheckOutcome, CheckStatus};
use graphact::{
    bass_serre_ball, cayley_graph, derived_cover, extract_cocycle, graph_k_theory, morita_witness,
    pi1_presentation, skew_product, smith_normal_form, universal_cover_ball, DiscreteGraph, Error,
    GroupModel, MoritaVerdict, VertexId,
};
use serde_json::json;

use crate::{Command, CommonArgs, Format};

pub enum UsageError {
    Usage(String),
    Domain(Error),
    /// The check report itself, emitted with exit code 1.
    CheckFailed(Output),
}

impl From<Error> for UsageError {
    fn from(err: Error) -> Self {
        UsageError::Domain(err)
    }
}

pub enum Output {
    Json(serde_json::Value),
    Text(String),
}

pub struct Workspace {
    docs: Vec<(PathBuf, Doc)>,
}

impl Workspace {
    pub fn load(paths: &[PathBuf]) -> Result<Self, Error> {
        let mut docs = Vec::new();
        for path in paths {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let doc = classify(&value)?;
            docs.push((path.clone(), doc));
        }
        Ok(Workspace { docs })
    }

    fn graphs(&self) -> Vec<(&Path, &GraphDoc)> {
        self.docs
            .iter()
            .filter_map(|(p, d)| match d {
                Doc::Graph(g) => Some((p.as_path(), g)),
                _ => None,
            })
            .collect()
    }

    fn one_graph(&self) -> Result<DiscreteGraph, UsageError> {
        let graphs = self.graphs();
        match graphs.len() {
            0 => Err(UsageError::Usage(
                "this subcommand needs a graph document (--in FILE)".into(),
            )),
            1 => Ok(graphs[0].1.to_graph()?),
            n => Err(UsageError::Usage(format!(
                "this subcommand needs exactly one graph document, {n} supplied"
            ))),
        }
    }

    fn action(&self) -> Result<&ActionDoc, UsageError> {
        self.docs
            .iter()
            .find_map(|(_, d)| match d {
                Doc::Action(a) => Some(a),
                _ => None,
            })
            .ok_or_else(|| UsageError::Usage("this subcommand needs an action document".into()))
    }

    fn cocycle(&self) -> Result<&CocycleDoc, UsageError> {
        self.docs
            .iter()
            .find_map(|(_, d)| match d {
                Doc::Cocycle(c) => Some(c),
                _ => None,
            })
            .ok_or_else(|| UsageError::Usage("this subcommand needs a cocycle document".into()))
    }

    fn group_override(&self) -> Result<Option<GroupModel>, UsageError> {
        match self.docs.iter().find_map(|(_, d)| match d {
            Doc::Group(g) => Some(g),
            _ => None,
        }) {
            Some(doc) => Ok(Some(doc.to_group()?)),
            None => Ok(None),
        }
    }

    fn genset(&self) -> Result<&GenSetDoc, UsageError> {
        self.docs
            .iter()
            .find_map(|(_, d)| match d {
                Doc::GenSet(g) => Some(g),
                _ => None,
            })
            .ok_or_else(|| {
                UsageError::Usage("this subcommand needs a generating-set document".into())
            })
    }

    fn perm(&self) -> Result<&PermDoc, UsageError> {
        self.docs
            .iter()
            .find_map(|(_, d)| match d {
                Doc::Perm(p) => Some(p),
                _ => None,
            })
            .ok_or_else(|| {
                UsageError::Usage("this subcommand needs a fiber-action document".into())
            })
    }

    fn circle(&self) -> Result<&CircleDoc, UsageError> {
        self.docs
            .iter()
            .find_map(|(_, d)| match d {
                Doc::Circle(c) => Some(c),
                _ => None,
            })
            .ok_or_else(|| {
                UsageError::Usage("this subcommand needs a circle document with n and m".into())
            })
    }

    fn matrix(&self) -> Option<&MatrixDoc> {
        self.docs.iter().find_map(|(_, d)| match d {
            Doc::Matrix(m) => Some(m),
            _ => None,
        })
    }

    fn cocycle_doc_opt(&self) -> Option<&CocycleDoc> {
        self.docs.iter().find_map(|(_, d)| match d {
            Doc::Cocycle(c) => Some(c),
            _ => None,
        })
    }

    fn action_doc_opt(&self) -> Option<&ActionDoc> {
        self.docs.iter().find_map(|(_, d)| match d {
            Doc::Action(a) => Some(a),
            _ => None,
        })
    }
}

fn base_vertex(args: &CommonArgs, graph: &DiscreteGraph) -> Result<VertexId, UsageError> {
    match &args.base {
        Some(name) => {
            let v = VertexId::new(name);
            if !graph.has_vertex(&v) {
                return Err(UsageError::Domain(Error::Parse(format!(
                    "unknown base vertex {name}"
                ))));
            }
            Ok(v)
        }
        None => graph
            .vertices()
            .first()
            .cloned()
            .ok_or_else(|| UsageError::Usage("the graph has no vertices to base at".into())),
    }
}

fn require_radius(args: &CommonArgs) -> Result<usize, UsageError> {
    args.radius
        .ok_or_else(|| UsageError::Usage("this subcommand needs --radius N".into()))
}

/// Render a graph-valued result: its JSON document (under `graph`, with the
/// given extras) or, with `--format dot`, the stable DOT text.
fn graph_output(args: &CommonArgs, graph: &DiscreteGraph, extras: serde_json::Value) -> Output {
    match args.format {
        Format::Dot => Output::Text(graph.to_dot()),
        Format::Json => {
            let mut object = serde_json::Map::new();
            object.insert(
                "graph".into(),
                serde_json::to_value(GraphDoc::from_graph(graph)).unwrap(),
            );
            if let serde_json::Value::Object(extra) = extras {
                for (k, v) in extra {
                    object.insert(k, v);
                }
            }
            Output::Json(serde_json::Value::Object(object))
        }
    }
}

fn json_only(args: &CommonArgs, value: serde_json::Value) -> Result<Output, UsageError> {
    if args.format == Format::Dot {
        return Err(UsageError::Usage(
            "--format dot is only valid for graph-valued results".into(),
        ));
    }
    Ok(Output::Json(value))
}

pub fn dispatch(
    command: &Command,
    args: &CommonArgs,
    ws: &Workspace,
) -> Result<Output, UsageError> {
    match command {
        Command::Validate(_) => {
            let graph = ws.one_graph()?;
            Ok(graph_output(args, &graph, json!({})))
        }
        Command::Classes(_) => {
            let graph = ws.one_graph()?;
            let classes = ClassesDoc::from_classes(&graph.vertex_classes());
            json_only(args, serde_json::to_value(classes).unwrap())
        }
        Command::Quotient(_) => {
            let graph = ws.one_graph()?;
            let action = ws.action()?.to_action(&graph)?;
            let quotient = action.quotient_graph()?;
            let map = MorphismDoc::from_morphism(&quotient.map);
            Ok(graph_output(
                args,
                &quotient.graph,
                json!({ "map": serde_json::to_value(map).unwrap() }),
            ))
        }
        Command::Skew(_) => {
            let graph = ws.one_graph()?;
            let group = ws.group_override()?;
            let cocycle = ws.cocycle()?.to_cocycle(&graph, group.as_ref())?;
            let skew = skew_product(&cocycle, args.radius)?;
            let mut extras = serde_json::Map::new();
            extras.insert(
                "projection".into(),
                serde_json::to_value(MorphismDoc::from_morphism(&skew.projection)).unwrap(),
            );
            if let Some(action) = &skew.action {
                extras.insert(
                    "action".into(),
                    serde_json::to_value(ActionDoc::from_action(action)).unwrap(),
                );
            }
            Ok(graph_output(
                args,
                &skew.graph,
                serde_json::Value::Object(extras),
            ))
        }
        Command::ExtractCocycle(_) => {
            let graph = ws.one_graph()?;
            let action = ws.action()?.to_action(&graph)?;
            let extraction = extract_cocycle(&action)?;
            json_only(
                args,
                json!({
                    "quotient": GraphDoc::from_graph(&extraction.quotient),
                    "quotient_map": MorphismDoc::from_morphism(&extraction.quotient_map),
                    "cocycle": CocycleDoc::from_cocycle(&extraction.cocycle),
                    "skew": GraphDoc::from_graph(&extraction.skew.graph),
                    "iso": MorphismDoc::from_morphism(&extraction.iso),
                }),
            )
        }
        Command::Cayley(_) => {
            let gens = ws.genset()?.to_generating_set()?;
            let cayley = cayley_graph(&gens, args.radius)?;
            let mut extras = serde_json::Map::new();
            if let Some(action) = &cayley.action {
                extras.insert(
                    "action".into(),
                    serde_json::to_value(ActionDoc::from_action(action)).unwrap(),
                );
            }
            Ok(graph_output(
                args,
                &cayley.graph,
                serde_json::Value::Object(extras),
            ))
        }
        Command::Pi1(_) => {
            let graph = ws.one_graph()?;
            let presentation = pi1_presentation(&graph)?;
            json_only(
                args,
                serde_json::to_value(Pi1Doc::from_presentation(&presentation)).unwrap(),
            )
        }
        Command::Cover(_) => {
            let graph = ws.one_graph()?;
            let radius = require_radius(args)?;
            let base = base_vertex(args, &graph)?;
            let ball = universal_cover_ball(&graph, &base, radius)?;
            match args.format {
                Format::Dot => Ok(Output::Text(ball.tree.to_dot())),
                Format::Json => Ok(Output::Json(
                    serde_json::to_value(CoverBallDoc::from_ball(&ball)).unwrap(),
                )),
            }
        }
        Command::DerivedCover(_) => {
            let graph = ws.one_graph()?;
            let group = ws.group_override()?;
            let cocycle = ws.cocycle()?.to_cocycle(&graph, group.as_ref())?;
            let sigma = ws.perm()?.to_perm_action(Some(cocycle.group()))?;
            let (cover, projection) = derived_cover(&cocycle, &sigma)?;
            Ok(graph_output(
                args,
                &cover,
                json!({
                    "covering_map": MorphismDoc::from_morphism(&projection),
                }),
            ))
        }
        Command::BsTree(_) => {
            let circle = ws.circle()?;
            let radius = require_radius(args)?;
            let ball = bass_serre_ball(circle.n, circle.m, radius)?;
            Ok(graph_output(args, &ball, json!({})))
        }
        Command::Circle(_) => {
            let circle = ws.circle()?.to_circle()?;
            let presentation = circle.pi1_presentation()?;
            let cover = circle.universal_cover_description()?;
            let algebra = circle.algebra_properties();
            json_only(
                args,
                json!({
                    "pi1": presentation,
                    "universal_cover": cover,
                    "algebra": algebra,
                }),
            )
        }
        Command::Ktheory(_) => {
            if let Some(matrix) = ws.matrix() {
                let m = matrix.to_matrix()?;
                let snf = smith_normal_form(&m);
                return json_only(args, serde_json::to_value(SnfDoc::from_snf(&snf)).unwrap());
            }
            let graph = ws.one_graph()?;
            let k = graph_k_theory(&graph);
            json_only(
                args,
                serde_json::to_value(KGroupsDoc::from_k_groups(&k)).unwrap(),
            )
        }
        Command::Morita(_) => {
            let graphs = ws.graphs();
            if graphs.len() != 2 {
                return Err(UsageError::Usage(format!(
                    "morita needs exactly two graph documents, {} supplied",
                    graphs.len()
                )));
            }
            let left = graphs[0].1.to_graph()?;
            let right = graphs[1].1.to_graph()?;
            let comparison = morita_witness(&left, &right);
            let (verdict, component) = match &comparison.verdict {
                MoritaVerdict::Consistent => ("consistent", None),
                MoritaVerdict::Refuted { component } => ("refuted", Some(component.clone())),
            };
            let mut doc = serde_json::Map::new();
            doc.insert("verdict".into(), json!(verdict));
            if let Some(component) = component {
                doc.insert("component".into(), json!(component));
            }
            doc.insert(
                "left".into(),
                serde_json::to_value(KGroupsDoc::from_k_groups(&comparison.left)).unwrap(),
            );
            doc.insert(
                "right".into(),
                serde_json::to_value(KGroupsDoc::from_k_groups(&comparison.right)).unwrap(),
            );
            doc.insert(
                "note".into(),
                json!(graphact::ktheory::MoritaComparison::NOTE),
            );
            json_only(args, serde_json::Value::Object(doc))
        }
        Command::Check(_) => run_check(args, ws),
        Command::ExportDot(_) => {
            let graph = ws.one_graph()?;
            Ok(Output::Text(graph.to_dot()))
        }
    }
}

/// Run every property suite the supplied documents support: π₁ rank and
/// cover acyclicity per graph, the trivialization roundtrip and fiber bound
/// when an action is present, the quotient-of-skew roundtrip when a cocycle
/// is present.
fn run_check(args: &CommonArgs, ws: &Workspace) -> Result<Output, UsageError> {
    let graphs = ws.graphs();
    if graphs.is_empty() {
        return Err(UsageError::Usage(
            "check needs at least one graph document".into(),
        ));
    }
    let radius = args.radius.unwrap_or(3);
    let mut outcomes: Vec<CheckOutcome> = Vec::new();

    for (_, doc) in &graphs {
        let graph = doc.to_graph()?;
        outcomes.push(suite::pi1_rank_formula(&graph));
        if graph.vertex_count() > 0 {
            let base = base_vertex(args, &graph)?;
            outcomes.push(suite::cover_ball_properties(&graph, &base, radius));
        }
    }

    let first_graph = graphs[0].1.to_graph()?;
    if let Some(action_doc) = ws.action_doc_opt() {
        let action = action_doc.to_action(&first_graph)?;
        outcomes.push(suite::gross_tucker_roundtrip(&action));
        outcomes.push(suite::fiber_bound_consistency(&action));
    }
    if let Some(cocycle_doc) = ws.cocycle_doc_opt() {
        let group = ws.group_override()?;
        let cocycle = cocycle_doc.to_cocycle(&first_graph, group.as_ref())?;
        outcomes.push(suite::quotient_of_skew_roundtrip(&cocycle));
    }

    let failed: BTreeSet<&str> = outcomes
        .iter()
        .filter(|o| o.status == CheckStatus::Fail)
        .map(|o| o.name.as_str())
        .collect();
    let mut doc = serde_json::Map::new();
    if !failed.is_empty() {
        doc.insert("error".into(), json!("CheckFailed"));
    }
    doc.insert("checks".into(), serde_json::to_value(&outcomes).unwrap());
    let value = serde_json::Value::Object(doc);
    if failed.is_empty() {
        json_only(args, value)
    } else {
        Err(UsageError::CheckFailed(Output::Json(value)))
    }
}
