//! Canonical text formats for graphs, weights, boosters, hinges and
//! absorber certificates.
//!
//! Every file is a JSON document. Vertex labels are integers or strings;
//! integers sort before strings. Vertices created during a construction are
//! written as `"_a<N>"`, a prefix that user graphs may not use.
//!
//! Graph file:
//! ```text
//! {
//!   "r": 2,
//!   "vertices": [1, 2, 3],
//!   "edges": [
//!     [1, 2],
//!     [1, 3],
//!     [2, 3]
//!   ]
//! }
//! ```
//! Certificate file: `q`, `r`, graphs `l` and `a`, clique lists
//! `decomposition_a` (of A) and `decomposition_al` (of A + L), and a
//! `provenance` block that verification ignores.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::assembly::{AbsorberCertificate, CliqueSource, Sign};
use crate::booster::Booster;
use crate::hinge::Hinge;
use crate::hypergraph::{Clique, Decomposition, Edge, RGraph, VertexId, Violation};
use crate::integral::SignedDecomposition;

pub const FRESH_PREFIX: &str = "_a";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Str(String),
}

impl Label {
    fn is_reserved(&self) -> bool {
        matches!(self, Label::Str(s) if s.starts_with(FRESH_PREFIX))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Str(s) => write!(f, "{s:?}"),
        }
    }
}

/// Bijection between labels and internal vertex ids. Ids without a label are
/// written as fresh labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    ids: BTreeMap<Label, VertexId>,
    labels: BTreeMap<VertexId, Label>,
}

impl LabelTable {
    /// Assigns ids 0, 1, ... in label order.
    pub fn from_labels(labels: impl IntoIterator<Item = Label>) -> Self {
        let sorted: BTreeSet<Label> = labels.into_iter().collect();
        let mut table = LabelTable::default();
        for (i, l) in sorted.into_iter().enumerate() {
            let v = VertexId(i as u32);
            table.ids.insert(l.clone(), v);
            table.labels.insert(v, l);
        }
        table
    }

    /// The table for labels 1..=count.
    pub fn numbered(count: usize) -> Self {
        Self::from_labels((1..=count as i64).map(Label::Int))
    }

    pub fn id(&self, label: &Label) -> Option<VertexId> {
        self.ids.get(label).copied()
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.labels
            .get(&v)
            .cloned()
            .unwrap_or_else(|| Label::Str(format!("{FRESH_PREFIX}{}", v.0)))
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Labels of a vertex set, sorted.
    pub fn set(&self, vs: &[VertexId]) -> Vec<Label> {
        let mut out: Vec<Label> = vs.iter().map(|v| self.label(*v)).collect();
        out.sort();
        out
    }

    pub fn edge_text(&self, e: &Edge) -> String {
        let parts: Vec<String> = self
            .set(e.vertices())
            .iter()
            .map(Label::to_string)
            .collect();
        format!("[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {message}")]
pub struct ParseError {
    pub location: String,
    pub message: String,
}

impl ParseError {
    fn at(location: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            location: location.into(),
            message: message.into(),
        }
    }

    fn json(e: serde_json::Error) -> Self {
        ParseError::at(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub r: usize,
    pub vertices: Vec<Label>,
    pub edges: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub clique: Vec<Label>,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub q: usize,
    pub r: usize,
    pub vertices: Vec<Label>,
    pub l1_norm: u64,
    pub weights: Vec<WeightEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoosterFile {
    pub q: usize,
    pub r: usize,
    pub base: Vec<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layering_steps: Option<usize>,
    pub graph: GraphFile,
    pub off: Vec<Vec<Label>>,
    pub on: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingeFile {
    pub q: usize,
    pub r: usize,
    pub left_clique: Vec<Label>,
    pub right_clique: Vec<Label>,
    pub shared_edge: Vec<Label>,
    pub independent: bool,
    pub graph: GraphFile,
    pub left: Vec<Vec<Label>>,
    pub right: Vec<Vec<Label>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoosterRecordFile {
    pub instance: usize,
    pub sign: String,
    pub base: Vec<Label>,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HingeRecordFile {
    pub id: usize,
    pub edge: Vec<Label>,
    pub negative: usize,
    pub positive: usize,
    pub left_clique: Vec<Label>,
    pub right_clique: Vec<Label>,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceFile {
    pub padding: Vec<Label>,
    pub weights: Vec<WeightEntry>,
    pub boosters: Vec<BoosterRecordFile>,
    pub hinges: Vec<HingeRecordFile>,
    /// Source of each clique of `decomposition_a`, in the same order.
    pub sources_a: Vec<String>,
    pub sources_al: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub q: usize,
    pub r: usize,
    pub l: GraphFile,
    pub a: GraphFile,
    pub decomposition_a: Vec<Vec<Label>>,
    pub decomposition_al: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceFile>,
}

/// Writes a value as indented JSON. Containers holding only scalars, and
/// record objects inside lists, stay on one line.
pub fn to_canonical_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("plain data serializes");
    let mut out = String::new();
    write_value(&mut out, &v, 0, false);
    out.push('\n');
    out
}

fn height(v: &Value) -> usize {
    match v {
        Value::Array(xs) => 1 + xs.iter().map(height).max().unwrap_or(0),
        Value::Object(m) => 1 + m.values().map(height).max().unwrap_or(0),
        _ => 0,
    }
}

fn write_compact(out: &mut String, v: &Value) {
    match v {
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_compact(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_compact(out, x);
            }
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize, in_list: bool) {
    let h = height(v);
    if h <= 1 || (in_list && v.is_object() && h <= 2) {
        write_compact(out, v);
        return;
    }
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Array(xs) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, x, indent + 2, true);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Object(m) => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, indent + 2, false);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
        _ => unreachable!("scalars have height 0"),
    }
}

fn sorted_sets<'a>(
    table: &LabelTable,
    sets: impl IntoIterator<Item = &'a [VertexId]>,
) -> Vec<Vec<Label>> {
    let mut out: Vec<Vec<Label>> = sets.into_iter().map(|s| table.set(s)).collect();
    out.sort();
    out
}

fn clique_lists(table: &LabelTable, d: &Decomposition) -> Vec<Vec<Label>> {
    sorted_sets(table, d.cliques().iter().map(Clique::vertices))
}

pub fn graph_file(g: &RGraph, table: &LabelTable) -> GraphFile {
    let vs: Vec<VertexId> = g.vertices().iter().copied().collect();
    GraphFile {
        r: g.r(),
        vertices: table.set(&vs),
        edges: sorted_sets(table, g.edges().iter().map(Edge::vertices)),
    }
}

pub fn emit_graph(g: &RGraph, table: &LabelTable) -> String {
    to_canonical_text(&graph_file(g, table))
}

fn build_graph(file: &GraphFile, table: &LabelTable, path: &str) -> Result<RGraph, ParseError> {
    if file.r == 0 {
        return Err(ParseError::at(
            format!("{path}r"),
            "uniformity must be positive",
        ));
    }
    let mut seen = BTreeSet::new();
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for (i, l) in file.vertices.iter().enumerate() {
        if !seen.insert(l) {
            return Err(ParseError::at(
                format!("{path}vertices[{i}]"),
                format!("duplicate vertex {l}"),
            ));
        }
        vertices.push(table.id(l).expect("table covers the vertex list"));
    }
    let mut g = RGraph::empty(file.r);
    for v in vertices {
        g.add_vertex(v);
    }
    for (i, labels) in file.edges.iter().enumerate() {
        let loc = || format!("{path}edges[{i}]");
        if labels.len() != file.r {
            return Err(ParseError::at(
                loc(),
                format!("edge has {} vertices, expected {}", labels.len(), file.r),
            ));
        }
        let mut ids = Vec::with_capacity(labels.len());
        for l in labels {
            match table.id(l).filter(|_| seen.contains(l)) {
                Some(v) => ids.push(v),
                None => {
                    return Err(ParseError::at(
                        loc(),
                        format!("vertex {l} is not in the vertex list"),
                    ))
                }
            }
        }
        let e = Edge::new(ids).map_err(|_| ParseError::at(loc(), "repeated vertex in edge"))?;
        let text = table.edge_text(&e);
        if !g
            .add_edge(e)
            .map_err(|err| ParseError::at(loc(), err.to_string()))?
        {
            return Err(ParseError::at(loc(), format!("duplicate edge {text}")));
        }
    }
    Ok(g)
}

/// Parses a user graph. Labels with the reserved prefix are rejected.
pub fn parse_graph(text: &str) -> Result<(RGraph, LabelTable), ParseError> {
    let file: GraphFile = serde_json::from_str(text).map_err(ParseError::json)?;
    if let Some(i) = file.vertices.iter().position(Label::is_reserved) {
        return Err(ParseError::at(
            format!("vertices[{i}]"),
            format!("labels starting with {FRESH_PREFIX:?} are reserved"),
        ));
    }
    let table = LabelTable::from_labels(file.vertices.iter().cloned());
    let g = build_graph(&file, &table, "")?;
    Ok((g, table))
}

pub fn emit_weights(
    w: &SignedDecomposition,
    vertices: &BTreeSet<VertexId>,
    table: &LabelTable,
) -> String {
    let vs: Vec<VertexId> = vertices.iter().copied().collect();
    let mut weights: Vec<WeightEntry> = w
        .weights
        .iter()
        .map(|(c, &weight)| WeightEntry {
            clique: table.set(c.vertices()),
            weight,
        })
        .collect();
    weights.sort_by(|x, y| x.clique.cmp(&y.clique));
    to_canonical_text(&WeightsFile {
        q: w.q,
        r: w.r,
        vertices: table.set(&vs),
        l1_norm: w.l1_norm(),
        weights,
    })
}

pub fn emit_booster(b: &Booster, layering_steps: Option<usize>, table: &LabelTable) -> String {
    to_canonical_text(&BoosterFile {
        q: b.q(),
        r: b.r(),
        base: table.set(b.base.vertices()),
        layering_steps,
        graph: graph_file(&b.graph, table),
        off: clique_lists(table, &b.off),
        on: clique_lists(table, &b.on),
    })
}

pub fn emit_hinge(h: &Hinge, table: &LabelTable) -> String {
    to_canonical_text(&HingeFile {
        q: h.q(),
        r: h.r(),
        left_clique: table.set(h.left_clique.vertices()),
        right_clique: table.set(h.right_clique.vertices()),
        shared_edge: table.set(h.shared_edge.vertices()),
        independent: h.is_independent(),
        graph: graph_file(&h.graph, table),
        left: clique_lists(table, &h.left),
        right: clique_lists(table, &h.right),
    })
}

fn source_text(s: &CliqueSource) -> String {
    match s {
        CliqueSource::BoosterOn(i) => format!("on:{}", i.0),
        CliqueSource::BoosterOff(i) => format!("off:{}", i.0),
        CliqueSource::HingeLeft(i) => format!("hinge-left:{i}"),
        CliqueSource::HingeRight(i) => format!("hinge-right:{i}"),
    }
}

/// Label-sorted cliques with their sources carried along.
fn cliques_with_sources(
    table: &LabelTable,
    d: &Decomposition,
    sources: &[CliqueSource],
) -> (Vec<Vec<Label>>, Vec<String>) {
    let mut rows: Vec<(Vec<Label>, String)> = d
        .cliques()
        .iter()
        .zip(sources)
        .map(|(c, s)| (table.set(c.vertices()), source_text(s)))
        .collect();
    rows.sort();
    rows.into_iter().unzip()
}

pub fn certificate_file(cert: &AbsorberCertificate, table: &LabelTable) -> CertificateFile {
    let p = &cert.provenance;
    let (decomposition_a, sources_a) =
        cliques_with_sources(table, &cert.decomposition_a, &p.sources_a);
    let (decomposition_al, sources_al) =
        cliques_with_sources(table, &cert.decomposition_al, &p.sources_al);
    let mut weights: Vec<WeightEntry> = p
        .weights
        .iter()
        .map(|(c, &weight)| WeightEntry {
            clique: table.set(c.vertices()),
            weight,
        })
        .collect();
    weights.sort_by(|x, y| x.clique.cmp(&y.clique));
    CertificateFile {
        q: cert.q,
        r: cert.r,
        l: graph_file(&cert.l, table),
        a: graph_file(&cert.a, table),
        decomposition_a,
        decomposition_al,
        provenance: Some(ProvenanceFile {
            padding: table.set(&p.padding),
            weights,
            boosters: p
                .boosters
                .iter()
                .map(|b| BoosterRecordFile {
                    instance: b.instance.0,
                    sign: match b.sign {
                        Sign::Positive => "+".into(),
                        Sign::Negative => "-".into(),
                    },
                    base: table.set(b.base.vertices()),
                    vertices: b.vertices,
                    edges: b.edges,
                })
                .collect(),
            hinges: p
                .hinges
                .iter()
                .map(|h| HingeRecordFile {
                    id: h.id,
                    edge: table.set(h.edge.vertices()),
                    negative: h.negative.0,
                    positive: h.positive.0,
                    left_clique: table.set(h.left_clique.vertices()),
                    right_clique: table.set(h.right_clique.vertices()),
                    edges: h.edges,
                })
                .collect(),
            sources_a,
            sources_al,
        }),
    }
}

pub fn emit_certificate(cert: &AbsorberCertificate, table: &LabelTable) -> String {
    to_canonical_text(&certificate_file(cert, table))
}

/// The parts of a certificate that verification reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedCertificate {
    pub q: usize,
    pub r: usize,
    pub l: RGraph,
    pub a: RGraph,
    pub cliques_a: Vec<Clique>,
    pub cliques_al: Vec<Clique>,
    pub table: LabelTable,
}

fn build_cliques(
    lists: &[Vec<Label>],
    table: &LabelTable,
    field: &str,
) -> Result<Vec<Clique>, ParseError> {
    lists
        .iter()
        .enumerate()
        .map(|(i, labels)| {
            let ids = labels
                .iter()
                .map(|l| table.id(l).expect("table covers cliques"));
            Clique::new(ids)
                .map_err(|_| ParseError::at(format!("{field}[{i}]"), "repeated vertex in clique"))
        })
        .collect()
}

/// Parses a certificate using nothing but the file contents. Fresh labels
/// are accepted here.
pub fn parse_certificate(text: &str) -> Result<ParsedCertificate, ParseError> {
    let file: CertificateFile = serde_json::from_str(text).map_err(ParseError::json)?;
    if file.r == 0 || file.q <= file.r {
        return Err(ParseError::at(
            "q",
            format!("need q > r > 0, got q={} r={}", file.q, file.r),
        ));
    }
    for (name, g) in [("l", &file.l), ("a", &file.a)] {
        if g.r != file.r {
            return Err(ParseError::at(
                format!("{name}.r"),
                format!("expected {}, found {}", file.r, g.r),
            ));
        }
    }
    let labels = file
        .l
        .vertices
        .iter()
        .chain(&file.a.vertices)
        .chain(file.decomposition_a.iter().flatten())
        .chain(file.decomposition_al.iter().flatten())
        .cloned();
    let table = LabelTable::from_labels(labels);
    Ok(ParsedCertificate {
        q: file.q,
        r: file.r,
        l: build_graph(&file.l, &table, "l.")?,
        a: build_graph(&file.a, &table, "a.")?,
        cliques_a: build_cliques(&file.decomposition_a, &table, "decomposition_a")?,
        cliques_al: build_cliques(&file.decomposition_al, &table, "decomposition_al")?,
        table,
    })
}

pub fn describe_violation(v: &Violation, table: &LabelTable) -> String {
    match v {
        Violation::MalformedClique { clique } => format!("clique #{clique} has the wrong size"),
        Violation::ForeignVertex { clique, vertex } => {
            format!(
                "clique #{clique} uses vertex {} outside the graph",
                table.label(*vertex)
            )
        }
        Violation::ForeignEdge { clique, edge } => {
            format!(
                "clique #{clique} contains non-edge {}",
                table.edge_text(edge)
            )
        }
        Violation::Uncovered(e) => format!("edge {} is not covered", table.edge_text(e)),
        Violation::MultiplyCovered { edge, count } => {
            format!("edge {} is covered {count} times", table.edge_text(edge))
        }
    }
}
