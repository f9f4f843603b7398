//! Exact r-uniform hypergraphs, cliques and clique decompositions.
//!
//! Every vertex set is kept sorted and duplicate-free, so two values with the
//! same content compare equal and serialize identically.

mod relabel;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

pub use relabel::{fresh_embed, Relabeling};
pub use verify::{
    clique_through, is_divisible, is_independent, union_edge_disjoint, verify_cliques,
    verify_decomposition, DecompositionReport, Violation,
};

/// Dense internal vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Monotone allocator of fresh vertex ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexArena {
    next: u32,
}

impl VertexArena {
    pub fn starting_at(next: u32) -> Self {
        VertexArena { next }
    }

    /// An arena whose ids are all larger than every id in `used`.
    pub fn above<'a>(used: impl IntoIterator<Item = &'a VertexId>) -> Self {
        let next = used.into_iter().map(|v| v.0 + 1).max().unwrap_or(0);
        VertexArena { next }
    }

    pub fn fresh(&mut self) -> VertexId {
        let v = VertexId(self.next);
        self.next = self.next.checked_add(1).expect("vertex arena exhausted");
        v
    }

    pub fn fresh_many(&mut self, count: usize) -> Vec<VertexId> {
        (0..count).map(|_| self.fresh()).collect()
    }

    pub fn peek(&self) -> VertexId {
        VertexId(self.next)
    }
}

fn canonical(vertices: impl IntoIterator<Item = VertexId>) -> Result<Vec<VertexId>> {
    let mut vs: Vec<VertexId> = vertices.into_iter().collect();
    vs.sort_unstable();
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RepeatedVertex(vs));
    }
    Ok(vs)
}

fn fmt_set(vs: &[VertexId], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{{{}}}", vs.iter().join(","))
}

/// An r-set of vertices in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Vec<VertexId>);

impl Edge {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        canonical(vertices).map(Edge)
    }

    /// Builds an edge from raw ids; panics on repeated vertices.
    pub fn of(ids: &[u32]) -> Self {
        Edge::new(ids.iter().map(|&i| VertexId(i))).expect("repeated vertex in edge literal")
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Edge(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True if every vertex of the edge lies in the sorted slice `set`.
    pub fn is_within(&self, set: &[VertexId]) -> bool {
        self.0.iter().all(|v| set.binary_search(v).is_ok())
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_set(&self.0, f)
    }
}

/// A q-set of vertices standing for a copy of K_q^r; its edges are all r-subsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clique(Vec<VertexId>);

impl Clique {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        canonical(vertices).map(Clique)
    }

    pub fn of(ids: &[u32]) -> Self {
        Clique::new(ids.iter().map(|&i| VertexId(i))).expect("repeated vertex in clique literal")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        e.is_within(&self.0)
    }

    /// All r-subsets, in lexicographic order.
    pub fn edges(&self, r: usize) -> impl Iterator<Item = Edge> + '_ {
        self.0
            .iter()
            .copied()
            .combinations(r)
            .map(Edge::from_sorted)
    }

    /// Number of vertices shared with `other`.
    pub fn overlap(&self, other: &Clique) -> usize {
        self.0.iter().filter(|v| other.contains_vertex(**v)).count()
    }

    pub fn common_vertices(&self, other: &Clique) -> Vec<VertexId> {
        self.0
            .iter()
            .copied()
            .filter(|v| other.contains_vertex(*v))
            .collect()
    }
}

impl fmt::Display for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_set(&self.0, f)
    }
}

/// An r-uniform hypergraph with an explicit vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RGraph {
    r: usize,
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<Edge>,
}

impl RGraph {
    pub fn empty(r: usize) -> Self {
        RGraph {
            r,
            vertices: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn new(
        r: usize,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = RGraph::empty(r);
        g.vertices.extend(vertices);
        for e in edges {
            g.check_edge(&e)?;
            g.edges.insert(e);
        }
        Ok(g)
    }

    /// Graph on `vertices` whose edges are the r-subsets of each listed clique.
    pub fn from_cliques<'a>(
        r: usize,
        vertices: impl IntoIterator<Item = VertexId>,
        cliques: impl IntoIterator<Item = &'a Clique>,
    ) -> Result<Self> {
        let mut g = RGraph::empty(r);
        g.vertices.extend(vertices);
        for c in cliques {
            g.vertices.extend(c.vertices().iter().copied());
            g.edges.extend(c.edges(r));
        }
        Ok(g)
    }

    /// The complete r-graph on `vertices`.
    pub fn complete(r: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let edges = vertices
            .iter()
            .copied()
            .combinations(r)
            .map(Edge::from_sorted)
            .collect();
        RGraph { r, vertices, edges }
    }

    fn check_edge(&self, e: &Edge) -> Result<()> {
        if e.len() != self.r {
            return Err(Error::WrongUniformity {
                edge: e.clone(),
                expected: self.r,
                found: e.len(),
            });
        }
        if !e.vertices().iter().all(|v| self.vertices.contains(v)) {
            return Err(Error::EdgeOutsideVertexSet(e.clone()));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Inserts an edge; returns false if it was already present.
    pub fn add_edge(&mut self, e: Edge) -> Result<bool> {
        self.check_edge(&e)?;
        Ok(self.edges.insert(e))
    }

    pub fn remove_edge(&mut self, e: &Edge) -> bool {
        self.edges.remove(e)
    }

    /// Number of edges containing every vertex of `set`.
    pub fn codegree(&self, set: &[VertexId]) -> usize {
        self.edges
            .iter()
            .filter(|e| set.iter().all(|v| e.contains(*v)))
            .count()
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut deg: BTreeMap<VertexId, usize> = self.vertices.iter().map(|v| (*v, 0)).collect();
        for e in &self.edges {
            for v in e.vertices() {
                *deg.get_mut(v).expect("edge vertex in vertex set") += 1;
            }
        }
        let mut seq: Vec<usize> = deg.into_values().collect();
        seq.sort_unstable();
        seq
    }
}

/// A list of q-cliques partitioning the edges of some r-graph, with an
/// edge-to-clique index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    q: usize,
    r: usize,
    cliques: Vec<Clique>,
    index: BTreeMap<Edge, usize>,
}

impl Decomposition {
    pub fn empty(q: usize, r: usize) -> Self {
        Decomposition {
            q,
            r,
            cliques: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    /// Fails if a clique has the wrong size or two cliques share an edge.
    pub fn new(q: usize, r: usize, cliques: Vec<Clique>) -> Result<Self> {
        let mut d = Decomposition::empty(q, r);
        for c in cliques {
            d.push(c)?;
        }
        Ok(d)
    }

    pub fn push(&mut self, c: Clique) -> Result<()> {
        if c.size() != self.q {
            return Err(Error::WrongCliqueSize {
                expected: self.q,
                found: c.size(),
            });
        }
        let pos = self.cliques.len();
        for e in c.edges(self.r) {
            if self.index.contains_key(&e) {
                // roll back the partially indexed clique
                self.index.retain(|_, p| *p != pos);
                return Err(Error::DoubleCover(e));
            }
            self.index.insert(e, pos);
        }
        self.cliques.push(c);
        Ok(())
    }

    /// Concatenation of several decompositions with pairwise disjoint coverage.
    pub fn merge<'a>(
        q: usize,
        r: usize,
        parts: impl IntoIterator<Item = &'a Decomposition>,
    ) -> Result<Self> {
        let mut d = Decomposition::empty(q, r);
        for part in parts {
            for c in &part.cliques {
                d.push(c.clone())?;
            }
        }
        Ok(d)
    }

    /// Copy with every clique in `drop` removed.
    pub fn without(&self, drop: &BTreeSet<Clique>) -> Self {
        let cliques = self
            .cliques
            .iter()
            .filter(|c| !drop.contains(*c))
            .cloned()
            .collect();
        Decomposition::new(self.q, self.r, cliques).expect("subset of a decomposition")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn covers(&self, e: &Edge) -> bool {
        self.index.contains_key(e)
    }

    pub fn covered_edges(&self) -> impl Iterator<Item = &Edge> {
        self.index.keys()
    }

    pub fn contains_clique(&self, c: &Clique) -> bool {
        match c.edges(self.r).next() {
            Some(e) => self.index.get(&e).is_some_and(|&p| self.cliques[p] == *c),
            None => false,
        }
    }

    /// The unique clique containing `e`.
    pub fn clique_at(&self, e: &Edge) -> Result<&Clique> {
        self.index
            .get(e)
            .map(|&p| &self.cliques[p])
            .ok_or_else(|| Error::NotCovered(e.clone()))
    }

    /// Cliques sorted into canonical order.
    pub fn sorted_cliques(&self) -> Vec<Clique> {
        let mut cs = self.cliques.clone();
        cs.sort();
        cs
    }
}
