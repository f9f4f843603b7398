use std::collections::{BTreeMap, BTreeSet};

use super::{Clique, Decomposition, Edge, RGraph, VertexArena, VertexId};
use crate::error::{Error, Result};

/// An injective vertex map. Vertices outside the domain map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Relabeling {
    map: BTreeMap<VertexId, VertexId>,
}

impl Relabeling {
    pub fn identity() -> Self {
        Relabeling::default()
    }

    /// Fails with `PinClash` if two sources share an image or a source is
    /// listed twice with different images.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut images = BTreeSet::new();
        for (from, to) in pairs {
            match map.get(&from) {
                Some(&prev) if prev == to => continue,
                Some(_) => return Err(Error::PinClash(to)),
                None => {}
            }
            if !images.insert(to) {
                return Err(Error::PinClash(to));
            }
            map.insert(from, to);
        }
        Ok(Relabeling { map })
    }

    pub fn as_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.map
    }

    pub fn vertex(&self, v: VertexId) -> VertexId {
        self.map.get(&v).copied().unwrap_or(v)
    }

    pub fn edge(&self, e: &Edge) -> Edge {
        Edge::new(e.vertices().iter().map(|v| self.vertex(*v))).expect("relabeling is injective")
    }

    pub fn clique(&self, c: &Clique) -> Clique {
        Clique::new(c.vertices().iter().map(|v| self.vertex(*v))).expect("relabeling is injective")
    }

    pub fn graph(&self, g: &RGraph) -> RGraph {
        RGraph {
            r: g.r,
            vertices: g.vertices.iter().map(|v| self.vertex(*v)).collect(),
            edges: g.edges.iter().map(|e| self.edge(e)).collect(),
        }
    }

    pub fn decomposition(&self, d: &Decomposition) -> Decomposition {
        let cliques = d.cliques().iter().map(|c| self.clique(c)).collect();
        Decomposition::new(d.q(), d.r(), cliques).expect("relabeling is injective")
    }
}

/// Isomorphic copy of `g` in which pinned vertices take their given images and
/// every other vertex receives a fresh arena id, allocated in ascending order
/// of the original ids.
pub fn fresh_embed(
    g: &RGraph,
    pinned: &BTreeMap<VertexId, VertexId>,
    arena: &mut VertexArena,
) -> Result<(RGraph, Relabeling)> {
    let mut pairs: Vec<(VertexId, VertexId)> = pinned.iter().map(|(a, b)| (*a, *b)).collect();
    for v in g.vertices() {
        if !pinned.contains_key(v) {
            pairs.push((*v, arena.fresh()));
        }
    }
    // A pinned image equal to an unpinned source vertex is fine: sources and
    // images live in different copies. Only image collisions matter.
    let relabel = Relabeling::from_pairs(pairs)?;
    Ok((relabel.graph(g), relabel))
}
