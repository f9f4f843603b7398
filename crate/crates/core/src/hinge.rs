//! Hinges between two cliques that share exactly one edge.
//!
//! For an orthogonal booster B of S and an edge e of S, let S' = on(B)[e].
//! Then H = B minus the edges of S' other than e is a hinge for S and S':
//! on(B) without S' decomposes H + (S - e), and off(B) decomposes
//! H + (S' - e) = B.
//!
//! Such a hinge need not be independent, because B may contain edges that mix
//! vertices of S and S'. Two of them glued through a fresh middle clique are:
//! see [`build_independent_hinge`].

use std::collections::{BTreeMap, BTreeSet};

use crate::booster::Booster;
use crate::error::{Error, Result};
use crate::hypergraph::{
    fresh_embed, is_independent, union_edge_disjoint, verify_decomposition, Clique, Decomposition,
    DecompositionReport, Edge, RGraph, VertexArena, VertexId,
};
use crate::layering::{build_orthogonal_booster, cleanse_attachment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hinge {
    pub left_clique: Clique,
    pub right_clique: Clique,
    pub shared_edge: Edge,
    pub graph: RGraph,
    /// Decomposes `graph` plus the left clique minus the shared edge.
    pub left: Decomposition,
    /// Decomposes `graph` plus the right clique minus the shared edge.
    pub right: Decomposition,
}

impl Hinge {
    pub fn r(&self) -> usize {
        self.graph.r()
    }

    pub fn q(&self) -> usize {
        self.left_clique.size()
    }

    /// Whether V(left) ∪ V(right) is independent in the hinge graph.
    pub fn is_independent(&self) -> bool {
        is_independent(&self.graph, &self.attachment_vertices())
    }

    pub fn attachment_vertices(&self) -> BTreeSet<VertexId> {
        self.left_clique
            .vertices()
            .iter()
            .chain(self.right_clique.vertices())
            .copied()
            .collect()
    }

    /// The same hinge read from the other side.
    pub fn swapped(self) -> Hinge {
        Hinge {
            left_clique: self.right_clique,
            right_clique: self.left_clique,
            shared_edge: self.shared_edge,
            graph: self.graph,
            left: self.right,
            right: self.left,
        }
    }

    /// `graph` plus the edges of `side` other than the shared edge.
    pub fn graph_with(&self, side: &Clique) -> RGraph {
        let mut g = self.graph.clone();
        for v in side.vertices() {
            g.add_vertex(*v);
        }
        for e in side.edges(self.r()) {
            if e != self.shared_edge {
                g.add_edge(e).expect("vertices added");
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HingeReport {
    /// The two cliques share exactly the edge `shared_edge`.
    pub single_shared_edge: bool,
    /// No edge of the hinge graph belongs to either clique.
    pub disjoint_from_cliques: bool,
    pub left: DecompositionReport,
    pub right: DecompositionReport,
    pub independent: bool,
}

impl HingeReport {
    pub fn valid(&self) -> bool {
        self.single_shared_edge
            && self.disjoint_from_cliques
            && self.left.valid()
            && self.right.valid()
    }

    pub fn valid_independent(&self) -> bool {
        self.valid() && self.independent
    }
}

pub fn verify_hinge(h: &Hinge) -> HingeReport {
    let r = h.r();
    let common = h.left_clique.common_vertices(&h.right_clique);
    let single_shared_edge = common.len() == r && common == h.shared_edge.vertices();
    let disjoint_from_cliques = !h
        .graph
        .edges()
        .iter()
        .any(|e| h.left_clique.contains_edge(e) || h.right_clique.contains_edge(e));
    HingeReport {
        single_shared_edge,
        disjoint_from_cliques,
        left: verify_decomposition(&h.graph_with(&h.left_clique), &h.left),
        right: verify_decomposition(&h.graph_with(&h.right_clique), &h.right),
        independent: h.is_independent(),
    }
}

/// Hinge between the base S of `b` and S' = on(b)[e].
pub fn hinge_from_booster(b: &Booster, e: &Edge) -> Result<Hinge> {
    let r = b.r();
    if !b.base.contains_edge(e) || e.len() != r {
        return Err(Error::Internal(format!("{e} is not an edge of {}", b.base)));
    }
    let partner = b.on.clique_at(e)?.clone();
    if partner.overlap(&b.base) != r {
        return Err(Error::NotClean(e.clone()));
    }
    let mut graph = b.graph.clone();
    for f in partner.edges(r) {
        if f != *e {
            graph.remove_edge(&f);
        }
    }
    Ok(Hinge {
        left_clique: b.base.clone(),
        right_clique: partner.clone(),
        shared_edge: e.clone(),
        graph,
        left: b.on.without(&BTreeSet::from([partner])),
        right: b.off.clone(),
    })
}

/// Copy of `h` whose right clique is `target`; the left clique stays put and
/// every other vertex is fresh.
pub fn retarget_hinge(h: &Hinge, target: &Clique, arena: &mut VertexArena) -> Result<Hinge> {
    let r = h.r();
    if target.size() != h.q() || !target.contains_edge(&h.shared_edge) {
        return Err(Error::Internal(format!(
            "{target} does not contain the shared edge {}",
            h.shared_edge
        )));
    }
    let common = target.common_vertices(&h.left_clique);
    if common.len() != r {
        return Err(Error::NotSingleEdgeIntersection(common.len()));
    }
    let moving = |c: &Clique| -> Vec<VertexId> {
        c.vertices()
            .iter()
            .copied()
            .filter(|v| !h.shared_edge.contains(*v))
            .collect()
    };
    let mut pins: Vec<(VertexId, VertexId)> =
        h.left_clique.vertices().iter().map(|v| (*v, *v)).collect();
    pins.extend(moving(&h.right_clique).into_iter().zip(moving(target)));
    let mut pinned = BTreeMap::new();
    let mut images = BTreeSet::new();
    for (from, to) in pins {
        if pinned.insert(from, to).is_some_and(|prev| prev != to) || !images.insert(to) {
            return Err(Error::PinClash(to));
        }
    }
    let (graph, map) = fresh_embed(&h.graph, &pinned, arena)?;
    Ok(Hinge {
        left_clique: h.left_clique.clone(),
        right_clique: target.clone(),
        shared_edge: h.shared_edge.clone(),
        graph,
        left: map.decomposition(&h.left),
        right: map.decomposition(&h.right),
    })
}

/// Independent hinge for two q-cliques sharing exactly one edge.
///
/// A middle clique S is made from the shared edge and q - r fresh vertices.
/// Hinges from orthogonal boosters of `s1` and of `s2` are both retargeted
/// onto S and glued together with the edges of S other than the shared one.
pub fn build_independent_hinge(
    s1: &Clique,
    s2: &Clique,
    r: usize,
    arena: &mut VertexArena,
) -> Result<Hinge> {
    let q = s1.size();
    if s2.size() != q {
        return Err(Error::WrongCliqueSize {
            expected: q,
            found: s2.size(),
        });
    }
    let common = s1.common_vertices(s2);
    if common.len() != r {
        return Err(Error::NotSingleEdgeIntersection(common.len()));
    }
    let e = Edge::new(common)?;
    let middle = Clique::new(e.vertices().iter().copied().chain(arena.fresh_many(q - r)))?;

    let side = |s: &Clique, arena: &mut VertexArena| -> Result<Hinge> {
        let b = build_orthogonal_booster(s, r, arena)?;
        let b = cleanse_attachment(&b, &e, arena)?;
        let h = hinge_from_booster(&b, &e)?;
        retarget_hinge(&h, &middle, arena)
    };
    let h1 = side(s1, arena)?;
    let h2 = side(s2, arena)?.swapped();

    let shared: BTreeSet<VertexId> = h1
        .graph
        .vertices()
        .intersection(h2.graph.vertices())
        .copied()
        .collect();
    if shared.iter().ne(middle.vertices().iter()) {
        return Err(Error::Internal(
            "the two halves share vertices outside the middle clique".into(),
        ));
    }

    let mut middle_rest = RGraph::from_cliques(r, [], [&middle])?;
    middle_rest.remove_edge(&e);
    let graph = union_edge_disjoint(r, [&h1.graph, &middle_rest, &h2.graph])?;
    let left = Decomposition::merge(q, r, [&h1.left, &h2.left])?;
    let right = Decomposition::merge(q, r, [&h1.right, &h2.right])?;
    let hinge = Hinge {
        left_clique: s1.clone(),
        right_clique: s2.clone(),
        shared_edge: e,
        graph,
        left,
        right,
    };
    if !hinge.is_independent() {
        return Err(Error::Internal("composed hinge is not independent".into()));
    }
    Ok(hinge)
}
