//! Orthogonal boosters by layering.
//!
//! A booster B for S is orthogonal when distinct edges of S lie in distinct
//! cliques of on(B). While some on-clique Q holds two or more edges of S, a
//! fresh booster B* for Q is grafted in place of Q: on(B) loses Q and gains
//! on(B*), off(B) gains off(B*). B* is relabeled by a permutation of V(Q) so
//! that V(Q) ∩ V(S) is not inside any single clique of on(B*); the edges of S
//! that Q held are then spread over at least two cliques, so the number of
//! on-cliques meeting S grows by at least one per step.

use std::collections::BTreeSet;

use crate::booster::{build_booster, Booster};
use crate::error::{Error, Result};
use crate::hypergraph::{
    union_edge_disjoint, Clique, Decomposition, Edge, Relabeling, VertexArena, VertexId,
};
use crate::math::binomial;

/// A booster together with the number of on-cliques that meet its base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeringState {
    pub booster: Booster,
    pub meet_count: usize,
    /// Number of grafting steps performed so far.
    pub steps: usize,
}

impl LayeringState {
    pub fn new(booster: Booster) -> Self {
        let meet_count = meet_count(&booster);
        LayeringState {
            booster,
            meet_count,
            steps: 0,
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        self.meet_count as u64 == binomial(self.booster.q(), self.booster.r())
    }
}

/// Number of distinct on-cliques containing at least one edge of the base.
pub fn meet_count(b: &Booster) -> usize {
    b.base
        .edges(b.r())
        .filter_map(|e| b.on.clique_at(&e).ok())
        .collect::<BTreeSet<_>>()
        .len()
}

/// Pairwise check that e -> on[e] is injective over the edges of the base.
pub fn is_orthogonal(b: &Booster) -> bool {
    let at: Vec<Option<&Clique>> = b
        .base
        .edges(b.r())
        .map(|e| b.on.clique_at(&e).ok())
        .collect();
    for (i, ci) in at.iter().enumerate() {
        for cj in &at[i + 1..] {
            match (ci, cj) {
                (Some(a), Some(b)) if a != b => {}
                _ => return false,
            }
        }
    }
    true
}

/// The lexicographically smallest on-clique holding two or more base edges.
pub fn orthogonality_defect(b: &Booster) -> Option<Clique> {
    let r = b.r();
    b.base
        .edges(r)
        .filter_map(|e| b.on.clique_at(&e).ok())
        .filter(|c| c.overlap(&b.base) > r)
        .min()
        .cloned()
}

/// A j-subset T of V(Q) that no clique of `on_star` contains.
///
/// Takes the lexicographically first (r+1)-subset T0 with that property and
/// extends it by the smallest remaining vertices of Q.
pub fn select_target_set(
    on_star: &Decomposition,
    q_clique: &Clique,
    j: usize,
) -> Result<Vec<VertexId>> {
    let r = on_star.r();
    if j < r + 1 || j > q_clique.size() {
        return Err(Error::Internal(format!("target size {j} out of range")));
    }
    let t0 = itertools::Itertools::combinations(q_clique.vertices().iter().copied(), r + 1)
        .find(|t| {
            // a clique containing t contains the edge t[..r], so it can only be on[t[..r]]
            let head = Edge::new(t[..r].iter().copied()).expect("distinct");
            match on_star.clique_at(&head) {
                Ok(c) => !t.iter().all(|v| c.contains_vertex(*v)),
                Err(_) => true,
            }
        })
        .ok_or(Error::NoTargetSet { size: r + 1 })?;
    let mut t = t0.clone();
    t.extend(
        q_clique
            .vertices()
            .iter()
            .copied()
            .filter(|v| !t0.contains(v))
            .take(j - (r + 1)),
    );
    t.sort_unstable();
    Ok(t)
}

/// Replaces the on-clique `q_clique` of `b` by the booster `star` for it.
///
/// Requires V(star) ∩ V(b) = V(q_clique).
pub fn graft(b: &Booster, q_clique: &Clique, star: &Booster) -> Result<Booster> {
    let r = b.r();
    if star.base != *q_clique || !b.on.contains_clique(q_clique) {
        return Err(Error::NotAnOnClique(q_clique.vertices().to_vec()));
    }
    let shared: BTreeSet<VertexId> = star
        .graph
        .vertices()
        .intersection(b.graph.vertices())
        .copied()
        .collect();
    if shared.iter().ne(q_clique.vertices().iter()) {
        return Err(Error::Internal(format!(
            "grafted booster shares {} vertices, expected exactly V(Q)",
            shared.len()
        )));
    }
    let graph = union_edge_disjoint(r, [&b.graph, &star.graph])?;
    let kept = b.on.without(&BTreeSet::from([q_clique.clone()]));
    let on = Decomposition::merge(b.q(), r, [&kept, &star.on])?;
    let off = Decomposition::merge(b.q(), r, [&b.off, &star.off])?;
    Ok(Booster {
        base: b.base.clone(),
        graph,
        on,
        off,
    })
}

/// One layering step at the on-clique `q_clique`, which must hold at least two
/// edges of the base.
pub fn layer_replace(b: &Booster, q_clique: &Clique, arena: &mut VertexArena) -> Result<Booster> {
    let r = b.r();
    if *q_clique == b.base || !b.on.contains_clique(q_clique) {
        return Err(Error::NotAnOnClique(q_clique.vertices().to_vec()));
    }
    let inside = q_clique.common_vertices(&b.base);
    let j = inside.len();
    if j < r + 1 {
        return Err(Error::Internal(format!(
            "{q_clique} holds at most one edge of the base"
        )));
    }
    let star = build_booster(q_clique, r, arena, None)?;
    let target = select_target_set(&star.on, q_clique, j)?;

    // permutation of V(Q) taking the target set onto V(Q) ∩ V(S)
    let outside: Vec<VertexId> = q_clique
        .vertices()
        .iter()
        .copied()
        .filter(|v| !b.base.contains_vertex(*v))
        .collect();
    let rest: Vec<VertexId> = q_clique
        .vertices()
        .iter()
        .copied()
        .filter(|v| !target.contains(v))
        .collect();
    let perm = Relabeling::from_pairs(
        target
            .iter()
            .copied()
            .zip(inside.iter().copied())
            .chain(rest.into_iter().zip(outside)),
    )?;
    let star = Booster {
        base: q_clique.clone(),
        graph: perm.graph(&star.graph),
        on: perm.decomposition(&star.on),
        off: perm.decomposition(&star.off),
    };
    graft(b, q_clique, &star)
}

/// Layers `b` until it is orthogonal.
pub fn orthogonalize(b: Booster, arena: &mut VertexArena) -> Result<LayeringState> {
    let mut state = LayeringState::new(b);
    let cap = binomial(state.booster.q(), state.booster.r()) as usize;
    while let Some(defect) = orthogonality_defect(&state.booster) {
        let next = layer_replace(&state.booster, &defect, arena)?;
        let count = meet_count(&next);
        if count <= state.meet_count || count > cap {
            return Err(Error::Internal(format!(
                "meet count went from {} to {count}",
                state.meet_count
            )));
        }
        state = LayeringState {
            booster: next,
            meet_count: count,
            steps: state.steps + 1,
        };
    }
    Ok(state)
}

pub fn build_orthogonal_booster(
    base: &Clique,
    r: usize,
    arena: &mut VertexArena,
) -> Result<Booster> {
    let b = build_booster(base, r, arena, None)?;
    Ok(orthogonalize(b, arena)?.booster)
}

/// Ensures the on-clique through `e` meets the base only in the vertices of `e`.
///
/// For an orthogonal booster this always holds already: an on-clique sharing
/// r + 1 vertices with the base would contain r + 1 of its edges. For other
/// boosters the offending clique is replaced by a booster built with
/// `avoid_edge = e`.
pub fn cleanse_attachment(b: &Booster, e: &Edge, arena: &mut VertexArena) -> Result<Booster> {
    let r = b.r();
    let at = b.on.clique_at(e)?.clone();
    if at.overlap(&b.base) == r {
        return Ok(b.clone());
    }
    let star = build_booster(&at, r, arena, Some(e))?;
    let out = graft(b, &at, &star)?;
    if out.on.clique_at(e)?.overlap(&out.base) != r {
        return Err(Error::NotClean(e.clone()));
    }
    Ok(out)
}
