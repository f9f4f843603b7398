use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{Clique, Decomposition, Edge, RGraph, VertexId};
use crate::error::{Error, Result};
use crate::math::binomial;

/// True iff binom(q-i, r-i) divides the number of edges containing S for every
/// i-subset S of the vertices, 0 <= i < r.
pub fn is_divisible(g: &RGraph, q: usize) -> bool {
    let r = g.r();
    // only i-sets inside some edge can have a nonzero count
    let mut counts: BTreeMap<Vec<VertexId>, usize> = BTreeMap::new();
    for e in g.edges() {
        for i in 0..r {
            for s in e.vertices().iter().copied().combinations(i) {
                *counts.entry(s).or_insert(0) += 1;
            }
        }
    }
    counts.iter().all(|(s, &count)| {
        let i = s.len();
        count % binomial(q - i, r - i) as usize == 0
    })
}

/// True iff no edge of `g` lies entirely inside `set`.
pub fn is_independent(g: &RGraph, set: &BTreeSet<VertexId>) -> bool {
    !g.edges()
        .iter()
        .any(|e| e.vertices().iter().all(|v| set.contains(v)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Clique `clique` does not have q distinct vertices.
    MalformedClique {
        clique: usize,
    },
    ForeignVertex {
        clique: usize,
        vertex: VertexId,
    },
    /// An r-subset of a clique that is not an edge of the graph.
    ForeignEdge {
        clique: usize,
        edge: Edge,
    },
    Uncovered(Edge),
    MultiplyCovered {
        edge: Edge,
        count: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violations: Vec<Violation>,
}

impl DecompositionReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &Edge> {
        self.violations.iter().filter_map(|v| match v {
            Violation::Uncovered(e) => Some(e),
            _ => None,
        })
    }

    pub fn foreign(&self) -> impl Iterator<Item = &Edge> {
        self.violations.iter().filter_map(|v| match v {
            Violation::ForeignEdge { edge, .. } => Some(edge),
            _ => None,
        })
    }
}

pub fn verify_decomposition(g: &RGraph, d: &Decomposition) -> DecompositionReport {
    verify_cliques(g, d.q(), d.cliques())
}

/// Checks that `cliques` partition the edges of `g` into q-cliques. Works on a
/// raw list so that overlapping or malformed inputs are reported rather than
/// rejected at construction.
pub fn verify_cliques(g: &RGraph, q: usize, cliques: &[Clique]) -> DecompositionReport {
    let r = g.r();
    let mut violations = Vec::new();
    let mut cover: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, c) in cliques.iter().enumerate() {
        if c.size() != q {
            violations.push(Violation::MalformedClique { clique: i });
            continue;
        }
        for v in c.vertices() {
            if !g.contains_vertex(*v) {
                violations.push(Violation::ForeignVertex {
                    clique: i,
                    vertex: *v,
                });
            }
        }
        for e in c.edges(r) {
            if g.contains_edge(&e) {
                *cover.entry(e).or_insert(0) += 1;
            } else {
                violations.push(Violation::ForeignEdge { clique: i, edge: e });
            }
        }
    }
    for e in g.edges() {
        match cover.get(e).copied().unwrap_or(0) {
            0 => violations.push(Violation::Uncovered(e.clone())),
            1 => {}
            count => violations.push(Violation::MultiplyCovered {
                edge: e.clone(),
                count,
            }),
        }
    }
    DecompositionReport { violations }
}

/// Union of graphs that must not share an edge.
pub fn union_edge_disjoint<'a>(
    r: usize,
    parts: impl IntoIterator<Item = &'a RGraph>,
) -> Result<RGraph> {
    let mut out = RGraph::empty(r);
    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, part) in parts.into_iter().enumerate() {
        if part.r() != r {
            return Err(Error::Internal(format!(
                "part {i} has uniformity {}, expected {r}",
                part.r()
            )));
        }
        out.vertices.extend(part.vertices().iter().copied());
        for e in part.edges() {
            if let Some(&first) = owner.get(e) {
                return Err(Error::EdgeOverlap {
                    edge: e.clone(),
                    first,
                    second: i,
                });
            }
            owner.insert(e.clone(), i);
        }
    }
    out.edges = owner.into_keys().collect();
    Ok(out)
}

pub fn clique_through<'a>(d: &'a Decomposition, e: &Edge) -> Result<&'a Clique> {
    d.clique_at(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    fn cycle6() -> RGraph {
        let edges = [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6], [1, 6]].map(|e| Edge::of(&e));
        RGraph::new(2, v(&[1, 2, 3, 4, 5, 6]), edges).unwrap()
    }

    #[test]
    fn divisibility_examples() {
        assert!(is_divisible(&RGraph::empty(2), 3));
        assert!(is_divisible(&cycle6(), 3));
        assert!(!is_divisible(&RGraph::complete(2, v(&[1, 2, 3, 4])), 3));
    }

    #[test]
    fn r_equal_one_only_counts_edges() {
        let g = RGraph::new(
            1,
            v(&[1, 2, 3, 4]),
            [Edge::of(&[1]), Edge::of(&[2]), Edge::of(&[3])],
        )
        .unwrap();
        assert!(is_divisible(&g, 3));
        assert!(!is_divisible(&g, 2));
    }

    #[test]
    fn decomposition_examples() {
        let report = verify_cliques(&RGraph::empty(2), 3, &[]);
        assert!(report.valid());

        let k3 = RGraph::complete(2, v(&[1, 2, 3]));
        assert!(verify_cliques(&k3, 3, &[Clique::of(&[1, 2, 3])]).valid());

        let report = verify_cliques(
            &cycle6(),
            3,
            &[Clique::of(&[1, 2, 3]), Clique::of(&[4, 5, 6])],
        );
        assert!(!report.valid());
        let foreign: Vec<_> = report.foreign().cloned().collect();
        let uncovered: Vec<_> = report.uncovered().cloned().collect();
        assert!(foreign.contains(&Edge::of(&[1, 3])));
        assert!(uncovered.contains(&Edge::of(&[3, 4])));
        assert_eq!(foreign, vec![Edge::of(&[1, 3]), Edge::of(&[4, 6])]);
        assert_eq!(uncovered, vec![Edge::of(&[1, 6]), Edge::of(&[3, 4])]);
    }

    #[test]
    fn doubly_covered_and_malformed_are_reported() {
        let k4 = RGraph::complete(2, v(&[1, 2, 3, 4]));
        let report = verify_cliques(
            &k4,
            3,
            &[
                Clique::of(&[1, 2, 3]),
                Clique::of(&[1, 2, 4]),
                Clique::of(&[3, 4]),
            ],
        );
        assert!(report.violations.contains(&Violation::MultiplyCovered {
            edge: Edge::of(&[1, 2]),
            count: 2
        }));
        assert!(report
            .violations
            .contains(&Violation::MalformedClique { clique: 2 }));
    }

    #[test]
    fn independence_examples() {
        let k3 = RGraph::complete(2, v(&[1, 2, 3]));
        assert!(is_independent(&k3, &BTreeSet::new()));
        assert!(!is_independent(&k3, &v(&[1, 2, 3]).into_iter().collect()));
    }

    #[test]
    fn union_examples() {
        let e = union_edge_disjoint(2, [&RGraph::empty(2), &RGraph::empty(2)]).unwrap();
        assert_eq!(e, RGraph::empty(2));

        let a = RGraph::complete(2, v(&[1, 2, 3]));
        let b = RGraph::complete(2, v(&[4, 5, 6]));
        let u = union_edge_disjoint(2, [&a, &b]).unwrap();
        assert_eq!((u.vertex_count(), u.edge_count()), (6, 6));

        let c = RGraph::complete(2, v(&[1, 2, 4]));
        assert_eq!(
            union_edge_disjoint(2, [&a, &c]).unwrap_err(),
            Error::EdgeOverlap {
                edge: Edge::of(&[1, 2]),
                first: 0,
                second: 1
            }
        );
    }

    #[test]
    fn clique_through_examples() {
        let d = Decomposition::new(3, 2, vec![Clique::of(&[1, 2, 3])]).unwrap();
        assert_eq!(
            clique_through(&d, &Edge::of(&[1, 2])).unwrap(),
            &Clique::of(&[1, 2, 3])
        );
        assert_eq!(
            clique_through(&d, &Edge::of(&[4, 5])).unwrap_err(),
            Error::NotCovered(Edge::of(&[4, 5]))
        );
        let d =
            Decomposition::new(3, 2, vec![Clique::of(&[1, 2, 3]), Clique::of(&[1, 4, 5])]).unwrap();
        assert_eq!(
            clique_through(&d, &Edge::of(&[1, 4])).unwrap(),
            &Clique::of(&[1, 4, 5])
        );
    }

    #[test]
    fn decomposition_rejects_shared_edges() {
        let err = Decomposition::new(3, 2, vec![Clique::of(&[1, 2, 3]), Clique::of(&[1, 2, 4])])
            .unwrap_err();
        assert_eq!(err, Error::DoubleCover(Edge::of(&[1, 2])));
    }
}
