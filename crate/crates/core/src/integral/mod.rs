//! Integral K_q^r-decompositions.
//!
//! An integral decomposition of L assigns an integer weight to every q-subset
//! of V(L) so that the weights of the cliques through each r-set sum to 1 on
//! edges of L and to 0 on non-edges. Divisibility of L together with
//! |V(L)| >= q + r guarantees one exists; this module finds one by exact
//! integer elimination over the full inclusion system.

pub mod hnf;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::hypergraph::{is_divisible, Clique, Edge, RGraph, VertexArena, VertexId};

pub const DEFAULT_VERTEX_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Largest vertex count for which the inclusion system is built.
    pub vertex_cap: usize,
    /// Greedily shrink the l1 norm of the weights using kernel vectors.
    pub l1_reduce: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            l1_reduce: false,
        }
    }
}

/// L with fresh isolated vertices added until it has at least q + r vertices.
pub fn pad_vertices(l: &RGraph, q: usize, arena: &mut VertexArena) -> RGraph {
    let mut out = l.clone();
    while out.vertex_count() < q + l.r() {
        out.add_vertex(arena.fresh());
    }
    out
}

/// Rows are the r-subsets of V(L), columns the q-subsets, both lexicographic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionSystem {
    pub vertices: Vec<VertexId>,
    pub rows: Vec<Edge>,
    pub cols: Vec<Clique>,
    pub target: Vec<i64>,
}

impl InclusionSystem {
    pub fn new(l: &RGraph, q: usize) -> Self {
        let vertices: Vec<VertexId> = l.vertices().iter().copied().collect();
        let rows: Vec<Edge> = vertices
            .iter()
            .copied()
            .combinations(l.r())
            .map(|vs| Edge::new(vs).expect("distinct"))
            .collect();
        let cols: Vec<Clique> = vertices
            .iter()
            .copied()
            .combinations(q)
            .map(|vs| Clique::new(vs).expect("distinct"))
            .collect();
        let target = rows.iter().map(|e| i64::from(l.contains_edge(e))).collect();
        InclusionSystem {
            vertices,
            rows,
            cols,
            target,
        }
    }

    /// Dense 0/1 inclusion matrix, row-major.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|e| {
                self.cols
                    .iter()
                    .map(|c| i64::from(c.contains_edge(e)))
                    .collect()
            })
            .collect()
    }
}

/// Nonzero clique weights.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignedDecomposition {
    pub q: usize,
    pub r: usize,
    pub weights: BTreeMap<Clique, i64>,
}

impl SignedDecomposition {
    /// The r-sets where the weighted clique count differs from the indicator of
    /// `l`, with the difference.
    pub fn residual(&self, l: &RGraph) -> Vec<(Edge, i64)> {
        let mut sums: BTreeMap<Edge, i64> = BTreeMap::new();
        for (c, &w) in &self.weights {
            for e in c.edges(self.r) {
                *sums.entry(e).or_insert(0) += w;
            }
        }
        for e in l.edges() {
            *sums.entry(e.clone()).or_insert(0) -= 1;
        }
        sums.into_iter().filter(|(_, s)| *s != 0).collect()
    }

    pub fn l1_norm(&self) -> u64 {
        self.weights.values().map(|w| w.unsigned_abs()).sum()
    }
}

/// Exact integral K_q^r-decomposition of `l`.
pub fn integral_decomposition(
    l: &RGraph,
    q: usize,
    options: &SolverOptions,
) -> Result<SignedDecomposition> {
    let r = l.r();
    if r == 0 || q <= r {
        return Err(Error::BadParameters { q, r });
    }
    if !is_divisible(l, q) {
        return Err(Error::NotDivisible);
    }
    let m = l.vertex_count();
    if m < q + r {
        return Err(Error::TooFewVertices {
            needed: q + r,
            found: m,
        });
    }
    if m > options.vertex_cap {
        return Err(Error::CapExceeded {
            cap: options.vertex_cap,
            found: m,
        });
    }
    let system = InclusionSystem::new(l, q);
    let mut sol =
        hnf::solve(&system.matrix(), system.cols.len(), &system.target).ok_or(Error::Infeasible)?;
    if options.l1_reduce {
        hnf::reduce_l1(&mut sol.solution, &sol.kernel);
    }
    let mut weights = BTreeMap::new();
    for (c, w) in system.cols.iter().zip(&sol.solution) {
        let w = w.to_i64().ok_or(Error::WeightOverflow)?;
        if w != 0 {
            weights.insert(c.clone(), w);
        }
    }
    let out = SignedDecomposition { q, r, weights };
    if !out.residual(l).is_empty() {
        return Err(Error::Internal(
            "integer solution has nonzero residual".into(),
        ));
    }
    Ok(out)
}

/// Identifier of one copy of a weighted clique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub id: InstanceId,
    pub clique: Clique,
    /// Which of the |w_Q| copies this is.
    pub copy: usize,
}

/// Cliques repeated |weight| times, split by the sign of the weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliqueMultisets {
    pub positive: Vec<CliqueInstance>,
    pub negative: Vec<CliqueInstance>,
}

impl CliqueMultisets {
    pub fn positive_through<'a>(&'a self, e: &'a Edge) -> impl Iterator<Item = &'a CliqueInstance> {
        self.positive
            .iter()
            .filter(move |c| c.clique.contains_edge(e))
    }

    pub fn negative_through<'a>(&'a self, e: &'a Edge) -> impl Iterator<Item = &'a CliqueInstance> {
        self.negative
            .iter()
            .filter(move |c| c.clique.contains_edge(e))
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Positive copies get the first instance ids, in clique order.
pub fn split_signed(w: &SignedDecomposition) -> CliqueMultisets {
    let mut out = CliqueMultisets::default();
    let mut next = 0;
    for negative in [false, true] {
        for (c, &weight) in &w.weights {
            if (weight < 0) != negative {
                continue;
            }
            for copy in 0..weight.unsigned_abs() as usize {
                let inst = CliqueInstance {
                    id: InstanceId(next),
                    clique: c.clone(),
                    copy,
                };
                next += 1;
                if negative {
                    out.negative.push(inst);
                } else {
                    out.positive.push(inst);
                }
            }
        }
    }
    out
}
