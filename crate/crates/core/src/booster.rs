//! Boosters from the complete q-partite r-graph K_{q*n}^r.
//!
//! The vertices of K_{q*n}^r are pairs (part, coordinate) with a coordinate in
//! F_n, so a transversal q-clique is a vector v in F_n^q. For a
//! (q-r) x q Cauchy matrix M over F_n, the solution set of Mv = a is a
//! K_q^r-decomposition of K_{q*n}^r for every right-hand side a: fixing any r
//! coordinates leaves a square Cauchy system on the rest, which has exactly one
//! solution. Different right-hand sides give clique-disjoint decompositions.
//!
//! A booster for S embeds S as the zero vector. `off` is the a = 0
//! decomposition with S removed and `on` is the decomposition for the
//! lexicographically first admissible a != 0.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::hypergraph::{
    is_independent, verify_decomposition, Clique, Decomposition, DecompositionReport, Edge, RGraph,
    VertexArena, VertexId,
};
use crate::math::is_prime;

fn check_params(q: usize, r: usize) -> Result<()> {
    if r == 0 || q <= r {
        return Err(Error::BadParameters { q, r });
    }
    Ok(())
}

/// Smallest prime strictly between 2q - r and 2(2q - r).
pub fn booster_prime(q: usize, r: usize) -> Result<u64> {
    check_params(q, r)?;
    let lo = (2 * q - r) as u64;
    (lo + 1..2 * lo)
        .find(|&n| is_prime(n))
        .ok_or_else(|| Error::Internal(format!("no prime in ({lo}, {})", 2 * lo)))
}

/// The (q-r) x q matrix with entries 1/(x_i - y_j) over F_n, where
/// x_i = i for i in 1..=q-r and y_j = q-r+j for j in 1..=q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CauchyMatrix {
    q: usize,
    r: usize,
    field: PrimeField,
    xs: Vec<u64>,
    ys: Vec<u64>,
    entries: Vec<Vec<u64>>,
}

impl CauchyMatrix {
    pub fn new(q: usize, r: usize, n: u64) -> Result<Self> {
        check_params(q, r)?;
        let bound = (2 * q - r) as u64;
        if n <= bound || !is_prime(n) {
            return Err(Error::BadModulus { n, bound });
        }
        let field = PrimeField::new(n)?;
        let xs: Vec<u64> = (1..=(q - r) as u64).collect();
        let ys: Vec<u64> = (1..=q as u64).map(|j| (q - r) as u64 + j).collect();
        let entries = xs
            .iter()
            .map(|&x| {
                ys.iter()
                    .map(|&y| {
                        field
                            .inv(field.sub(x, y))
                            .expect("x and y values are distinct below n")
                    })
                    .collect()
            })
            .collect();
        Ok(CauchyMatrix {
            q,
            r,
            field,
            xs,
            ys,
            entries,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus()
    }

    pub fn xs(&self) -> &[u64] {
        &self.xs
    }

    pub fn ys(&self) -> &[u64] {
        &self.ys
    }

    pub fn entries(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.q - self.r
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<u64>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.entries[i][j]).collect())
            .collect()
    }

    /// M v.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&m, &x)| self.field.add(acc, self.field.mul(m, x)))
            })
            .collect()
    }
}

pub fn cauchy_matrix(q: usize, r: usize, n: u64) -> Result<CauchyMatrix> {
    CauchyMatrix::new(q, r, n)
}

/// The unique v with Mv = a agreeing with `fixed` on r coordinates.
///
/// `fixed` lists (coordinate, value) pairs with distinct coordinates.
pub fn complete_to_clique(m: &CauchyMatrix, a: &[u64], fixed: &[(usize, u64)]) -> Vec<u64> {
    assert_eq!(fixed.len(), m.r(), "exactly r coordinates must be fixed");
    assert_eq!(a.len(), m.rows());
    let f = m.field();
    let mut v = vec![0; m.q()];
    let mut is_fixed = vec![false; m.q()];
    for &(j, val) in fixed {
        assert!(!is_fixed[j], "coordinate {j} fixed twice");
        is_fixed[j] = true;
        v[j] = val % f.modulus();
    }
    let free: Vec<usize> = (0..m.q()).filter(|&j| !is_fixed[j]).collect();
    let rows: Vec<usize> = (0..m.rows()).collect();
    let rhs: Vec<u64> = m
        .entries()
        .iter()
        .zip(a)
        .map(|(row, &ai)| {
            fixed.iter().fold(ai % f.modulus(), |acc, &(j, _)| {
                f.sub(acc, f.mul(row[j], v[j]))
            })
        })
        .collect();
    let sol = f
        .solve(&m.submatrix(&rows, &free), &rhs)
        .expect("square Cauchy submatrices are invertible");
    for (j, x) in free.into_iter().zip(sol) {
        v[j] = x;
    }
    v
}

/// Vertex layout of K_{q*n}^r: `parts[j][c]` is the vertex (j, c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteContext {
    q: usize,
    r: usize,
    n: u64,
    parts: Vec<Vec<VertexId>>,
}

impl PartiteContext {
    /// Places the j-th vertex of `base` at (j, 0) and allocates every other
    /// vertex fresh, part by part.
    pub fn around(base: &Clique, r: usize, n: u64, arena: &mut VertexArena) -> Self {
        let parts = base
            .vertices()
            .iter()
            .map(|&v0| {
                let mut part = vec![v0];
                part.extend(arena.fresh_many(n as usize - 1));
                part
            })
            .collect();
        PartiteContext {
            q: base.size(),
            r,
            n,
            parts,
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn vertex(&self, part: usize, coord: u64) -> VertexId {
        self.parts[part][coord as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parts.iter().flatten().copied()
    }

    pub fn clique_of(&self, v: &[u64]) -> Clique {
        Clique::new(v.iter().enumerate().map(|(j, &c)| self.vertex(j, c)))
            .expect("one vertex per part")
    }

    /// Coordinates of a transversal vertex set, `None` for non-transversal sets.
    pub fn coordinates(&self, vs: &[VertexId]) -> Option<Vec<(usize, u64)>> {
        let mut out = Vec::with_capacity(vs.len());
        for v in vs {
            let (j, c) =
                self.parts.iter().enumerate().find_map(|(j, part)| {
                    part.iter().position(|u| u == v).map(|c| (j, c as u64))
                })?;
            out.push((j, c));
        }
        out.sort_unstable();
        if out.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(out)
    }

    /// K_{q*n}^r itself.
    pub fn complete_partite(&self) -> RGraph {
        let mut g = RGraph::empty(self.r);
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for parts in (0..self.q).combinations(self.r) {
            for coords in (0..parts.len())
                .map(|_| 0..self.n)
                .multi_cartesian_product()
            {
                let e = Edge::new(parts.iter().zip(&coords).map(|(&j, &c)| self.vertex(j, c)))
                    .expect("distinct parts");
                g.add_edge(e).expect("vertices registered");
            }
        }
        g
    }
}

/// All coordinate vectors of length `len` over F_n in lexicographic order.
fn vectors(n: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..len).map(move |_| 0..n).multi_cartesian_product()
}

/// The n^r cliques {v : Mv = a}, enumerated by the first r coordinates.
pub fn partite_decomposition(ctx: &PartiteContext, m: &CauchyMatrix, a: &[u64]) -> Decomposition {
    let r = ctx.r();
    let cliques = vectors(ctx.n(), r)
        .map(|head| {
            let fixed: Vec<(usize, u64)> = head.into_iter().enumerate().collect();
            ctx.clique_of(&complete_to_clique(m, a, &fixed))
        })
        .collect();
    Decomposition::new(ctx.q(), r, cliques).expect("Cauchy systems give decompositions")
}

/// A booster for `base`: `off` decomposes `graph` and `on` decomposes
/// `graph` plus the edges of `base`, without using `base` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Booster {
    pub base: Clique,
    pub graph: RGraph,
    pub on: Decomposition,
    pub off: Decomposition,
}

impl Booster {
    pub fn r(&self) -> usize {
        self.graph.r()
    }

    pub fn q(&self) -> usize {
        self.base.size()
    }

    /// The on-clique through an edge of the base.
    pub fn on_at(&self, e: &Edge) -> Result<&Clique> {
        self.on.clique_at(e)
    }

    /// B together with the edges of the base clique.
    pub fn graph_with_base(&self) -> RGraph {
        let mut g = self.graph.clone();
        for e in self.base.edges(self.r()) {
            g.add_edge(e).expect("base vertices lie in the booster");
        }
        g
    }
}

/// Builds the K_{q*n}^r booster for `base`.
///
/// With `avoid_edge = Some(e)`, the right-hand side for `on` is the first one
/// whose clique through e meets the base only in e. A bad right-hand side has
/// some zero among the q - r free coordinates of that clique, and each
/// coordinate vanishes on a hyperplane of F_n^{q-r}, so at most
/// (q - r) n^{q-r-1} < n^{q-r} values are excluded.
pub fn build_booster(
    base: &Clique,
    r: usize,
    arena: &mut VertexArena,
    avoid_edge: Option<&Edge>,
) -> Result<Booster> {
    let q = base.size();
    let n = booster_prime(q, r)?;
    let m = CauchyMatrix::new(q, r, n)?;
    let ctx = PartiteContext::around(base, r, n, arena);

    let attach: Option<Vec<usize>> = match avoid_edge {
        None => None,
        Some(e) => {
            if e.len() != r || !base.contains_edge(e) {
                return Err(Error::Internal(format!("{e} is not an edge of {base}")));
            }
            Some(
                e.vertices()
                    .iter()
                    .map(|v| base.vertices().binary_search(v).expect("edge inside base"))
                    .collect(),
            )
        }
    };

    let rhs = vectors(n, q - r)
        .skip(1)
        .find(|a| match &attach {
            None => true,
            Some(parts) => {
                let fixed: Vec<(usize, u64)> = parts.iter().map(|&j| (j, 0)).collect();
                let v = complete_to_clique(&m, a, &fixed);
                (0..q).filter(|j| !parts.contains(j)).all(|j| v[j] != 0)
            }
        })
        .ok_or_else(|| Error::Internal("no admissible right-hand side".into()))?;

    Ok(assemble(base, &ctx, &m, &rhs))
}

/// Booster whose on-decomposition is the solution set of Mv = `rhs`.
///
/// Any nonzero right-hand side gives a valid booster; only some of them give
/// orthogonal ones.
pub fn build_booster_with_rhs(
    base: &Clique,
    r: usize,
    arena: &mut VertexArena,
    rhs: &[u64],
) -> Result<Booster> {
    let q = base.size();
    let n = booster_prime(q, r)?;
    let m = CauchyMatrix::new(q, r, n)?;
    if rhs.len() != q - r || rhs.iter().all(|&x| x % n == 0) {
        return Err(Error::Internal(format!(
            "right-hand side must be a nonzero vector of length {}",
            q - r
        )));
    }
    let ctx = PartiteContext::around(base, r, n, arena);
    Ok(assemble(base, &ctx, &m, rhs))
}

fn assemble(base: &Clique, ctx: &PartiteContext, m: &CauchyMatrix, rhs: &[u64]) -> Booster {
    let r = ctx.r();
    let zero = vec![0; m.rows()];
    let off_full = partite_decomposition(ctx, m, &zero);
    let off = off_full.without(&BTreeSet::from([base.clone()]));
    let on = partite_decomposition(ctx, m, rhs);

    let mut graph = ctx.complete_partite();
    for e in base.edges(r) {
        graph.remove_edge(&e);
    }
    Booster {
        base: base.clone(),
        graph,
        on,
        off,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoosterReport {
    pub base_inside: bool,
    pub base_independent: bool,
    pub off: DecompositionReport,
    pub on: DecompositionReport,
    pub base_not_in_on: bool,
}

impl BoosterReport {
    pub fn valid(&self) -> bool {
        self.base_inside
            && self.base_independent
            && self.off.valid()
            && self.on.valid()
            && self.base_not_in_on
    }
}

/// Re-checks every booster property from scratch.
pub fn verify_booster(b: &Booster) -> BoosterReport {
    let base_set: BTreeSet<VertexId> = b.base.vertices().iter().copied().collect();
    let base_inside = base_set.iter().all(|v| b.graph.contains_vertex(*v));
    BoosterReport {
        base_inside,
        base_independent: is_independent(&b.graph, &base_set),
        off: verify_decomposition(&b.graph, &b.off),
        on: if base_inside {
            verify_decomposition(&b.graph_with_base(), &b.on)
        } else {
            verify_decomposition(&b.graph, &b.on)
        },
        base_not_in_on: !b.on.cliques().contains(&b.base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve_first_prime(lo: u64, hi: u64) -> Option<u64> {
        // independent: Eratosthenes up to hi
        let mut composite = vec![false; hi as usize + 1];
        for i in 2..=hi as usize {
            if !composite[i] {
                let mut k = i * i;
                while k <= hi as usize {
                    composite[k] = true;
                    k += i;
                }
            }
        }
        (lo + 1..hi).find(|&x| x >= 2 && !composite[x as usize])
    }

    #[test]
    fn prime_window_examples() {
        assert_eq!(booster_prime(3, 2).unwrap(), 5);
        assert_eq!(booster_prime(4, 3).unwrap(), 7);
        assert_eq!(booster_prime(5, 2).unwrap(), 11);
        for q in 2..12 {
            for r in 1..q {
                let lo = (2 * q - r) as u64;
                assert_eq!(
                    Some(booster_prime(q, r).unwrap()),
                    sieve_first_prime(lo, 2 * lo)
                );
            }
        }
        assert!(booster_prime(3, 3).is_err());
    }

    #[test]
    fn cauchy_single_row() {
        let m = cauchy_matrix(3, 2, 5).unwrap();
        assert_eq!(m.entries(), &[vec![4, 2, 3]]);
    }

    #[test]
    fn cauchy_rejects_small_or_composite_modulus() {
        assert!(matches!(
            cauchy_matrix(3, 2, 3),
            Err(Error::BadModulus { .. })
        ));
        assert!(matches!(
            cauchy_matrix(4, 2, 5),
            Err(Error::BadModulus { .. })
        ));
        assert!(matches!(
            cauchy_matrix(3, 2, 9),
            Err(Error::BadModulus { .. })
        ));
    }

    #[test]
    fn completion_examples() {
        let m = cauchy_matrix(3, 2, 5).unwrap();
        assert_eq!(
            complete_to_clique(&m, &[0], &[(0, 0), (1, 0)]),
            vec![0, 0, 0]
        );
        assert_eq!(
            complete_to_clique(&m, &[1], &[(0, 0), (1, 0)]),
            vec![0, 0, 2]
        );
        let m = cauchy_matrix(5, 2, 11).unwrap();
        for a in vectors(11, 3).step_by(37) {
            let v = complete_to_clique(&m, &a, &[(1, 4), (3, 9)]);
            assert_eq!((v[1], v[3]), (4, 9));
            assert_eq!(m.apply(&v), a);
        }
    }

    #[test]
    fn partite_decomposition_covers_k35() {
        let mut arena = VertexArena::starting_at(0);
        let base = Clique::new(arena.fresh_many(3)).unwrap();
        let ctx = PartiteContext::around(&base, 2, 5, &mut arena);
        let m = cauchy_matrix(3, 2, 5).unwrap();
        let k = ctx.complete_partite();
        assert_eq!(k.edge_count(), 75);
        let mut seen = BTreeSet::new();
        for a in 0..5 {
            let d = partite_decomposition(&ctx, &m, &[a]);
            assert_eq!(d.len(), 25);
            assert!(verify_decomposition(&k, &d).valid());
            for c in d.cliques() {
                assert!(seen.insert(c.clone()), "decompositions share {c}");
            }
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn booster_for_triangle() {
        let mut arena = VertexArena::starting_at(3);
        let s = Clique::of(&[0, 1, 2]);
        let b = build_booster(&s, 2, &mut arena, None).unwrap();
        assert_eq!(b.graph.edge_count(), 72);
        assert_eq!(b.off.len(), 24);
        assert_eq!(b.on.len(), 25);
        assert!(!b.on.cliques().contains(&s));
        let report = verify_booster(&b);
        assert!(report.valid(), "{report:?}");
    }

    #[test]
    fn booster_is_deterministic() {
        let s = Clique::of(&[0, 1, 2, 3]);
        let b1 = build_booster(&s, 2, &mut VertexArena::starting_at(4), None).unwrap();
        let b2 = build_booster(&s, 2, &mut VertexArena::starting_at(4), None).unwrap();
        assert_eq!(b1, b2);
    }

    #[test]
    fn avoid_edge_gives_clean_attachment() {
        for (q, r) in [(4, 2), (5, 2), (5, 3), (4, 3)] {
            let s = Clique::new((0..q as u32).map(VertexId)).unwrap();
            for e in s.edges(r) {
                let mut arena = VertexArena::starting_at(q as u32);
                let b = build_booster(&s, r, &mut arena, Some(&e)).unwrap();
                let at = b.on_at(&e).unwrap();
                assert_eq!(at.overlap(&s), r, "q={q} r={r} e={e}");
                assert!(verify_booster(&b).valid());
            }
        }
    }

    #[test]
    fn independence_of_base_in_k35_minus_triangle() {
        let mut arena = VertexArena::starting_at(3);
        let s = Clique::of(&[0, 1, 2]);
        let b = build_booster(&s, 2, &mut arena, None).unwrap();
        let set: BTreeSet<VertexId> = s.vertices().iter().copied().collect();
        assert!(is_independent(&b.graph, &set));
    }
}
