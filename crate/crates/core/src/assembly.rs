//! Absorber assembly.
//!
//! An integral decomposition of (padded) L splits into a positive and a
//! negative multiset of cliques. Every clique copy S in either multiset gets
//! its own orthogonal booster B_S. At each r-set f the negative copies through
//! f are matched to positive copies through f, leaving exactly one positive
//! copy unmatched when f is an edge of L. Each matched pair gets an
//! independent hinge between the on-cliques of their boosters at f.
//!
//! A is the union of all boosters and hinges. It decomposes as
//! * on(B_S) without the cliques through edges of S, for negative S,
//!   plus the left sides of all hinges, plus off(B_S) for positive S;
//!
//! and A + L decomposes as
//! * on(B_S) without the cliques through matched edges of S, for positive S,
//!   plus the right sides of all hinges, plus off(B_S) for negative S.

use std::collections::{BTreeMap, BTreeSet};

use crate::booster::Booster;
use crate::error::{Error, Result};
use crate::hinge::{build_independent_hinge, Hinge};
use crate::hypergraph::{
    is_divisible, is_independent, union_edge_disjoint, verify_cliques, Clique, Decomposition,
    DecompositionReport, Edge, RGraph, VertexArena, VertexId,
};
use crate::integral::{
    integral_decomposition, pad_vertices, split_signed, CliqueInstance, CliqueMultisets,
    InstanceId, SignedDecomposition, SolverOptions,
};
use crate::layering::{build_orthogonal_booster, cleanse_attachment, is_orthogonal};

/// Directed matchings from negative copies to positive copies at every r-set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeMatching {
    /// (negative copy, positive copy) pairs, only for r-sets with at least one pair.
    pub pairs: BTreeMap<Edge, Vec<(InstanceId, InstanceId)>>,
    /// The one unmatched positive copy at each edge of L.
    pub unmatched: BTreeMap<Edge, InstanceId>,
}

impl EdgeMatching {
    /// Edges at which `id` is the positive end of a pair.
    pub fn matched_as_target(&self) -> BTreeMap<InstanceId, BTreeSet<Edge>> {
        let mut out: BTreeMap<InstanceId, BTreeSet<Edge>> = BTreeMap::new();
        for (f, pairs) in &self.pairs {
            for (_, pos) in pairs {
                out.entry(*pos).or_default().insert(f.clone());
            }
        }
        out
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.values().map(Vec::len).sum()
    }
}

/// Pairs copies in canonical order; at an edge of L the last positive copy is
/// left over.
pub fn build_matchings(l: &RGraph, multisets: &CliqueMultisets) -> Result<EdgeMatching> {
    let r = l.r();
    let mut sets: BTreeSet<Edge> = l.edges().clone();
    for inst in multisets.positive.iter().chain(&multisets.negative) {
        sets.extend(inst.clique.edges(r));
    }
    let mut out = EdgeMatching::default();
    for f in sets {
        let neg: Vec<&CliqueInstance> = multisets.negative_through(&f).collect();
        let pos: Vec<&CliqueInstance> = multisets.positive_through(&f).collect();
        let surplus = usize::from(l.contains_edge(&f));
        if pos.len() != neg.len() + surplus {
            return Err(Error::CountMismatch(f));
        }
        if surplus == 1 {
            out.unmatched.insert(f.clone(), pos[pos.len() - 1].id);
        }
        if !neg.is_empty() {
            let pairs = neg.iter().zip(&pos).map(|(n, p)| (n.id, p.id)).collect();
            out.pairs.insert(f, pairs);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

/// Where a clique of an assembled decomposition comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CliqueSource {
    BoosterOn(InstanceId),
    BoosterOff(InstanceId),
    HingeLeft(usize),
    HingeRight(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoosterRecord {
    pub instance: InstanceId,
    pub sign: Sign,
    pub base: Clique,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HingeRecord {
    pub id: usize,
    pub edge: Edge,
    pub negative: InstanceId,
    pub positive: InstanceId,
    pub left_clique: Clique,
    pub right_clique: Clique,
    pub edges: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    /// Isolated vertices added to L before solving.
    pub padding: Vec<VertexId>,
    pub weights: BTreeMap<Clique, i64>,
    pub boosters: Vec<BoosterRecord>,
    pub hinges: Vec<HingeRecord>,
    /// Aligned with the cliques of `decomposition_a`.
    pub sources_a: Vec<CliqueSource>,
    /// Aligned with the cliques of `decomposition_al`.
    pub sources_al: Vec<CliqueSource>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorberCertificate {
    pub q: usize,
    pub r: usize,
    pub l: RGraph,
    pub a: RGraph,
    /// Decomposes A.
    pub decomposition_a: Decomposition,
    /// Decomposes A + L.
    pub decomposition_al: Decomposition,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateSizes {
    pub vertices: usize,
    pub edges: usize,
    pub cliques_a: usize,
    pub cliques_al: usize,
    pub boosters: usize,
    pub hinges: usize,
}

impl AbsorberCertificate {
    pub fn sizes(&self) -> CertificateSizes {
        CertificateSizes {
            vertices: self.a.vertex_count(),
            edges: self.a.edge_count(),
            cliques_a: self.decomposition_a.len(),
            cliques_al: self.decomposition_al.len(),
            boosters: self.provenance.boosters.len(),
            hinges: self.provenance.hinges.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssemblyOptions {
    pub solver: SolverOptions,
}

/// The boosters and hinges of one construction, before the decompositions
/// are read off.
#[derive(Debug, Clone)]
pub struct AbsorberParts {
    pub q: usize,
    pub r: usize,
    pub multisets: CliqueMultisets,
    pub matching: EdgeMatching,
    pub boosters: BTreeMap<InstanceId, Booster>,
    pub hinges: Vec<(HingeRecord, Hinge)>,
}

impl AbsorberParts {
    fn booster(&self, id: InstanceId) -> &Booster {
        &self.boosters[&id]
    }
}

fn with_source(
    d: &Decomposition,
    source: CliqueSource,
) -> impl Iterator<Item = (Clique, CliqueSource)> + '_ {
    d.cliques().iter().map(move |c| (c.clone(), source))
}

fn collect(
    q: usize,
    r: usize,
    mut tagged: Vec<(Clique, CliqueSource)>,
) -> Result<(Decomposition, Vec<CliqueSource>)> {
    tagged.sort();
    let (cliques, sources): (Vec<Clique>, Vec<CliqueSource>) = tagged.into_iter().unzip();
    Ok((Decomposition::new(q, r, cliques)?, sources))
}

/// Cliques of on(B_S) through the given edges of S; errors if two edges share
/// one, which would mean B_S is not orthogonal.
fn on_cliques_at<'a>(
    b: &Booster,
    edges: impl IntoIterator<Item = &'a Edge>,
) -> Result<BTreeSet<Clique>> {
    let mut out = BTreeSet::new();
    for e in edges {
        if !out.insert(b.on_at(e)?.clone()) {
            return Err(Error::Internal(format!(
                "booster for {} is not orthogonal at {e}",
                b.base
            )));
        }
    }
    Ok(out)
}

/// The decomposition of A.
pub fn off_side_decomposition(parts: &AbsorberParts) -> Result<(Decomposition, Vec<CliqueSource>)> {
    let mut tagged = Vec::new();
    for inst in &parts.multisets.negative {
        let b = parts.booster(inst.id);
        let edges: Vec<Edge> = inst.clique.edges(parts.r).collect();
        let drop = on_cliques_at(b, &edges)?;
        let kept = b.on.without(&drop);
        tagged.extend(with_source(&kept, CliqueSource::BoosterOn(inst.id)));
    }
    for (rec, h) in &parts.hinges {
        tagged.extend(with_source(&h.left, CliqueSource::HingeLeft(rec.id)));
    }
    for inst in &parts.multisets.positive {
        tagged.extend(with_source(
            &parts.booster(inst.id).off,
            CliqueSource::BoosterOff(inst.id),
        ));
    }
    collect(parts.q, parts.r, tagged)
}

/// The decomposition of A + L.
pub fn on_side_decomposition(parts: &AbsorberParts) -> Result<(Decomposition, Vec<CliqueSource>)> {
    let targets = parts.matching.matched_as_target();
    let none = BTreeSet::new();
    let mut tagged = Vec::new();
    for inst in &parts.multisets.positive {
        let b = parts.booster(inst.id);
        let drop = on_cliques_at(b, targets.get(&inst.id).unwrap_or(&none))?;
        let kept = b.on.without(&drop);
        tagged.extend(with_source(&kept, CliqueSource::BoosterOn(inst.id)));
    }
    for (rec, h) in &parts.hinges {
        tagged.extend(with_source(&h.right, CliqueSource::HingeRight(rec.id)));
    }
    for inst in &parts.multisets.negative {
        tagged.extend(with_source(
            &parts.booster(inst.id).off,
            CliqueSource::BoosterOff(inst.id),
        ));
    }
    collect(parts.q, parts.r, tagged)
}

/// Builds boosters and hinges for a padded L and its integral decomposition.
pub fn build_parts(
    padded: &RGraph,
    weights: &SignedDecomposition,
    arena: &mut VertexArena,
) -> Result<AbsorberParts> {
    let (q, r) = (weights.q, weights.r);
    let multisets = split_signed(weights);
    let matching = build_matchings(padded, &multisets)?;
    let targets = matching.matched_as_target();

    let mut boosters = BTreeMap::new();
    for (inst, negative) in multisets
        .positive
        .iter()
        .map(|i| (i, false))
        .chain(multisets.negative.iter().map(|i| (i, true)))
    {
        let mut b = build_orthogonal_booster(&inst.clique, r, arena)?;
        let attach: Vec<Edge> = if negative {
            inst.clique.edges(r).collect()
        } else {
            targets
                .get(&inst.id)
                .into_iter()
                .flatten()
                .cloned()
                .collect()
        };
        for e in &attach {
            b = cleanse_attachment(&b, e, arena)?;
        }
        if !is_orthogonal(&b) {
            return Err(Error::Internal(format!(
                "booster for {} lost orthogonality",
                inst.clique
            )));
        }
        boosters.insert(inst.id, b);
    }

    let mut hinges = Vec::with_capacity(matching.pair_count());
    for (f, pairs) in &matching.pairs {
        for &(neg, pos) in pairs {
            let s1 = boosters[&neg].on_at(f)?.clone();
            let s2 = boosters[&pos].on_at(f)?.clone();
            if s1.overlap(&s2) != r {
                return Err(Error::NotSingleEdgeIntersection(s1.overlap(&s2)));
            }
            let h = build_independent_hinge(&s1, &s2, r, arena)?;
            let rec = HingeRecord {
                id: hinges.len(),
                edge: f.clone(),
                negative: neg,
                positive: pos,
                left_clique: s1,
                right_clique: s2,
                edges: h.graph.edge_count(),
            };
            hinges.push((rec, h));
        }
    }
    Ok(AbsorberParts {
        q,
        r,
        multisets,
        matching,
        boosters,
        hinges,
    })
}

/// Builds and verifies a K_q^r-absorber for `l`.
pub fn assemble_absorber(
    l: &RGraph,
    q: usize,
    options: &AssemblyOptions,
) -> Result<AbsorberCertificate> {
    let r = l.r();
    if r == 0 || q <= r {
        return Err(Error::BadParameters { q, r });
    }
    if !is_divisible(l, q) {
        return Err(Error::NotDivisible);
    }
    let mut arena = VertexArena::above(l.vertices());
    let padded = pad_vertices(l, q, &mut arena);
    let weights = integral_decomposition(&padded, q, &options.solver)?;
    let parts = build_parts(&padded, &weights, &mut arena)?;

    let mut a = union_edge_disjoint(
        r,
        parts
            .boosters
            .values()
            .map(|b| &b.graph)
            .chain(parts.hinges.iter().map(|(_, h)| &h.graph)),
    )?;
    for v in padded.vertices() {
        a.add_vertex(*v);
    }
    let (decomposition_a, sources_a) = off_side_decomposition(&parts)?;
    let (decomposition_al, sources_al) = on_side_decomposition(&parts)?;

    let sign_of = |id: InstanceId| {
        if parts.multisets.negative.iter().any(|i| i.id == id) {
            Sign::Negative
        } else {
            Sign::Positive
        }
    };
    let boosters = parts
        .boosters
        .iter()
        .map(|(id, b)| BoosterRecord {
            instance: *id,
            sign: sign_of(*id),
            base: b.base.clone(),
            vertices: b.graph.vertex_count(),
            edges: b.graph.edge_count(),
        })
        .collect();
    let cert = AbsorberCertificate {
        q,
        r,
        l: l.clone(),
        a,
        decomposition_a,
        decomposition_al,
        provenance: Provenance {
            padding: padded
                .vertices()
                .difference(l.vertices())
                .copied()
                .collect(),
            weights: weights.weights.clone(),
            boosters,
            hinges: parts.hinges.into_iter().map(|(rec, _)| rec).collect(),
            sources_a,
            sources_al,
        },
    };
    let report = verify_absorber(&cert.l, &cert);
    if !report.valid() {
        return Err(Error::Internal(format!(
            "assembled absorber fails verification: {report:?}"
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorberReport {
    pub l_inside: bool,
    pub l_independent: bool,
    pub edge_disjoint: bool,
    pub decomposition_a: DecompositionReport,
    pub decomposition_al: DecompositionReport,
}

impl AbsorberReport {
    pub fn valid(&self) -> bool {
        self.l_inside
            && self.l_independent
            && self.edge_disjoint
            && self.decomposition_a.valid()
            && self.decomposition_al.valid()
    }

    /// One line per check.
    pub fn checks(&self) -> [(&'static str, bool); 5] {
        [
            ("V(L) inside V(A)", self.l_inside),
            ("V(L) independent in A", self.l_independent),
            ("A edge-disjoint from L", self.edge_disjoint),
            ("decomposition of A", self.decomposition_a.valid()),
            ("decomposition of A + L", self.decomposition_al.valid()),
        ]
    }
}

/// Checks the absorber properties from the raw objects alone.
pub fn verify_absorber_parts(
    l: &RGraph,
    q: usize,
    a: &RGraph,
    cliques_a: &[Clique],
    cliques_al: &[Clique],
) -> AbsorberReport {
    let l_vertices: BTreeSet<VertexId> = l.vertices().clone();
    let l_inside = l_vertices.iter().all(|v| a.contains_vertex(*v));
    let edge_disjoint = l.edges().iter().all(|e| !a.contains_edge(e));
    let mut al = a.clone();
    for v in l.vertices() {
        al.add_vertex(*v);
    }
    for e in l.edges() {
        al.add_edge(e.clone()).expect("vertices added");
    }
    AbsorberReport {
        l_inside,
        l_independent: is_independent(a, &l_vertices),
        edge_disjoint,
        decomposition_a: verify_cliques(a, q, cliques_a),
        decomposition_al: verify_cliques(&al, q, cliques_al),
    }
}

pub fn verify_absorber(l: &RGraph, cert: &AbsorberCertificate) -> AbsorberReport {
    verify_absorber_parts(
        l,
        cert.q,
        &cert.a,
        cert.decomposition_a.cliques(),
        cert.decomposition_al.cliques(),
    )
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

    fn witness() -> SignedDecomposition {
        SignedDecomposition {
            q: 3,
            r: 2,
            weights: [
                (Clique::of(&[1, 2, 3]), 1),
                (Clique::of(&[3, 4, 5]), 1),
                (Clique::of(&[1, 5, 6]), 1),
                (Clique::of(&[1, 3, 5]), -1),
            ]
            .into_iter()
            .collect(),
        }
    }

    #[test]
    fn matchings_for_cycle_witness() {
        let multisets = split_signed(&witness());
        let m = build_matchings(&cycle6(), &multisets).unwrap();
        let id = |c: &[u32]| {
            multisets
                .positive
                .iter()
                .chain(&multisets.negative)
                .find(|i| i.clique == Clique::of(c))
                .unwrap()
                .id
        };
        let neg = id(&[1, 3, 5]);
        let expected: BTreeMap<Edge, Vec<(InstanceId, InstanceId)>> = [
            (Edge::of(&[1, 3]), vec![(neg, id(&[1, 2, 3]))]),
            (Edge::of(&[1, 5]), vec![(neg, id(&[1, 5, 6]))]),
            (Edge::of(&[3, 5]), vec![(neg, id(&[3, 4, 5]))]),
        ]
        .into_iter()
        .collect();
        assert_eq!(m.pairs, expected);
        assert_eq!(m.unmatched.len(), 6);
        for e in cycle6().edges() {
            assert!(!m.pairs.contains_key(e));
        }
    }

    #[test]
    fn single_clique_needs_no_matching() {
        let w = SignedDecomposition {
            q: 3,
            r: 2,
            weights: [(Clique::of(&[1, 2, 3]), 1)].into_iter().collect(),
        };
        let l = RGraph::complete(2, v(&[1, 2, 3, 4, 5]).into_iter().take(3));
        let m = build_matchings(&l, &split_signed(&w)).unwrap();
        assert!(m.pairs.is_empty());
        assert_eq!(m.unmatched.len(), 3);
    }

    #[test]
    fn count_mismatch_is_reported() {
        let w = SignedDecomposition {
            q: 3,
            r: 2,
            weights: [(Clique::of(&[1, 2, 3]), 1)].into_iter().collect(),
        };
        let l = RGraph::new(2, v(&[1, 2, 3, 4, 5]), [Edge::of(&[4, 5])]).unwrap();
        assert!(matches!(
            build_matchings(&l, &split_signed(&w)),
            Err(Error::CountMismatch(_))
        ));
    }

    #[test]
    fn every_negative_copy_is_matched_at_each_edge() {
        let multisets = split_signed(&witness());
        let m = build_matchings(&cycle6(), &multisets).unwrap();
        for inst in &multisets.negative {
            for e in inst.clique.edges(2) {
                let hits = m
                    .pairs
                    .get(&e)
                    .into_iter()
                    .flatten()
                    .filter(|(n, _)| *n == inst.id)
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn empty_graph_gives_empty_absorber() {
        let l = RGraph::empty(2);
        let cert = assemble_absorber(&l, 3, &AssemblyOptions::default()).unwrap();
        assert_eq!(cert.a.edge_count(), 0);
        assert!(cert.decomposition_a.is_empty());
        assert!(cert.decomposition_al.is_empty());
        assert!(verify_absorber(&l, &cert).valid());
    }

    #[test]
    fn single_triangle_absorber_is_one_booster() {
        let l = RGraph::complete(2, v(&[0, 1, 2]));
        let cert = assemble_absorber(&l, 3, &AssemblyOptions::default()).unwrap();
        assert_eq!(cert.provenance.boosters.len(), 1);
        assert!(cert.provenance.hinges.is_empty());
        assert_eq!(cert.a.edge_count(), 72);
        assert_eq!(cert.decomposition_a.len(), 24);
        assert_eq!(cert.decomposition_al.len(), 25);
        assert!(cert
            .provenance
            .sources_al
            .iter()
            .all(|s| *s == CliqueSource::BoosterOn(InstanceId(0))));
    }

    #[test]
    fn cycle_absorber_from_witness_parts() {
        let l = cycle6();
        let mut arena = VertexArena::above(l.vertices());
        let parts = build_parts(&l, &witness(), &mut arena).unwrap();
        assert_eq!(parts.hinges.len(), 3);
        let (d1, _) = off_side_decomposition(&parts).unwrap();
        let (d2, _) = on_side_decomposition(&parts).unwrap();
        let a = union_edge_disjoint(
            2,
            parts
                .boosters
                .values()
                .map(|b| &b.graph)
                .chain(parts.hinges.iter().map(|(_, h)| &h.graph)),
        )
        .unwrap();
        let report = verify_absorber_parts(&l, 3, &a, d1.cliques(), d2.cliques());
        assert!(report.valid(), "{report:?}");
        // per-edge audit of the A + L side over all pairs inside V(L)
        for f in itertools::Itertools::combinations(v(&[1, 2, 3, 4, 5, 6]).into_iter(), 2) {
            let f = Edge::new(f).unwrap();
            let hits = d2.cliques().iter().filter(|c| c.contains_edge(&f)).count();
            assert_eq!(hits, usize::from(l.contains_edge(&f)), "{f}");
        }
    }

    #[test]
    fn cycle_absorber_end_to_end() {
        let cert = assemble_absorber(&cycle6(), 3, &AssemblyOptions::default()).unwrap();
        assert!(verify_absorber(&cycle6(), &cert).valid());
    }

    #[test]
    fn deleting_a_clique_breaks_verification() {
        let l = RGraph::complete(2, v(&[0, 1, 2]));
        let cert = assemble_absorber(&l, 3, &AssemblyOptions::default()).unwrap();
        let mut al: Vec<Clique> = cert.decomposition_al.cliques().to_vec();
        al.remove(0);
        let report = verify_absorber_parts(&l, 3, &cert.a, cert.decomposition_a.cliques(), &al);
        assert!(!report.valid());
        assert!(report.decomposition_al.uncovered().count() > 0);
    }

    #[test]
    fn not_divisible_input_is_rejected() {
        let l = RGraph::new(2, v(&[1, 2, 3]), [Edge::of(&[1, 2])]).unwrap();
        assert_eq!(
            assemble_absorber(&l, 3, &AssemblyOptions::default()).unwrap_err(),
            Error::NotDivisible
        );
    }
}
