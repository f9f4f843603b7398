use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use proptest::prelude::*;

use kqr_absorbers::assembly::{assemble_absorber, verify_absorber, AssemblyOptions};
use kqr_absorbers::booster::{build_booster, verify_booster};
use kqr_absorbers::format::{emit_graph, parse_graph};
use kqr_absorbers::hinge::{build_independent_hinge, verify_hinge};
use kqr_absorbers::hypergraph::{
    fresh_embed, is_divisible, union_edge_disjoint, verify_cliques, Clique, Edge, RGraph,
    VertexArena, VertexId,
};
use kqr_absorbers::integral::{integral_decomposition, pad_vertices, SolverOptions};
use kqr_absorbers::layering::{is_orthogonal, orthogonalize};

fn choose(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn graph_of(r: usize, n: u32, edges: &BTreeSet<Vec<u32>>) -> RGraph {
    RGraph::new(
        r,
        (0..n).map(VertexId),
        edges
            .iter()
            .map(|e| Edge::new(e.iter().copied().map(VertexId)).unwrap()),
    )
    .unwrap()
}

fn clique_of(ids: &[u32]) -> Clique {
    Clique::new(ids.iter().copied().map(VertexId)).unwrap()
}

/// Every r-subset of `0..n`, each kept when its flag is set.
fn subgraph(n: u32, r: usize, flags: &[bool]) -> BTreeSet<Vec<u32>> {
    (0..n)
        .combinations(r)
        .zip(flags)
        .filter(|(_, keep)| **keep)
        .map(|(e, _)| e)
        .collect()
}

fn divisible_oracle(n: u32, r: usize, q: usize, edges: &BTreeSet<Vec<u32>>) -> bool {
    (0..r).all(|i| {
        let modulus = choose((q - i) as u64, (r - i) as u64);
        (0..n).combinations(i).all(|set| {
            let deg = edges
                .iter()
                .filter(|e| set.iter().all(|v| e.contains(v)))
                .count() as u64;
            deg.is_multiple_of(modulus)
        })
    })
}

fn decomposition_oracle(
    r: usize,
    q: usize,
    edges: &BTreeSet<Vec<u32>>,
    cliques: &[Vec<u32>],
) -> bool {
    let mut count: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for c in cliques {
        let mut c = c.clone();
        c.sort();
        c.dedup();
        if c.len() != q {
            return false;
        }
        for e in c.iter().copied().combinations(r) {
            if !edges.contains(&e) {
                return false;
            }
            *count.entry(e).or_default() += 1;
        }
    }
    edges.iter().all(|e| count.get(e) == Some(&1))
}

/// Edge-disjoint cliques picked greedily from a list of candidates.
fn greedy_packing(r: usize, candidates: &[Vec<u32>]) -> (Vec<Vec<u32>>, BTreeSet<Vec<u32>>) {
    let mut cliques = Vec::new();
    let mut edges = BTreeSet::new();
    for c in candidates {
        let mut c = c.clone();
        c.sort();
        let es: Vec<Vec<u32>> = c.iter().copied().combinations(r).collect();
        if es.iter().all(|e| !edges.contains(e)) {
            edges.extend(es);
            cliques.push(c);
        }
    }
    (cliques, edges)
}

fn distinct_ids(count: usize, below: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::sample::subsequence((0..below).collect::<Vec<_>>(), count).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_agrees_with_oracle_on_random_lists(
        n in 4u32..=9,
        flags in prop::collection::vec(any::<bool>(), 36),
        cliques in prop::collection::vec(prop::collection::vec(0u32..9, 3), 0..6),
    ) {
        let edges = subgraph(n, 2, &flags);
        let cliques: Vec<Vec<u32>> = cliques.into_iter().filter(|c| c.iter().all(|v| *v < n)).collect();
        let g = graph_of(2, n, &edges);
        let parsed: Vec<Clique> = cliques
            .iter()
            .filter_map(|c| Clique::new(c.iter().copied().map(VertexId)).ok())
            .collect();
        let well_formed = parsed.len() == cliques.len();
        let report = verify_cliques(&g, 3, &parsed);
        prop_assert_eq!(well_formed && report.valid(), decomposition_oracle(2, 3, &edges, &cliques));
    }

    #[test]
    fn verifier_agrees_with_oracle_on_packings(
        n in 5u32..=12,
        r in 2usize..=3,
        candidates in prop::collection::vec(prop::collection::vec(0u32..12, 4), 1..8),
        drop in any::<prop::sample::Index>(),
        extra in prop::option::of(prop::collection::vec(0u32..12, 3)),
    ) {
        let candidates: Vec<Vec<u32>> = candidates
            .into_iter()
            .map(|c| c.into_iter().map(|v| v % n).unique().collect::<Vec<_>>())
            .filter(|c| c.len() == 4)
            .collect();
        let (mut cliques, mut edges) = greedy_packing(r, &candidates);
        if let Some(e) = extra {
            let mut e: Vec<u32> = e.into_iter().map(|v| v % n).unique().take(r).collect();
            e.sort();
            if e.len() == r {
                edges.insert(e);
            }
        }
        if !cliques.is_empty() && drop.index(2) == 0 {
            cliques.remove(drop.index(cliques.len()));
        }
        let g = graph_of(r, n, &edges);
        let parsed: Vec<Clique> = cliques.iter().map(|c| clique_of(c)).collect();
        prop_assert_eq!(verify_cliques(&g, 4, &parsed).valid(), decomposition_oracle(r, 4, &edges, &cliques));
    }

    #[test]
    fn divisibility_agrees_with_oracle(
        n in 3u32..=8,
        qr in prop::sample::select(vec![(3usize, 2usize), (4, 2), (4, 3), (3, 1)]),
        flags in prop::collection::vec(prop::bool::weighted(0.6), 56),
    ) {
        let (q, r) = qr;
        let edges = subgraph(n, r, &flags);
        let g = graph_of(r, n, &edges);
        prop_assert_eq!(is_divisible(&g, q), divisible_oracle(n, r, q, &edges));
    }

    #[test]
    fn edge_disjoint_clique_unions_are_divisible(
        n in 5u32..=10,
        qr in prop::sample::select(vec![(3usize, 2usize), (4, 2), (4, 3), (5, 3)]),
        candidates in prop::collection::vec(prop::collection::vec(0u32..10, 5), 0..6),
    ) {
        let (q, r) = qr;
        let candidates: Vec<Vec<u32>> = candidates
            .into_iter()
            .map(|c| c.into_iter().map(|v| v % n).unique().take(q).collect::<Vec<_>>())
            .filter(|c| c.len() == q)
            .collect();
        let (_, edges) = greedy_packing(r, &candidates);
        prop_assert!(is_divisible(&graph_of(r, n, &edges), q));
    }

    #[test]
    fn fresh_embed_gives_an_isomorphic_copy(
        n in 2u32..=9,
        flags in prop::collection::vec(any::<bool>(), 36),
        pins in prop::collection::btree_map(0u32..9, 100u32..110, 0..5),
    ) {
        let edges = subgraph(n, 2, &flags);
        let g = graph_of(2, n, &edges);
        let images: BTreeSet<u32> = pins.values().copied().collect();
        prop_assume!(images.len() == pins.len());
        let pinned: BTreeMap<VertexId, VertexId> = pins
            .iter()
            .filter(|(s, _)| **s < n)
            .map(|(s, t)| (VertexId(*s), VertexId(*t)))
            .collect();
        let mut arena = VertexArena::starting_at(1000);
        let (h, map) = fresh_embed(&g, &pinned, &mut arena).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count());
        prop_assert_eq!(h.edge_count(), g.edge_count());
        for v in g.vertices() {
            let image = map.vertex(*v);
            match pinned.get(v) {
                Some(t) => prop_assert_eq!(image, *t),
                None => prop_assert!(image.0 >= 1000),
            }
        }
        for e in g.edges() {
            prop_assert!(h.contains_edge(&map.edge(e)));
        }
        prop_assert_eq!(h.degree_sequence(), g.degree_sequence());
    }

    #[test]
    fn union_succeeds_iff_parts_are_edge_disjoint(
        parts in prop::collection::vec(prop::collection::vec(any::<bool>(), 15), 1..4),
    ) {
        let edge_sets: Vec<BTreeSet<Vec<u32>>> = parts.iter().map(|f| subgraph(6, 2, f)).collect();
        let graphs: Vec<RGraph> = edge_sets.iter().map(|es| graph_of(2, 6, es)).collect();
        let disjoint = edge_sets
            .iter()
            .tuple_combinations()
            .all(|(a, b)| a.is_disjoint(b));
        let result = union_edge_disjoint(2, &graphs);
        prop_assert_eq!(result.is_ok(), disjoint);
        if let Ok(u) = result {
            let total: usize = edge_sets.iter().map(BTreeSet::len).sum();
            prop_assert_eq!(u.edge_count(), total);
        }
    }

    #[test]
    fn graph_files_round_trip(
        ints in prop::collection::btree_set(-50i64..50, 0..5),
        strs in prop::collection::btree_set("[a-z][a-z0-9]{0,3}", 0..5),
        flags in prop::collection::vec(any::<bool>(), 45),
    ) {
        let mut labels: Vec<String> = ints.iter().map(|i| i.to_string()).collect();
        labels.extend(strs.iter().map(|s| format!("{s:?}")));
        let n = labels.len();
        let edges: Vec<String> = (0..n)
            .combinations(2)
            .zip(&flags)
            .filter(|(_, keep)| **keep)
            .map(|(e, _)| format!("[{}, {}]", labels[e[1]], labels[e[0]]))
            .collect();
        let text = format!(
            r#"{{"edges": [{}], "vertices": [{}], "r": 2}}"#,
            edges.iter().rev().join(","),
            labels.iter().rev().join(",")
        );
        let (g, table) = parse_graph(&text).unwrap();
        let canonical = emit_graph(&g, &table);
        let (g2, table2) = parse_graph(&canonical).unwrap();
        prop_assert_eq!(&g2, &g);
        prop_assert_eq!(emit_graph(&g2, &table2), canonical);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_solution_exists_iff_divisible(
        n in 3u32..=8,
        qr in prop::sample::select(vec![(3usize, 2usize), (4, 2), (4, 3)]),
        flags in prop::collection::vec(prop::bool::weighted(0.5), 56),
        candidates in prop::collection::vec(prop::collection::vec(0u32..8, 4), 0..4),
        planted in any::<bool>(),
    ) {
        let (q, r) = qr;
        // half the cases are clique packings, so that divisible inputs are common
        let edges = if planted {
            let candidates: Vec<Vec<u32>> = candidates
                .into_iter()
                .map(|c| c.into_iter().map(|v| v % n).unique().take(q).collect::<Vec<_>>())
                .filter(|c| c.len() == q)
                .collect();
            greedy_packing(r, &candidates).1
        } else {
            subgraph(n, r, &flags)
        };
        let g = graph_of(r, n, &edges);
        let mut arena = VertexArena::above(g.vertices());
        let padded = pad_vertices(&g, q, &mut arena);
        let divisible = divisible_oracle(n, r, q, &edges);
        match integral_decomposition(&padded, q, &SolverOptions::default()) {
            Ok(w) => {
                prop_assert!(divisible);
                let mut sums: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
                for (c, weight) in &w.weights {
                    let ids: Vec<u32> = c.vertices().iter().map(|v| v.0).collect();
                    for e in ids.into_iter().combinations(r) {
                        *sums.entry(e).or_default() += weight;
                    }
                }
                let all: Vec<u32> = padded.vertices().iter().map(|v| v.0).collect();
                for f in all.into_iter().combinations(r) {
                    let expected = i64::from(edges.contains(&f));
                    prop_assert_eq!(sums.get(&f).copied().unwrap_or(0), expected);
                }
            }
            Err(e) => {
                prop_assert!(!divisible, "divisible input failed: {e}");
            }
        }
    }

    #[test]
    fn boosters_are_valid_for_any_base_ids(
        qr in prop::sample::select(vec![(3usize, 2usize), (4, 2), (4, 3), (3, 1)]),
        ids in distinct_ids(4, 60),
    ) {
        let (q, r) = qr;
        let base = clique_of(&ids[..q]);
        let mut arena = VertexArena::starting_at(60);
        let b = build_booster(&base, r, &mut arena, None).unwrap();
        prop_assert!(verify_booster(&b).valid());
        let state = orthogonalize(b, &mut arena).unwrap();
        prop_assert!(is_orthogonal(&state.booster));
        prop_assert!(verify_booster(&state.booster).valid());
        prop_assert_eq!(&state.booster.base, &base);
    }

    #[test]
    fn independent_hinges_for_any_placement(
        qr in prop::sample::select(vec![(3usize, 2usize), (4, 2), (4, 3), (5, 3)]),
        ids in distinct_ids(7, 40),
    ) {
        let (q, r) = qr;
        let s1 = clique_of(&ids[..q]);
        let s2: Vec<u32> = ids[..r].iter().chain(&ids[q..2 * q - r]).copied().collect();
        let s2 = clique_of(&s2);
        let mut arena = VertexArena::starting_at(40);
        let h = build_independent_hinge(&s1, &s2, r, &mut arena).unwrap();
        let report = verify_hinge(&h);
        prop_assert!(report.valid_independent(), "{:?}", report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn absorbers_for_random_divisible_graphs(
        n in 5u32..=7,
        triangles in prop::collection::vec(prop::collection::vec(0u32..7, 3), 1..5),
        l1_reduce in any::<bool>(),
    ) {
        // symmetric differences of triangles have even degrees
        let mut edges: BTreeSet<Vec<u32>> = BTreeSet::new();
        for t in triangles {
            let t: Vec<u32> = t.into_iter().map(|v| v % n).unique().sorted().collect();
            if t.len() < 3 {
                continue;
            }
            for e in t.into_iter().combinations(2) {
                if !edges.remove(&e) {
                    edges.insert(e);
                }
            }
        }
        prop_assume!(divisible_oracle(n, 2, 3, &edges));
        let l = graph_of(2, n, &edges);
        let options = AssemblyOptions { solver: SolverOptions { l1_reduce, ..SolverOptions::default() } };
        let cert = assemble_absorber(&l, 3, &options).unwrap();
        prop_assert!(verify_absorber(&l, &cert).valid());
    }
}
