mod common;

use flextile::assembly::DEFAULT_BUDGET;
use flextile::*;
use proptest::prelude::*;

fn multigraph(max_order: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_order).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges)
            .prop_map(move |edges| Multigraph::new(n, edges).unwrap())
    })
}

fn graph_and_perm() -> impl Strategy<Value = (Multigraph, Vec<usize>)> {
    multigraph(7, 10).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn end() -> impl Strategy<Value = CohesiveEnd> {
    (1u16..=2, any::<bool>()).prop_map(|(bond, hatted)| CohesiveEnd { bond: BondType(bond), hatted })
}

fn pot() -> impl Strategy<Value = Pot> {
    prop::collection::vec(prop::collection::vec(end(), 1..=3).prop_map(Tile::new), 1..=3).prop_filter_map(
        "distinct tiles",
        |mut tiles| {
            tiles.sort();
            tiles.dedup();
            Pot::new(tiles).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_ignores_labels((g, perm) in graph_and_perm()) {
        let h = g.permuted(&perm);
        prop_assert_eq!(g.canonical_form(), h.canonical_form());
        let phi = g.isomorphism(&h).unwrap();
        prop_assert_eq!(g.permuted(&phi), h);
    }

    #[test]
    fn isomorphism_matches_brute_force(a in multigraph(5, 7), b in multigraph(5, 7)) {
        prop_assert_eq!(a.is_isomorphic(&b), common::brute_isomorphic(&a, &b));
    }

    #[test]
    fn hamiltonicity_matches_brute_force(g in multigraph(7, 12)) {
        prop_assert_eq!(g.is_hamiltonian(), common::brute_hamiltonian(&g));
    }

    #[test]
    fn graph_text_round_trips(g in multigraph(6, 8)) {
        prop_assert_eq!(g.to_text().parse::<Multigraph>().unwrap(), g);
    }

    #[test]
    fn pot_text_round_trips(p in pot()) {
        prop_assert_eq!(p.to_text().parse::<Pot>().unwrap(), p);
    }

    #[test]
    fn usage_vectors_are_balanced(p in pot(), n in 1usize..=6) {
        let m = build_matrix(&p);
        let usages = usage_vectors(&p, n);
        for r in &usages {
            prop_assert_eq!(r.iter().sum::<usize>(), n);
            prop_assert!(m.is_balanced(r));
            prop_assert!(common::balanced(&p, r));
        }
        prop_assert_eq!(usages, common::brute_usages(&p, n));
    }

    #[test]
    fn complexes_respect_tiles(p in pot(), n in 1usize..=4) {
        for r in usage_vectors(&p, n) {
            let set = enumerate_complexes(&p, &r, DEFAULT_BUDGET).unwrap();
            for class in &set.classes {
                prop_assert!(class.labeling.is_consistent_with(&p));
                prop_assert_eq!(class.labeling.usage(p.len()), r.clone());
                let g = &class.graph;
                for v in 0..g.order() {
                    prop_assert_eq!(g.degree(v), p.tiles()[class.labeling.tiles[v]].arms());
                }
            }
        }
    }

    #[test]
    fn verdicts_are_monotone(p in pot(), target in multigraph(4, 6)) {
        let verdicts: Vec<Verdict> = Scenario::all()
            .into_iter()
            .map(|s| verify_scenario(&p, &target, s, DEFAULT_BUDGET).verdict)
            .collect();
        for s in 1..3 {
            if verdicts[s] == Verdict::Pass {
                prop_assert_eq!(verdicts[s - 1], Verdict::Pass);
            }
        }
    }
}
