use proptest::prelude::*;
use treebraid::cells::count_critical_cells;
use treebraid::delta::{build_delta, reconstruct_tree, DeltaGraph};
use treebraid::tree::{trees_homeomorphic, PlaneTree};

/// Random rooted tree: vertex 1 hangs off the basepoint, later vertices attach below it.
fn arb_tree(max: usize) -> impl Strategy<Value = PlaneTree> {
    (3..max).prop_flat_map(|m| proptest::collection::vec(any::<prop::sample::Index>(), m - 2)).prop_map(|picks| {
        let m = picks.len() + 2;
        let mut children = vec![Vec::new(); m];
        children[0].push(1);
        for (i, p) in picks.iter().enumerate() {
            let v = i + 2;
            children[1 + p.index(v - 1)].push(v);
        }
        PlaneTree::from_children(&children, 0).unwrap()
    })
}

fn shuffled(adj: &[Vec<usize>], seed: u64) -> Vec<Vec<usize>> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    adj.iter()
        .map(|nb| {
            let mut nb = nb.clone();
            nb.shuffle(&mut rng);
            nb
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn paren_round_trip(t in arb_tree(30)) {
        let back = PlaneTree::parse(&t.to_paren()).unwrap();
        prop_assert_eq!(back.to_paren(), t.to_paren());
    }

    #[test]
    fn canonical_form_ignores_embedding_and_basepoint(t in arb_tree(25), seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let adj = t.adjacency();
        let leaves: Vec<usize> = (0..t.len()).filter(|&v| adj[v].len() == 1).collect();
        let leaf = leaves[pick.index(leaves.len())];
        let other = PlaneTree::from_adjacency(&shuffled(&adj, seed), leaf).unwrap();
        prop_assert_eq!(other.canonical_form(), t.canonical_form());
        prop_assert!(trees_homeomorphic(&other, &t));
    }

    #[test]
    fn subdivision_is_homeomorphic(t in arb_tree(20), n in 2usize..7) {
        let s = t.subdivide_for(n);
        prop_assert!(s.is_subdivided_for(n));
        prop_assert!(trees_homeomorphic(&s, &t));
        prop_assert_eq!(s.essential_vertices().len(), t.essential_vertices().len());
        prop_assert_eq!(s.subdivide_for(n).len(), s.len());
    }

    #[test]
    fn delta_edges_and_round_trip(t in arb_tree(14)) {
        let s = t.subdivide_for(4);
        let delta = build_delta(&s, 4).unwrap();
        let (_, c2) = count_critical_cells(&s, 4).unwrap();
        prop_assert_eq!(delta.edges.len(), c2);
        let back = DeltaGraph::from_json(&delta.to_json()).unwrap();
        prop_assert_eq!(&back.edges, &delta.edges);
        if !s.is_radial() && !s.essential_vertices().is_empty() {
            let rebuilt = reconstruct_tree(&delta, 4).unwrap();
            prop_assert!(trees_homeomorphic(&rebuilt, &t));
        }
    }
}
