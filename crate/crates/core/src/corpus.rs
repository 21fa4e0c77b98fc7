//! Homeomorphism types of trees with few essential vertices.

use std::collections::BTreeMap;

use crate::tree::PlaneTree;

#[derive(Clone, Debug)]
pub struct CorpusTree {
    /// shape and degrees, e.g. `path[3,4,3]`
    pub name: String,
    pub tree: PlaneTree,
    pub essential: usize,
}

/// Tree with essential vertices of the given degrees joined along `skeleton`.
pub fn from_skeleton(degrees: &[usize], skeleton: &[(usize, usize)]) -> PlaneTree {
    let k = degrees.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(u, v) in skeleton {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut basepoint = None;
    for (i, &deg) in degrees.iter().enumerate() {
        assert!(deg >= adj[i].len(), "degree too small for skeleton");
        for _ in adj[i].len()..deg {
            let leaf = adj.len();
            adj.push(vec![i]);
            adj[i].push(leaf);
            basepoint.get_or_insert(leaf);
        }
    }
    PlaneTree::canonical_from_adjacency(&adj, basepoint.expect("some vertex has a leaf")).expect("skeleton is a tree")
}

/// Radial tree with one essential vertex of degree `deg`.
pub fn radial(deg: usize) -> PlaneTree {
    from_skeleton(&[deg], &[])
}

fn shapes(k: usize) -> Vec<(&'static str, Vec<(usize, usize)>)> {
    match k {
        1 => vec![("radial", vec![])],
        2 => vec![("pair", vec![(0, 1)])],
        3 => vec![("path", vec![(0, 1), (1, 2)])],
        4 => vec![("path", vec![(0, 1), (1, 2), (2, 3)]), ("star", vec![(0, 1), (0, 2), (0, 3)])],
        _ => Vec::new(),
    }
}

/// One tree per homeomorphism type with at most `max_essential` essential vertices,
/// each of degree in `3..=max_degree`.
pub fn corpus(max_essential: usize, max_degree: usize) -> Vec<CorpusTree> {
    let mut seen = BTreeMap::new();
    for k in 1..=max_essential {
        for (shape, skeleton) in shapes(k) {
            let span = max_degree - 2;
            for code in 0..span.pow(k as u32) {
                let degrees: Vec<usize> = (0..k).map(|i| 3 + code / span.pow(i as u32) % span).collect();
                let tree = from_skeleton(&degrees, &skeleton);
                let key = tree.canonical_form();
                seen.entry(key).or_insert_with(|| CorpusTree {
                    name: format!("{shape}{degrees:?}"),
                    tree,
                    essential: k,
                });
            }
        }
    }
    let mut out: Vec<CorpusTree> = seen.into_values().collect();
    out.sort_by_key(|c| (c.essential, c.tree.len(), c.name.clone()));
    out
}

/// The full desk-scale corpus: up to four essential vertices of degree at most five.
pub fn standard_corpus() -> Vec<CorpusTree> {
    corpus(4, 5)
}

/// Four degree-3 essential vertices, one adjacent to the other three.
pub fn t_min() -> PlaneTree {
    from_skeleton(&[3, 3, 3, 3], &[(0, 1), (0, 2), (0, 3)])
}
