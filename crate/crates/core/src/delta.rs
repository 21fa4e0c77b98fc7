//! The cup-product complex Δ, CUB data, the neighborhood hierarchy, reconstruction
//! of the tree from Δ, strand-count detection and the isomorphism decision.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::cells::{count_critical_cells, lub_disrespect, ordered, radial_rank, ReducedOneCell};
use crate::error::{Error, Result};
use crate::forms::{classify_exceptional, Exceptional, ROrder};
use crate::par;
use crate::tree::{trees_homeomorphic, Direction, PlaneTree};

/// Δ: vertices are critical 1-cells (labels optional for external input), edges
/// are nonzero cup products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGraph {
    pub n: Option<usize>,
    pub cells: Vec<Option<ReducedOneCell>>,
    pub edges: BTreeSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DeltaVertexJson {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cell: Option<ReducedOneCell>,
}

#[derive(Serialize, Deserialize)]
struct DeltaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    vertices: Vec<DeltaVertexJson>,
    edges: Vec<[usize; 2]>,
}

impl DeltaGraph {
    /// Graph with unlabelled vertices; edges are normalized and validated.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)], n: Option<usize>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i == j || i >= vertex_count || j >= vertex_count {
                return Err(Error::InvalidInput(format!("bad edge [{i}, {j}]")));
            }
            set.insert((i.min(j), i.max(j)));
        }
        Ok(DeltaGraph { n, cells: vec![None; vertex_count], edges: set })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn to_json(&self) -> String {
        let doc = DeltaJson {
            n: self.n,
            vertices: self.cells.iter().enumerate().map(|(id, c)| DeltaVertexJson { id, cell: c.clone() }).collect(),
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("delta serializes")
    }

    /// Reads Δ JSON; vertex ids must be exactly `0..len`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DeltaJson = serde_json::from_str(text)?;
        let m = doc.vertices.len();
        let mut cells = vec![None; m];
        let mut seen = vec![false; m];
        for v in doc.vertices {
            if v.id >= m || seen[v.id] {
                return Err(Error::InvalidInput(format!("vertex ids must be 0..{m} without repeats")));
            }
            seen[v.id] = true;
            cells[v.id] = v.cell;
        }
        let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = DeltaGraph::from_edges(m, &edges, doc.n)?;
        g.cells = cells;
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph delta {\n");
        for (i, c) in self.cells.iter().enumerate() {
            match c {
                Some(c) => writeln!(s, "  v{i} [label=\"{c}\"];").unwrap(),
                None => writeln!(s, "  v{i};").unwrap(),
            }
        }
        for &(i, j) in &self.edges {
            writeln!(s, "  v{i} -- v{j};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// `ε_c(d')`.
pub fn cup_constant(c: &ReducedOneCell, dp: Direction, n: usize) -> usize {
    if dp == 0 || dp > c.d {
        return 0;
    }
    if dp < c.d && (1..c.d).any(|i| i != dp && c.x[i] > 0) {
        return 0;
    }
    if n == 5 && classify_exceptional(c, n) == Exceptional::TypeI {
        return 0;
    }
    1
}

/// Whether `Mc^* ∪ Mc'^*` is nonzero, decided combinatorially from the cell over
/// the earlier vertex.
pub fn m_cup_adjacent(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree, n: usize) -> bool {
    let Some((f1, f2)) = lub_disrespect(c1, c2, t) else { return false };
    let critical = f1 && f2;
    let (lo, hi, _) = ordered(c1, c2);
    match classify_exceptional(lo, n) {
        Exceptional::TypeI => !critical,
        Exceptional::TypeII => {
            let alpha = t.direction(lo.a, hi.a);
            let smallest = (1..lo.x.len()).find(|&i| lo.x[i] != 0);
            critical && Some(alpha) != smallest
        }
        _ => critical,
    }
}

/// Δ with vertices in `<_r` order.
pub fn build_delta(t: &PlaneTree, n: usize) -> Result<DeltaGraph> {
    if !(4..=5).contains(&n) {
        return Err(Error::Domain(format!("Δ is built for 4 or 5 strands, got {n}")));
    }
    let order = ROrder::new(t, n)?;
    let crit: Vec<ReducedOneCell> = order.critical.iter().map(|&i| order.cells[i].clone()).collect();
    let edges = par::flat_map_range(crit.len(), |i| {
        (i + 1..crit.len()).filter(|&j| m_cup_adjacent(&crit[i], &crit[j], t, n)).map(|j| (i, j)).collect()
    });
    Ok(DeltaGraph { n: Some(n), cells: crit.into_iter().map(Some).collect(), edges: edges.into_iter().collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubData {
    pub cub_direction: Direction,
    pub cub_number: usize,
    pub cup_constant: usize,
}

/// CUB data of `c` given its Δ-neighbors; `None` when it has none.
pub fn cub_data(c: &ReducedOneCell, neighbors: &[&ReducedOneCell], t: &PlaneTree, n: usize) -> Result<Option<CubData>> {
    let Some(first) = neighbors.first() else { return Ok(None) };
    let d = t.direction(c.a, first.a);
    if neighbors.iter().any(|o| t.direction(c.a, o.a) != d) {
        return Err(Error::Invariant(format!("neighbors of {c} lie in several directions")));
    }
    let eps = cup_constant(c, d, n);
    Ok(Some(CubData { cub_direction: d, cub_number: c.x[d] - eps, cup_constant: eps }))
}

/// CUB data for every vertex of a labelled Δ.
pub fn cub_table(delta: &DeltaGraph, t: &PlaneTree, n: usize) -> Result<Vec<Option<CubData>>> {
    let adj = delta.adjacency();
    let cells = labelled_cells(delta)?;
    (0..delta.len())
        .map(|i| {
            let nb: Vec<&ReducedOneCell> = adj[i].iter().map(|&j| &cells[j]).collect();
            cub_data(&cells[i], &nb, t, n)
        })
        .collect()
}

fn labelled_cells(delta: &DeltaGraph) -> Result<Vec<ReducedOneCell>> {
    delta
        .cells
        .iter()
        .map(|c| c.clone().ok_or_else(|| Error::InvalidInput("Δ vertex without a cell label".into())))
        .collect()
}

pub fn neighborhood_structure_test(
    c: &ReducedOneCell,
    cub_c: &CubData,
    c2: &ReducedOneCell,
    cub_c2: &CubData,
    t: &PlaneTree,
    n: usize,
) -> bool {
    c.a != c2.a
        && t.direction(c.a, c2.a) == cub_c.cub_direction
        && t.direction(c2.a, c.a) == cub_c2.cub_direction
        && cub_c.cub_number + cub_c2.cub_number >= n
}

type Bits = Vec<u64>;

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &Bits) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

/// Neighborhood classes of Δ ordered by inclusion of neighborhoods.
#[derive(Clone, Debug)]
pub struct NeighborhoodHierarchy {
    /// Δ vertices in each class (classes of vertices with nonempty neighborhood)
    pub classes: Vec<Vec<usize>>,
    /// neighborhood size of each class
    pub neighborhood_size: Vec<usize>,
    /// `sub[i][j]`: N_i ⊊ N_j
    sub: Vec<Vec<bool>>,
    /// Hasse children of each class
    pub children: Vec<Vec<usize>>,
    /// classes maximal under inclusion
    pub maximal: Vec<usize>,
}

pub fn hierarchy(delta: &DeltaGraph) -> NeighborhoodHierarchy {
    let m = delta.len();
    let words = m.div_ceil(64).max(1);
    let mut nb: Vec<Bits> = vec![vec![0; words]; m];
    for &(i, j) in &delta.edges {
        nb[i][j / 64] |= 1 << (j % 64);
        nb[j][i / 64] |= 1 << (i % 64);
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut reps: Vec<Bits> = Vec::new();
    for (v, row) in nb.iter().enumerate() {
        if popcount(row) == 0 {
            continue;
        }
        match reps.iter().position(|r| r == row) {
            Some(k) => classes[k].push(v),
            None => {
                classes.push(vec![v]);
                reps.push(row.clone());
            }
        }
    }
    let k = classes.len();
    let sub: Vec<Vec<bool>> =
        (0..k).map(|i| (0..k).map(|j| i != j && is_subset(&reps[i], &reps[j])).collect()).collect();
    let children =
        (0..k).map(|v| (0..k).filter(|&u| sub[u][v] && !(0..k).any(|w| sub[u][w] && sub[w][v])).collect()).collect();
    let maximal = (0..k).filter(|&i| !(0..k).any(|j| sub[i][j])).collect();
    let neighborhood_size = reps.iter().map(popcount).collect();
    NeighborhoodHierarchy { classes, neighborhood_size, sub, children, maximal }
}

impl NeighborhoodHierarchy {
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Default root: the first maximal class.
    pub fn root(&self) -> Option<usize> {
        self.maximal.first().copied()
    }

    /// `v` itself and every class whose neighborhood lies inside its neighborhood.
    pub fn descendants(&self, v: usize) -> Vec<usize> {
        (0..self.classes.len()).filter(|&u| u == v || self.sub[u][v]).collect()
    }
}

/// The tree H′ (or H) grown from a root class: `p1` joined to the root, classes
/// joined to their children.
#[derive(Clone, Debug)]
pub struct ClassTree {
    pub root: usize,
    /// classes present, root first
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl ClassTree {
    pub fn to_dot(&self, h: &NeighborhoodHierarchy, name: &str) -> String {
        let mut s = format!("graph {name} {{\n  p1;\n  p1 -- c{};\n", self.root);
        for &v in &self.nodes {
            writeln!(s, "  c{v} [label=\"[{}] |{}|\"];", h.classes[v][0], h.classes[v].len()).unwrap();
        }
        for &(u, v) in &self.edges {
            writeln!(s, "  c{u} -- c{v};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

fn class_tree(h: &NeighborhoodHierarchy, root: usize, keep: &[usize]) -> ClassTree {
    let mut nodes = vec![root];
    nodes.extend(keep.iter().copied().filter(|&v| v != root));
    let edges =
        nodes.iter().flat_map(|&v| h.children[v].iter().filter(|u| keep.contains(u)).map(move |&u| (v, u))).collect();
    ClassTree { root, nodes, edges }
}

pub fn h_prime(h: &NeighborhoodHierarchy, root: usize) -> ClassTree {
    class_tree(h, root, &h.descendants(root))
}

/// Why a Δ does not come from a tree braid group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Undefined {
    NoRadialDegree(usize),
    HUndefined,
    HNotTree,
    NoDegree(String),
    TooManyChildren,
    Unsupported(usize),
}

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Undefined::NoRadialDegree(k) => write!(f, "no degree x with radial rank {k}"),
            Undefined::HUndefined => f.write_str("no child of the root class qualifies for pruning"),
            Undefined::HNotTree => f.write_str("the pruned hierarchy is not a tree"),
            Undefined::NoDegree(what) => write!(f, "no degree solves the equation for {what}"),
            Undefined::TooManyChildren => f.write_str("a class has more children than its degree allows"),
            Undefined::Unsupported(n) => write!(f, "reconstruction supports 4 or 5 strands, got {n}"),
        }
    }
}

impl std::error::Error for Undefined {}

const MAX_DEGREE: usize = 64;

/// Smallest `x` in `3..=64` with `f(x) == target`.
fn solve_degree(target: usize, f: impl Fn(usize) -> u128) -> Option<usize> {
    (3..=MAX_DEGREE).find(|&x| f(x) == target as u128)
}

fn y(n: usize, x: usize) -> u128 {
    radial_rank(n, x).unwrap_or(0)
}

/// Builds a tree from an abstract skeleton: `deg[i]` is the wanted degree of node
/// `i`, missing degree is filled with leaves, and the basepoint hangs off node 0.
fn grow_tree(deg: &[usize], edges: &[(usize, usize)]) -> PlaneTree {
    let k = deg.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut basepoint = None;
    for i in 0..k {
        let missing = deg[i].saturating_sub(adj[i].len());
        for _ in 0..missing {
            let leaf = adj.len();
            adj.push(vec![i]);
            adj[i].push(leaf);
            if i == 0 && basepoint.is_none() {
                basepoint = Some(leaf);
            }
        }
    }
    PlaneTree::canonical_from_adjacency(&adj, basepoint.expect("root node gets a leaf")).expect("skeleton is a tree")
}

fn radial_tree(degree: usize) -> PlaneTree {
    grow_tree(&[degree], &[])
}

pub fn reconstruct_tree(delta: &DeltaGraph, n: usize) -> std::result::Result<PlaneTree, Undefined> {
    let h = hierarchy(delta);
    match h.root() {
        None => reconstruct_radial(delta, n),
        Some(root) => reconstruct_with_root(delta, &h, root, n),
    }
}

fn reconstruct_radial(delta: &DeltaGraph, n: usize) -> std::result::Result<PlaneTree, Undefined> {
    if !(4..=5).contains(&n) {
        return Err(Undefined::Unsupported(n));
    }
    solve_degree(delta.len(), |x| y(n, x)).map(radial_tree).ok_or(Undefined::NoRadialDegree(delta.len()))
}

/// The pruned tree H for a chosen root class.
pub fn pruned_h(h: &NeighborhoodHierarchy, root: usize, n: usize) -> std::result::Result<ClassTree, Undefined> {
    let desc = h.descendants(root);
    if n != 5 {
        return Ok(class_tree(h, root, &desc));
    }
    let kids = &h.children[root];
    let chosen = kids.iter().copied().find(|&c| {
        let dc = h.descendants(c);
        if 2 * dc.len() != desc.len() {
            return false;
        }
        kids.iter().enumerate().all(|(i, &u)| {
            kids[i + 1..].iter().all(|&w| {
                let du = h.descendants(u);
                let common = h.descendants(w).iter().any(|x| du.contains(x));
                !common || dc.contains(&u) || dc.contains(&w)
            })
        })
    });
    let chosen = chosen.ok_or(Undefined::HUndefined)?;
    let removed = h.descendants(chosen);
    let keep: Vec<usize> = desc.into_iter().filter(|v| !removed.contains(v)).collect();
    Ok(class_tree(h, root, &keep))
}

pub fn reconstruct_with_root(
    delta: &DeltaGraph,
    h: &NeighborhoodHierarchy,
    root: usize,
    n: usize,
) -> std::result::Result<PlaneTree, Undefined> {
    if !(4..=5).contains(&n) {
        return Err(Undefined::Unsupported(n));
    }
    if h.is_empty() {
        return reconstruct_radial(delta, n);
    }
    let hp = h_prime(h, root);
    let ht = pruned_h(h, root, n)?;
    let size = |v: usize| h.classes[v].len();
    let pdeg1 = solve_degree(size(root), |x| y(2, x)).ok_or_else(|| Undefined::NoDegree("p1".into()))?;
    if n == 5 && ht.nodes.len() == 2 && hp.nodes.len() == 4 {
        // three essential vertices on a line
        let kids = &h.children[root];
        let w = hp.nodes.iter().copied().filter(|&v| v != root && !kids.contains(&v)).collect::<Vec<_>>();
        let [w] = w[..] else { return Err(Undefined::HUndefined) };
        let b = solve_degree(size(w), |x| y(3, x) - y(2, x)).ok_or_else(|| Undefined::NoDegree("B".into()))?;
        let c = solve_degree(h.neighborhood_size[w], |x| y(2, x)).ok_or_else(|| Undefined::NoDegree("C".into()))?;
        return Ok(grow_tree(&[pdeg1, b, c], &[(0, 1), (1, 2)]));
    }
    // nodes: 0 is p1, then classes of H
    let k = ht.nodes.len();
    let pos = |v: usize| ht.nodes.iter().position(|&u| u == v).expect("node in H") + 1;
    let mut edges = vec![(0, 1)];
    edges.extend(ht.edges.iter().map(|&(u, v)| (pos(u), pos(v))));
    if edges.len() != k || !connected(k + 1, &edges) {
        return Err(Undefined::HNotTree);
    }
    let mut deg = vec![pdeg1];
    for &v in &ht.nodes {
        let kids: Vec<usize> = h.children[v].iter().copied().filter(|u| ht.nodes.contains(u)).collect();
        let d = if kids.is_empty() {
            solve_degree(h.neighborhood_size[v], |x| y(n - 2, x))
        } else {
            let ds: Vec<Option<usize>> = kids.iter().map(|&u| solve_degree(size(u), |x| y(2, x))).collect();
            if ds.iter().all(|d| *d == ds[0]) {
                ds[0]
            } else {
                None
            }
        };
        let d = d.ok_or_else(|| Undefined::NoDegree(format!("class {v}")))?;
        if kids.len() + 1 > d {
            return Err(Undefined::TooManyChildren);
        }
        deg.push(d);
    }
    Ok(grow_tree(&deg, &edges))
}

fn connected(k: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); k];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectedN {
    Four,
    Five,
    Unknown,
}

impl fmt::Display for DetectedN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectedN::Four => "4",
            DetectedN::Five => "5",
            DetectedN::Unknown => "unknown",
        })
    }
}

pub fn detect_n(delta: &DeltaGraph) -> DetectedN {
    let h = hierarchy(delta);
    let Some(root) = h.root() else { return DetectedN::Unknown };
    let kids = &h.children[root];
    let shared = kids
        .iter()
        .enumerate()
        .any(|(i, &u)| kids[i + 1..].iter().any(|&w| h.children[u].iter().any(|x| h.children[w].contains(x))));
    if shared {
        DetectedN::Five
    } else {
        DetectedN::Four
    }
}

/// One side of an isomorphism question.
#[derive(Clone, Debug)]
pub enum GroupSpec {
    Tree { tree: PlaneTree, n: usize },
    Delta { delta: DeltaGraph, n: Option<usize> },
}

enum Resolved {
    Free(u128),
    Rigid(PlaneTree, usize),
}

fn resolve(spec: &GroupSpec) -> Result<Resolved> {
    match spec {
        GroupSpec::Tree { tree, n } => {
            let n = *n;
            if n <= 1 {
                return Ok(Resolved::Free(0));
            }
            if n <= 3 {
                return Ok(Resolved::Free(tree.essential_vertices().iter().map(|&a| y(n, tree.degree(a))).sum()));
            }
            if n > 5 {
                return Err(Error::Domain(format!("isomorphism is decided for at most 5 strands, got {n}")));
            }
            let t = tree.subdivide_for(n);
            let delta = build_delta(&t, n)?;
            if delta.is_edgeless() {
                return Ok(Resolved::Free(delta.len() as u128));
            }
            Ok(Resolved::Rigid(t, n))
        }
        GroupSpec::Delta { delta, n } => {
            if delta.is_edgeless() {
                return Ok(Resolved::Free(delta.len() as u128));
            }
            let n = match n.or(delta.n) {
                Some(n) => n,
                None => match detect_n(delta) {
                    DetectedN::Four => 4,
                    DetectedN::Five => 5,
                    DetectedN::Unknown => unreachable!("Δ has edges"),
                },
            };
            reconstruct_tree(delta, n)
                .map(|t| Resolved::Rigid(t, n))
                .map_err(|u| Error::InvalidInput(format!("Δ is not a tree braid group complex: {u}")))
        }
    }
}

pub fn decide_isomorphic(a: &GroupSpec, b: &GroupSpec) -> Result<bool> {
    Ok(match (resolve(a)?, resolve(b)?) {
        (Resolved::Free(r), Resolved::Free(s)) => r == s,
        (Resolved::Rigid(s, n), Resolved::Rigid(t, m)) if n == m => trees_homeomorphic(&s, &t),
        (Resolved::Rigid(s, n), Resolved::Rigid(t, m)) => {
            // Δ fixes n once a tree has three essential vertices, so only Betti numbers can separate the rest
            let betti_differ =
                count_critical_cells(&s.subdivide_for(n), n)? != count_critical_cells(&t.subdivide_for(m), m)?;
            if betti_differ || (s.essential_vertices().len() >= 3 && t.essential_vertices().len() >= 3) {
                false
            } else {
                return Err(Error::Domain(format!(
                    "cannot decide between {n} and {m} strands for trees with fewer than three essential vertices and equal Betti numbers"
                )));
            }
        }
        _ => false,
    })
}

/// Critical cells over `a` pointing in direction `d` with CUB at least `k`.
pub fn count_cub_at_least(delta: &DeltaGraph, cubs: &[Option<CubData>], a: usize, d: Direction, k: usize) -> usize {
    delta
        .cells
        .iter()
        .zip(cubs)
        .filter(|(c, cub)| {
            matches!((c, cub), (Some(c), Some(cub)) if c.a == a && cub.cub_direction == d && cub.cub_number >= k)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TMIN: &str = "((()((()())(()()))))";

    #[test]
    fn cup_constant_examples() {
        let c = ReducedOneCell::new(1, 2, vec![0, 3, 1]);
        assert_eq!(cup_constant(&c, 0, 4), 0);
        assert_eq!(cup_constant(&c, 1, 4), 1);
        assert_eq!(cup_constant(&c, 2, 4), 1);
        let t1 = ReducedOneCell::new(1, 2, vec![0, 2, 2, 1]);
        assert_eq!(cup_constant(&t1, 2, 5), 0);
        let busy = ReducedOneCell::new(1, 3, vec![0, 1, 1, 2]);
        assert_eq!(cup_constant(&busy, 1, 4), 0);
        assert_eq!(cup_constant(&busy, 4, 4), 0);
    }

    #[test]
    fn radial_delta_is_discrete() {
        let t = PlaneTree::parse("((()()))").unwrap().subdivide_for(4);
        let d = build_delta(&t, 4).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.is_edgeless());
        assert!(hierarchy(&d).is_empty());
        assert_eq!(detect_n(&d), DetectedN::Unknown);
        let r = reconstruct_tree(&d, 4).unwrap();
        assert!(trees_homeomorphic(&r, &PlaneTree::parse("((()()))").unwrap()));
    }

    #[test]
    fn undefined_radial() {
        let d = DeltaGraph::from_edges(2, &[], Some(4)).unwrap();
        assert_eq!(reconstruct_tree(&d, 4), Err(Undefined::NoRadialDegree(2)));
    }

    #[test]
    fn tmin_round_trip() {
        let tmin = PlaneTree::parse(TMIN).unwrap();
        let t = tmin.subdivide_for(4);
        let d = build_delta(&t, 4).unwrap();
        assert_eq!(d.len(), 24);
        let h = hierarchy(&d);
        assert_eq!(h.classes[h.root().unwrap()].len(), 1);
        let r = reconstruct_tree(&d, 4).unwrap();
        assert!(trees_homeomorphic(&r, &tmin));
        assert_eq!(detect_n(&d), DetectedN::Four);
    }

    #[test]
    fn json_round_trip() {
        let t = PlaneTree::parse(TMIN).unwrap().subdivide_for(4);
        let d = build_delta(&t, 4).unwrap();
        let back = DeltaGraph::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let bare = DeltaGraph::from_json(r#"{"vertices":[{"id":0},{"id":1}],"edges":[[1,0]]}"#).unwrap();
        assert_eq!(bare.edges.iter().next(), Some(&(0, 1)));
        assert!(DeltaGraph::from_json(r#"{"vertices":[{"id":0}],"edges":[[0,0]]}"#).is_err());
        assert!(d.to_dot().starts_with("graph delta"));
    }

    #[test]
    fn isomorphism_examples() {
        let tmin = PlaneTree::parse(TMIN).unwrap();
        let line = PlaneTree::parse("((()(()(()(()())))))").unwrap();
        let spec = |t: &PlaneTree, n| GroupSpec::Tree { tree: t.clone(), n };
        assert!(decide_isomorphic(&spec(&tmin, 4), &spec(&tmin.subdivide_for(9), 4)).unwrap());
        assert!(!decide_isomorphic(&spec(&tmin, 4), &spec(&line, 4)).unwrap());
        assert!(!decide_isomorphic(&spec(&tmin, 4), &spec(&tmin, 5)).unwrap());
        let r4 = PlaneTree::parse("((()()()))").unwrap();
        let r5 = PlaneTree::parse("((()()()()))").unwrap();
        assert!(decide_isomorphic(&spec(&r4, 4), &spec(&r5, 3)).unwrap());
        assert!(!decide_isomorphic(&spec(&r4, 4), &spec(&tmin, 4)).unwrap());
    }
}
