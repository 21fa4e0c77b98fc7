//! Reduced and critical cells of the discretized configuration space, their upper
//! bounds, and the Morse-theoretic Betti counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::tree::{Direction, PlaneTree, Vertex};

/// A reduced 1-cell `(a, d, x)`: edge at `a` in direction `d`, with `x[i]` strands
/// in direction `i` from `a` (the edge counts toward `x[d]`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedOneCell {
    pub a: Vertex,
    pub d: Direction,
    pub x: Vec<usize>,
}

impl ReducedOneCell {
    pub fn new(a: Vertex, d: Direction, x: Vec<usize>) -> Self {
        ReducedOneCell { a, d, x }
    }

    pub fn n(&self) -> usize {
        self.x.iter().sum()
    }

    /// Some strand sits strictly between directions 0 and `d`.
    pub fn is_critical(&self) -> bool {
        self.x[1..self.d].iter().any(|&v| v > 0)
    }

    /// Extraneous: no strand off the directions {0, d}, or `a` is not essential.
    pub fn is_extraneous(&self, t: &PlaneTree) -> bool {
        !t.is_essential(self.a) || !self.x.iter().enumerate().any(|(i, &v)| i != 0 && i != self.d && v > 0)
    }

    /// Whether the cell is well formed on `t`.
    pub fn is_valid(&self, t: &PlaneTree) -> bool {
        self.a < t.len()
            && self.x.len() == t.num_directions(self.a)
            && self.d >= 1
            && self.d < self.x.len()
            && self.x[self.d] >= 1
    }
}

impl std::fmt::Display for ReducedOneCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{:?})", self.a, self.d, self.x)
    }
}

/// A concrete cell: occupied vertices plus occupied edges (an edge is named by its
/// endpoint farther from the basepoint). Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExplicitCell {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Vertex>,
}

impl ExplicitCell {
    pub fn new(mut vertices: Vec<Vertex>, mut edges: Vec<Vertex>) -> Self {
        vertices.sort_unstable();
        edges.sort_unstable();
        ExplicitCell { vertices, edges }
    }

    pub fn n(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn dim(&self) -> usize {
        self.edges.len()
    }

    fn occupied(&self, t: &PlaneTree) -> Vec<Vertex> {
        let mut occ = self.vertices.clone();
        for &e in &self.edges {
            occ.push(e);
            occ.push(t.parent(e).expect("edge has a terminal endpoint"));
        }
        occ
    }

    /// Closures of all elements are pairwise disjoint.
    pub fn is_valid(&self, t: &PlaneTree) -> bool {
        if self.edges.iter().any(|&e| e == 0 || e >= t.len()) || self.vertices.iter().any(|&v| v >= t.len()) {
            return false;
        }
        let mut occ = self.occupied(t);
        let k = occ.len();
        occ.sort_unstable();
        occ.dedup();
        occ.len() == k
    }

    pub fn is_blocked(&self, t: &PlaneTree, v: Vertex) -> bool {
        match t.parent(v) {
            None => true,
            Some(p) => {
                self.vertices.binary_search(&p).is_ok() || self.edges.iter().any(|&e| e == p || t.parent(e) == Some(p))
            }
        }
    }

    pub fn is_reduced(&self, t: &PlaneTree) -> bool {
        self.vertices.iter().all(|&v| self.is_blocked(t, v))
    }

    /// Some occupied vertex hangs off `τ(e)` strictly between `τ(e)` and `ι(e)`.
    pub fn edge_disrespectful(&self, t: &PlaneTree, e: Vertex) -> bool {
        let tau = t.parent(e).expect("edge has a terminal endpoint");
        self.vertices.iter().any(|&v| t.parent(v) == Some(tau) && tau < v && v < e)
    }

    pub fn is_critical(&self, t: &PlaneTree) -> bool {
        self.is_reduced(t) && self.edges.iter().all(|&e| self.edge_disrespectful(t, e))
    }

    /// The two faces obtained by sliding edge `e` to either endpoint.
    pub fn faces_at(&self, t: &PlaneTree, e: Vertex) -> [ExplicitCell; 2] {
        let edges: Vec<Vertex> = self.edges.iter().copied().filter(|&f| f != e).collect();
        let mut lo = self.vertices.clone();
        lo.push(e);
        let mut hi = self.vertices.clone();
        hi.push(t.parent(e).expect("edge has a terminal endpoint"));
        [ExplicitCell::new(lo, edges.clone()), ExplicitCell::new(hi, edges)]
    }
}

/// Strand counts per direction from `a`; each edge counts at its endpoint farther from ∗.
pub fn count_d(t: &PlaneTree, a: Vertex, cell: &ExplicitCell) -> Vec<usize> {
    let mut out = vec![0; t.num_directions(a)];
    for &v in &cell.vertices {
        out[t.direction(a, v)] += 1;
    }
    for &e in &cell.edges {
        out[t.direction(a, e)] += 1;
    }
    out
}

/// Like [`count_d`] but each edge counts at its endpoint nearer to ∗.
pub fn count_dbar(t: &PlaneTree, a: Vertex, cell: &ExplicitCell) -> Vec<usize> {
    let mut out = vec![0; t.num_directions(a)];
    for &v in &cell.vertices {
        out[t.direction(a, v)] += 1;
    }
    for &e in &cell.edges {
        out[t.direction(a, t.parent(e).expect("edge has a terminal endpoint"))] += 1;
    }
    out
}

/// All vectors of `parts` nonnegative entries summing to `n`, in lexicographic order.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=rest {
            cur.push(v);
            rec(rest - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(n, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// All non-extraneous reduced 1-cells for `n` strands.
pub fn enumerate_reduced_1cells(t: &PlaneTree, n: usize) -> Result<Vec<ReducedOneCell>> {
    if !t.is_subdivided_for(n) {
        return Err(Error::InsufficientSubdivision { strands: n + 2 });
    }
    let mut out = Vec::new();
    for a in t.essential_vertices() {
        let k = t.num_directions(a);
        let xs = compositions(n, k);
        for d in 1..k {
            for x in &xs {
                let c = ReducedOneCell::new(a, d, x.clone());
                if x[d] >= 1 && !c.is_extraneous(t) {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

pub fn enumerate_critical_1cells(t: &PlaneTree, n: usize) -> Result<Vec<ReducedOneCell>> {
    Ok(enumerate_reduced_1cells(t, n)?.into_iter().filter(ReducedOneCell::is_critical).collect())
}

fn descend(t: &PlaneTree, v: Vertex) -> Vertex {
    *t.children(v).first().expect("subdivision leaves room to stack strands")
}

/// Blocked configuration with an edge at `a` in direction `d` and `x[i]` strands in
/// direction `i`. `x` need not sum to the full strand count.
fn stack(t: &PlaneTree, a: Vertex, d: Direction, x: &[usize]) -> ExplicitCell {
    let mut vertices = Vec::new();
    if x[0] > 0 {
        let mut path = vec![a];
        let mut v = a;
        while let Some(p) = t.parent(v) {
            path.push(p);
            v = p;
        }
        path.reverse();
        vertices.extend(path.into_iter().take(x[0]));
    }
    let mut edges = Vec::new();
    for (i, &k) in x.iter().enumerate().skip(1) {
        let first = t.neighbor(a, i).expect("direction exists at a");
        let (mut v, count) = if i == d {
            edges.push(first);
            (first, k.saturating_sub(1))
        } else if k > 0 {
            vertices.push(first);
            (first, k - 1)
        } else {
            continue;
        };
        for _ in 0..count {
            v = descend(t, v);
            vertices.push(v);
        }
    }
    ExplicitCell::new(vertices, edges)
}

/// The reduced representative of `c` on `t`.
pub fn to_explicit(c: &ReducedOneCell, t: &PlaneTree) -> ExplicitCell {
    stack(t, c.a, c.d, &c.x)
}

/// Reads `(a, d, x)` off a reduced 1-cell; `None` if the cell is not a reduced 1-cell
/// with an edge at an essential vertex.
pub fn from_explicit(cell: &ExplicitCell, t: &PlaneTree) -> Option<ReducedOneCell> {
    if cell.edges.len() != 1 || !cell.is_valid(t) || !cell.is_reduced(t) {
        return None;
    }
    let e = cell.edges[0];
    let a = t.parent(e)?;
    if !t.is_essential(a) {
        return None;
    }
    Some(ReducedOneCell::new(a, t.direction(a, e), count_d(t, a, cell)))
}

/// Puts the cell over the earlier vertex first; the flag records a swap.
pub fn ordered<'a>(c1: &'a ReducedOneCell, c2: &'a ReducedOneCell) -> (&'a ReducedOneCell, &'a ReducedOneCell, bool) {
    if c1.a <= c2.a {
        (c1, c2, false)
    } else {
        (c2, c1, true)
    }
}

/// 1 if the edge of `c` points in direction `alpha`.
pub fn upper_bound_constant(c: &ReducedOneCell, alpha: Direction) -> usize {
    usize::from(c.d == alpha)
}

pub fn upper_bound_exists(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree) -> bool {
    let (p, q, _) = ordered(c1, c2);
    if p.a == q.a {
        return false;
    }
    let n = p.n();
    let alpha = t.direction(p.a, q.a);
    p.x[alpha] + q.x[0] >= n + upper_bound_constant(p, alpha)
}

/// Reduced representative of the least upper bound of two classes.
pub fn lub_reduced(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree) -> Result<ExplicitCell> {
    if !upper_bound_exists(c1, c2, t) {
        return Err(Error::Domain(format!("{c1} and {c2} have no upper bound")));
    }
    let (p, q, _) = ordered(c1, c2);
    let n = p.n();
    let alpha = t.direction(p.a, q.a);
    let mut x = p.x.clone();
    x[alpha] -= n - q.x[0];
    let s1 = stack(t, p.a, p.d, &x);
    let mut y = q.x.clone();
    y[0] = 0;
    let s2 = stack(t, q.a, q.d, &y);
    let mut vertices = s1.vertices;
    vertices.extend(s2.vertices);
    let mut edges = s1.edges;
    edges.extend(s2.edges);
    Ok(ExplicitCell::new(vertices, edges))
}

/// Disrespect flags of the two edges in the least upper bound, returned in argument
/// order; `None` without an upper bound.
pub fn lub_disrespect(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree) -> Option<(bool, bool)> {
    if !upper_bound_exists(c1, c2, t) {
        return None;
    }
    let (p, q, swapped) = ordered(c1, c2);
    let n = p.n();
    let alpha = t.direction(p.a, q.a);
    let clause_a = 0 < alpha && alpha < p.d && p.x[alpha] + q.x[0] > n;
    let clause_b = (1..p.d).any(|i| i != alpha && p.x[i] > 0);
    let flags = (clause_a || clause_b, q.is_critical());
    Some(if swapped { (flags.1, flags.0) } else { flags })
}

/// Flags for the lower (`c1`) and upper (`c2`) cell; errors without an upper bound.
pub fn edge_disrespectful_in_lub(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree) -> Result<(bool, bool)> {
    lub_disrespect(c1, c2, t).ok_or_else(|| Error::Domain(format!("{c1} and {c2} have no upper bound")))
}

/// Whether the least upper bound exists and is critical.
pub fn lub_critical(c1: &ReducedOneCell, c2: &ReducedOneCell, t: &PlaneTree) -> bool {
    matches!(lub_disrespect(c1, c2, t), Some((true, true)))
}

/// Ranks of the Morse complex in degrees 1 and 2.
pub fn count_critical_cells(t: &PlaneTree, n: usize) -> Result<(usize, usize)> {
    let crit = enumerate_critical_1cells(t, n)?;
    let count_2 = par::sum_range(crit.len(), |i| crit[i + 1..].iter().filter(|c| lub_critical(&crit[i], c, t)).count());
    Ok((crit.len(), count_2))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Rank of the free group `B_n` of a radial tree whose essential vertex has degree `x`.
pub fn radial_rank(n: usize, x: usize) -> Result<u128> {
    if n < 2 || x < 3 {
        return Err(Error::Domain(format!("radial rank needs n >= 2 and degree >= 3, got n={n}, x={x}")));
    }
    let (n, x) = (n as u64, x as u64);
    let top = binomial(n + x - 2, n - 1);
    Ok((2..x).map(|i| top - binomial(n + x - i - 1, n - 1)).sum())
}
