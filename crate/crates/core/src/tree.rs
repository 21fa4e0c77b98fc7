//! Plane trees with a basepoint, the clockwise vertex order and edge directions.
//!
//! Vertices are renumbered in clockwise depth-first order from the basepoint, so a
//! vertex id *is* its rank in the vertex order and the basepoint is always `0`.
//! An edge is identified with its endpoint farther from the basepoint.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
/// Edge label at a vertex: 0 points toward the basepoint, children are 1, 2, ...
pub type Direction = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneTree {
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    // subtree of v is the id range v..end[v]
    end: Vec<Vertex>,
}

/// Rank of each vertex in the clockwise traversal from the basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOrder {
    pub rank: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalTree {
    pub code: String,
}

impl fmt::Display for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl PlaneTree {
    /// Builds a tree from child lists over arbitrary ids; `root` becomes the basepoint.
    pub fn from_children(children: &[Vec<usize>], root: usize) -> Result<Self> {
        let m = children.len();
        if root >= m {
            return Err(Error::MalformedTree("root out of range".into()));
        }
        if children[root].len() != 1 {
            return Err(Error::BasepointDegree(children[root].len()));
        }
        let mut new_id = vec![usize::MAX; m];
        let mut order = Vec::with_capacity(m);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            if v >= m || new_id[v] != usize::MAX {
                return Err(Error::MalformedTree("child lists do not form a tree".into()));
            }
            new_id[v] = order.len();
            order.push(v);
            stack.extend(children[v].iter().rev().copied());
        }
        if order.len() != m {
            return Err(Error::MalformedTree("child lists do not form a tree".into()));
        }
        let mut parent = vec![None; m];
        let mut kids = vec![Vec::new(); m];
        for &old in &order {
            let v = new_id[old];
            kids[v] = children[old].iter().map(|&c| new_id[c]).collect();
            for &c in &kids[v] {
                parent[c] = Some(v);
            }
        }
        let mut end = vec![0; m];
        for v in (0..m).rev() {
            end[v] = kids[v].last().map_or(v + 1, |&c| end[c]);
        }
        Ok(PlaneTree { parent, children: kids, end })
    }

    /// Builds a tree from a plane embedding given as cyclic neighbor orders.
    /// Children of a vertex are its neighbors read cyclically after its parent.
    pub fn from_adjacency(adj: &[Vec<usize>], basepoint: usize) -> Result<Self> {
        if basepoint >= adj.len() || adj[basepoint].len() != 1 {
            return Err(Error::BasepointDegree(adj.get(basepoint).map_or(0, Vec::len)));
        }
        let m = adj.len();
        let mut children = vec![Vec::new(); m];
        let mut seen = vec![false; m];
        seen[basepoint] = true;
        let mut stack = vec![(basepoint, usize::MAX)];
        while let Some((v, p)) = stack.pop() {
            let nb = &adj[v];
            let start = nb.iter().position(|&u| u == p).map_or(0, |i| i + 1);
            for k in 0..nb.len() {
                let u = nb[(start + k) % nb.len()];
                if u == p {
                    continue;
                }
                if u >= m || seen[u] {
                    return Err(Error::MalformedTree("adjacency is not a tree".into()));
                }
                seen[u] = true;
                children[v].push(u);
                stack.push((u, v));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MalformedTree("adjacency is disconnected".into()));
        }
        Self::from_children(&children, basepoint)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for (pos, ch) in text.char_indices() {
            match ch {
                c if c.is_whitespace() => {}
                '(' => {
                    if closed_root {
                        return Err(Error::Parse { pos, msg: "text after the root node".into() });
                    }
                    let id = children.len();
                    children.push(Vec::new());
                    if let Some(&p) = stack.last() {
                        children[p].push(id);
                    }
                    stack.push(id);
                }
                ')' => {
                    if stack.pop().is_none() {
                        return Err(Error::Parse { pos, msg: "unbalanced ')'".into() });
                    }
                    if stack.is_empty() {
                        closed_root = true;
                    }
                }
                _ => return Err(Error::Parse { pos, msg: format!("unexpected character {ch:?}") }),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse { pos: text.len(), msg: "unclosed '('".into() });
        }
        if children.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty input".into() });
        }
        Self::from_children(&children, 0)
    }

    /// Plane-tree text, readable by [`PlaneTree::parse`].
    pub fn to_paren(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut stack = vec![(0usize, 0usize)];
        out.push('(');
        while let Some((v, i)) = stack.pop() {
            if i < self.children[v].len() {
                stack.push((v, i + 1));
                stack.push((self.children[v][i], 0));
                out.push('(');
            } else {
                out.push(')');
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn basepoint(&self) -> Vertex {
        0
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.children[v].len() + usize::from(self.parent[v].is_some())
    }

    /// Length of an a-vector at `v`: one slot per direction label.
    pub fn num_directions(&self, v: Vertex) -> usize {
        self.children[v].len() + 1
    }

    /// Neighbor of `v` across the edge labelled `dir`.
    pub fn neighbor(&self, v: Vertex, dir: Direction) -> Option<Vertex> {
        if dir == 0 {
            self.parent[v]
        } else {
            self.children[v].get(dir - 1).copied()
        }
    }

    pub fn in_subtree(&self, root: Vertex, v: Vertex) -> bool {
        root <= v && v < self.end[root]
    }

    /// Label of the first edge on the path `from -> to`; 0 when `from == to`.
    pub fn direction(&self, from: Vertex, to: Vertex) -> Direction {
        if from == to || !self.in_subtree(from, to) {
            return 0;
        }
        let kids = &self.children[from];
        kids.partition_point(|&c| c <= to)
    }

    pub fn vertex_order(&self) -> VertexOrder {
        VertexOrder { rank: (0..self.len()).collect() }
    }

    /// Neighbors in clockwise order, parent first.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        (0..self.len()).map(|v| self.parent[v].into_iter().chain(self.children[v].iter().copied()).collect()).collect()
    }

    pub fn is_essential(&self, v: Vertex) -> bool {
        self.degree(v) >= 3
    }

    pub fn essential_vertices(&self) -> Vec<Vertex> {
        (0..self.len()).filter(|&v| self.is_essential(v)).collect()
    }

    /// First vertex of degree != 2 reached from `v` by leaving through `dir`.
    pub fn segment_end(&self, v: Vertex, dir: Direction) -> Option<Vertex> {
        let mut prev = v;
        let mut cur = self.neighbor(v, dir)?;
        while self.degree(cur) == 2 {
            let next = if self.parent[cur] == Some(prev) {
                self.children[cur][0]
            } else {
                self.parent[cur].expect("degree-2 vertex has a parent")
            };
            prev = cur;
            cur = next;
        }
        Some(cur)
    }

    /// Essential vertices joined to `v` by a path through non-essential vertices only.
    pub fn adjacent_essential(&self, v: Vertex) -> Vec<Vertex> {
        (0..self.num_directions(v)).filter_map(|d| self.segment_end(v, d)).filter(|&u| self.is_essential(u)).collect()
    }

    pub fn is_extremal(&self, v: Vertex) -> bool {
        self.is_essential(v) && self.adjacent_essential(v).len() == 1
    }

    pub fn is_radial(&self) -> bool {
        self.essential_vertices().len() == 1
    }

    /// All essential vertices lie on one embedded segment.
    pub fn is_linear(&self) -> bool {
        self.essential_vertices().iter().all(|&v| self.adjacent_essential(v).len() <= 2)
    }

    /// Number of edges on each maximal unbranched segment, keyed by the segment's
    /// top vertex and the direction leaving it.
    fn segments(&self) -> Vec<(Vertex, Direction, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            if self.degree(u) == 2 {
                continue;
            }
            for (i, &c) in self.children[u].iter().enumerate() {
                let mut len = 1;
                let mut cur = c;
                while self.degree(cur) == 2 {
                    cur = self.children[cur][0];
                    len += 1;
                }
                out.push((u, i + 1, len));
            }
        }
        out
    }

    /// Inserts the fewest degree-2 vertices so that every segment has at least
    /// `min_edges` edges. Plane order and basepoint are kept.
    pub fn subdivide_edges(&self, min_edges: usize) -> PlaneTree {
        let mut children = self.children.clone();
        for (u, dir, len) in self.segments() {
            if len >= min_edges {
                continue;
            }
            let c = children[u][dir - 1];
            let mut below = c;
            for _ in 0..(min_edges - len) {
                let w = children.len();
                children.push(vec![below]);
                below = w;
            }
            children[u][dir - 1] = below;
        }
        PlaneTree::from_children(&children, 0).expect("subdivision preserves tree structure")
    }

    /// Subdivision sufficient for `n + 2` strands.
    pub fn subdivide_for(&self, n: usize) -> PlaneTree {
        self.subdivide_edges(n + 1)
    }

    /// Subdivision sufficient for `n` strands, as needed by the cube-complex oracle.
    pub fn subdivide_for_oracle(&self, n: usize) -> PlaneTree {
        self.subdivide_edges(n.saturating_sub(1).max(1))
    }

    pub fn is_subdivided_for(&self, n: usize) -> bool {
        self.segments().iter().all(|&(_, _, len)| len > n)
    }

    /// Adjacency of the tree with degree-2 vertices suppressed, over compact ids.
    pub fn suppressed(&self) -> Vec<Vec<usize>> {
        let keep: Vec<Vertex> = (0..self.len()).filter(|&v| self.degree(v) != 2).collect();
        let mut idx = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            idx[v] = i;
        }
        let mut adj = vec![Vec::new(); keep.len()];
        for (i, &v) in keep.iter().enumerate() {
            for d in 0..self.num_directions(v) {
                if let Some(u) = self.segment_end(v, d) {
                    adj[i].push(idx[u]);
                }
            }
        }
        adj
    }

    /// Plane tree on an undirected adjacency, based at leaf `basepoint`, with every
    /// child list sorted by subtree code so the output depends only on the shape.
    pub fn canonical_from_adjacency(adj: &[Vec<usize>], basepoint: usize) -> Result<Self> {
        let m = adj.len();
        let mut parent = vec![usize::MAX; m];
        let mut order = Vec::with_capacity(m);
        let mut stack = vec![basepoint];
        parent[basepoint] = basepoint;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &u in &adj[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    stack.push(u);
                } else if u != parent[v] {
                    return Err(Error::MalformedTree("adjacency has a cycle".into()));
                }
            }
        }
        if order.len() != m {
            return Err(Error::MalformedTree("adjacency is disconnected".into()));
        }
        let mut codes = vec![String::new(); m];
        let mut children = vec![Vec::new(); m];
        for &v in order.iter().rev() {
            let mut kids: Vec<usize> = adj[v].iter().copied().filter(|&u| u != basepoint && parent[u] == v).collect();
            kids.sort_by(|&x, &y| codes[x].cmp(&codes[y]));
            let mut code = String::from("(");
            for &k in &kids {
                code.push_str(&codes[k]);
            }
            code.push(')');
            codes[v] = code;
            children[v] = kids;
        }
        Self::from_children(&children, basepoint)
    }

    pub fn canonical_form(&self) -> CanonicalTree {
        CanonicalTree { code: unrooted_code(&self.suppressed()) }
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_paren())
    }
}

impl std::str::FromStr for PlaneTree {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PlaneTree::parse(s)
    }
}

pub fn parse_tree(text: &str) -> Result<PlaneTree> {
    PlaneTree::parse(text)
}

pub fn subdivide_for(t: &PlaneTree, n: usize) -> PlaneTree {
    t.subdivide_for(n)
}

pub fn canonical_form(t: &PlaneTree) -> CanonicalTree {
    t.canonical_form()
}

pub fn trees_homeomorphic(a: &PlaneTree, b: &PlaneTree) -> bool {
    a.canonical_form() == b.canonical_form()
}

/// AHU code of an undirected tree rooted at `root`.
pub fn rooted_code(adj: &[Vec<usize>], root: usize) -> String {
    // iterative post-order to survive long paths
    let mut order = Vec::with_capacity(adj.len());
    let mut parent = vec![usize::MAX; adj.len()];
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in &adj[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut codes: Vec<String> = vec![String::new(); adj.len()];
    for &v in order.iter().rev() {
        let mut kids: Vec<String> =
            adj[v].iter().filter(|&&u| parent[u] == v && u != root).map(|&u| std::mem::take(&mut codes[u])).collect();
        kids.sort();
        let mut s = String::from("(");
        for k in kids {
            s.push_str(&k);
        }
        s.push(')');
        codes[v] = s;
    }
    std::mem::take(&mut codes[root])
}

fn centroids(adj: &[Vec<usize>]) -> Vec<usize> {
    let m = adj.len();
    let mut parent = vec![usize::MAX; m];
    let mut order = Vec::with_capacity(m);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in &adj[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut size = vec![1usize; m];
    for &v in order.iter().rev() {
        if v != 0 {
            size[parent[v]] += size[v];
        }
    }
    let heaviest = |v: usize| {
        adj[v].iter().map(|&u| if parent[u] == v && u != 0 { size[u] } else { m - size[v] }).max().unwrap_or(0)
    };
    let best = (0..m).map(heaviest).min().unwrap_or(0);
    (0..m).filter(|&v| heaviest(v) == best).collect()
}

/// Canonical code of an unrooted tree: minimum AHU code over its centroids.
pub fn unrooted_code(adj: &[Vec<usize>]) -> String {
    if adj.is_empty() {
        return String::new();
    }
    centroids(adj).into_iter().map(|c| rooted_code(adj, c)).min().unwrap_or_default()
}
