//! Brute-force cube complex of the discretized configuration space, its GF(2)
//! homology, and direct checks of the combinatorial formulas against it.

use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::cells::{compositions, count_critical_cells, upper_bound_exists, ExplicitCell};
use crate::error::{Error, Result};
use crate::forms::{differential, eval_form, BasicForm, FormSum, ROrder};
use crate::par;
use crate::tree::{PlaneTree, Vertex};

pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// A cell as bitmasks over vertex ids: occupied vertices, and edges named by their
/// endpoint farther from the basepoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub vertices: u128,
    pub edges: u128,
}

impl CellKey {
    pub fn to_explicit(self) -> ExplicitCell {
        ExplicitCell::new(bits(self.vertices), bits(self.edges))
    }
}

fn bits(mut m: u128) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub n: usize,
    pub tree: PlaneTree,
    pub cells: Vec<Vec<CellKey>>,
    index: Vec<HashMap<CellKey, u32>>,
}

fn estimate(vertices: usize, edges: usize, n: usize, max_dim: usize) -> u128 {
    use crate::cells::binomial;
    (0..=max_dim.min(n)).map(|k| binomial(edges as u64, k as u64) * binomial(vertices as u64, (n - k) as u64)).sum()
}

/// All `k`-subsets of `pool`, as bitmasks, extended from `base`.
fn choose_masks(pool: &[Vertex], k: usize, base: u128, out: &mut Vec<u128>) {
    fn rec(pool: &[Vertex], k: usize, start: usize, cur: u128, out: &mut Vec<u128>) {
        if k == 0 {
            out.push(cur);
            return;
        }
        for i in start..=pool.len().saturating_sub(k) {
            rec(pool, k - 1, i + 1, cur | 1 << pool[i], out);
        }
    }
    if k <= pool.len() {
        rec(pool, k, 0, base, out);
    }
}

/// Sets of `k` edges with pairwise disjoint closures, as (edge mask, closure mask).
fn disjoint_edge_sets(t: &PlaneTree, k: usize) -> Vec<(u128, u128)> {
    fn rec(t: &PlaneTree, k: usize, start: usize, edges: u128, used: u128, out: &mut Vec<(u128, u128)>) {
        if k == 0 {
            out.push((edges, used));
            return;
        }
        for e in start..t.len() {
            let p = t.parent(e).expect("non-root vertex");
            let closure = 1u128 << e | 1u128 << p;
            if used & closure == 0 {
                rec(t, k - 1, e + 1, edges | 1 << e, used | closure, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(t, k, 1, 0, 0, &mut out);
    out
}

impl CubeComplex {
    /// Every cell of dimension at most `max_dim`; `t` must already be subdivided.
    pub fn build(t: &PlaneTree, n: usize, max_dim: usize, budget: u128) -> Result<Self> {
        if t.len() > 128 {
            return Err(Error::Domain(format!("oracle handles at most 128 vertices, tree has {}", t.len())));
        }
        let est = estimate(t.len(), t.len() - 1, n, max_dim);
        if est > budget {
            return Err(Error::BudgetExceeded { estimate: est, budget });
        }
        let mut cells = Vec::new();
        for k in 0..=max_dim.min(n) {
            let edge_sets = disjoint_edge_sets(t, k);
            let mut dim_cells: Vec<CellKey> = par::flat_map_range(edge_sets.len(), |i| {
                let (edges, used) = edge_sets[i];
                let pool: Vec<Vertex> = (0..t.len()).filter(|&v| used >> v & 1 == 0).collect();
                let mut masks = Vec::new();
                choose_masks(&pool, n - k, 0, &mut masks);
                masks.into_iter().map(|vertices| CellKey { vertices, edges }).collect()
            });
            dim_cells.sort_unstable();
            cells.push(dim_cells);
        }
        let index = cells.iter().map(|dim| dim.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect()).collect();
        Ok(CubeComplex { n, tree: t.clone(), cells, index })
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The `2k` faces of a `k`-cell.
    pub fn faces(&self, c: CellKey) -> Vec<CellKey> {
        let mut out = Vec::with_capacity(2 * c.edges.count_ones() as usize);
        for e in bits(c.edges) {
            let p = self.tree.parent(e).expect("edge has a terminal endpoint");
            let edges = c.edges & !(1u128 << e);
            out.push(CellKey { vertices: c.vertices | 1 << e, edges });
            out.push(CellKey { vertices: c.vertices | 1 << p, edges });
        }
        out
    }

    pub fn index_of(&self, c: CellKey) -> Option<usize> {
        let k = c.edges.count_ones() as usize;
        self.index.get(k)?.get(&c).map(|&i| i as usize)
    }

    /// Columns of the boundary map from dimension `k` to `k - 1`, as sorted row lists.
    pub fn boundary(&self, k: usize) -> Result<Vec<Vec<u32>>> {
        if k == 0 || k > self.max_dim() {
            return Err(Error::Domain(format!("no boundary map in degree {k}")));
        }
        Ok(par::map(&self.cells[k], |&c| {
            let mut col: Vec<u32> = self.faces(c).into_iter().map(|f| self.index[k - 1][&f]).collect();
            col.sort_unstable();
            col
        }))
    }

    /// Betti numbers `b_0..b_{max_dim-1}` over GF(2).
    pub fn betti(&self) -> Result<Vec<usize>> {
        let top = self.max_dim();
        if top == 0 {
            return Ok(vec![self.cells[0].len()]);
        }
        let ranks: Vec<usize> =
            (1..=top).map(|k| self.boundary(k).map(|b| gf2_rank(b, self.cells[k - 1].len()))).collect::<Result<_>>()?;
        let rank = |k: usize| if k == 0 || k > top { 0 } else { ranks[k - 1] };
        Ok((0..top).map(|k| self.cells[k].len() - rank(k) - rank(k + 1)).collect())
    }
}

/// Rank of a sparse GF(2) matrix given by sorted columns.
pub fn gf2_rank(columns: Vec<Vec<u32>>, rows: usize) -> usize {
    let mut pivot_col: Vec<u32> = vec![u32::MAX; rows];
    let mut reduced: Vec<Vec<u32>> = Vec::new();
    let mut scratch = Vec::new();
    for mut col in columns {
        while let Some(&low) = col.last() {
            let j = pivot_col[low as usize];
            if j == u32::MAX {
                pivot_col[low as usize] = reduced.len() as u32;
                reduced.push(col);
                break;
            }
            symmetric_difference(&col, &reduced[j as usize], &mut scratch);
            std::mem::swap(&mut col, &mut scratch);
        }
    }
    reduced.len()
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

pub fn build_complex(t: &PlaneTree, n: usize, max_dim: usize) -> Result<CubeComplex> {
    CubeComplex::build(t, n, max_dim, DEFAULT_BUDGET)
}

pub fn betti(complex: &CubeComplex) -> Result<Vec<usize>> {
    complex.betti()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorseReport {
    pub tree: String,
    pub n: usize,
    pub b: [usize; 3],
    pub morse: [usize; 2],
    pub pass: bool,
    pub cells: Vec<usize>,
}

/// Homology of the cube complex against the critical-cell counts.
pub fn verify_morse_counts(t: &PlaneTree, n: usize, budget: u128) -> Result<MorseReport> {
    let morse = count_critical_cells(&t.subdivide_for(n), n)?;
    let complex = CubeComplex::build(&t.subdivide_for_oracle(n), n, 3, budget)?;
    let mut b = complex.betti()?;
    b.resize(3, 0);
    let b = [b[0], b[1], b[2]];
    Ok(MorseReport {
        tree: t.canonical_form().code,
        n,
        b,
        morse: [morse.0, morse.1],
        pass: b[0] == 1 && b[1] == morse.0 && b[2] == morse.1,
        cells: complex.counts(),
    })
}

/// `dω(s) = Σ ω(faces of s)` for every cell `s` one dimension above `ω`.
pub fn coboundary_oracle_check(form: &FormSum, degree: usize, complex: &CubeComplex) -> Result<Vec<String>> {
    if degree + 1 > complex.max_dim() {
        return Err(Error::Domain("complex too shallow for this form".into()));
    }
    let t = &complex.tree;
    let mut dw = FormSum::default();
    for f in &form.terms {
        for g in differential(t, f).terms {
            dw.toggle(g);
        }
    }
    let cells = &complex.cells[degree + 1];
    let bad = par::flat_map_range(cells.len(), |i| {
        let s = cells[i];
        let cell = s.to_explicit();
        let lhs = dw.terms.iter().filter(|g| eval_form(t, g, &cell)).count() % 2 == 1;
        let rhs = complex
            .faces(s)
            .into_iter()
            .map(|f| f.to_explicit())
            .map(|f| form.terms.iter().filter(|g| eval_form(t, g, &f)).count())
            .sum::<usize>()
            % 2
            == 1;
        if lhs != rhs {
            vec![format!("{cell:?}: dω = {lhs}, δω = {rhs}")]
        } else {
            Vec::new()
        }
    });
    Ok(bad)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoboundaryReport {
    pub tree: String,
    pub n: usize,
    pub forms_checked: usize,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Checks `d = δ` on the given forms, plus that each `df` of a 0-form is a cocycle.
pub fn verify_d_equals_delta(t: &PlaneTree, n: usize, forms: &[BasicForm], budget: u128) -> Result<CoboundaryReport> {
    let st = t.subdivide_for(n);
    let max_k = forms.iter().map(BasicForm::degree).max().unwrap_or(0);
    let complex = CubeComplex::build(&st, n, (max_k + 1).max(2), budget)?;
    let mut failures = Vec::new();
    for f in forms {
        let single: FormSum = [f.clone()].into_iter().collect();
        for msg in coboundary_oracle_check(&single, f.degree(), &complex)? {
            failures.push(format!("{f}: {msg}"));
        }
        if f.degree() == 0 {
            let df = differential(&st, f);
            for msg in coboundary_oracle_check(&df, 1, &complex)? {
                failures.push(format!("d({f}) not closed: {msg}"));
            }
        }
    }
    Ok(CoboundaryReport {
        tree: t.canonical_form().code,
        n,
        forms_checked: forms.len(),
        pass: failures.is_empty(),
        failures,
    })
}

/// Every basic 0-form `f(a, x)` over essential vertices of `t`.
pub fn all_zero_forms(t: &PlaneTree, n: usize) -> Vec<BasicForm> {
    t.essential_vertices()
        .into_iter()
        .flat_map(|a| compositions(n, t.num_directions(a)).into_iter().map(move |x| BasicForm::zero_form(a, x)))
        .collect()
}

/// A reproducible sample of basic 1-forms on `t` (already subdivided): half built
/// from pairs of cells with an upper bound, half uniformly random.
pub fn sample_one_forms(t: &PlaneTree, n: usize, count: usize, seed: u64) -> Result<Vec<BasicForm>> {
    let order = ROrder::new(t, n)?;
    let cells = &order.cells;
    let ess = t.essential_vertices();
    if cells.is_empty() || ess.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        let c1 = cells[rng.gen_range(0..cells.len())].clone();
        let bounded = out.len() % 2 == 0 && attempts < 100 * count;
        let form = if bounded {
            let p = &cells[rng.gen_range(0..cells.len())];
            if !upper_bound_exists(p, &c1, t) {
                continue;
            }
            BasicForm::one_form(p.a, p.x.clone(), c1)
        } else {
            let a = ess[rng.gen_range(0..ess.len())];
            let xs = compositions(n, t.num_directions(a));
            BasicForm::one_form(a, xs[rng.gen_range(0..xs.len())].clone(), c1)
        };
        out.push(form);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::binomial;

    fn radial(deg: usize) -> PlaneTree {
        crate::corpus::radial(deg)
    }

    #[test]
    fn path_two_strands_counts() {
        // path with V vertices: 1-cells are an edge plus a vertex off its closure
        let p = PlaneTree::parse("(((((())))))").unwrap();
        let v = p.len();
        let c = CubeComplex::build(&p, 2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.cells[0].len() as u128, binomial(v as u64, 2));
        assert_eq!(c.cells[1].len(), (v - 1) * (v - 2));
        let by_edge: usize = (1..v).map(|_| v - 2).sum();
        assert_eq!(c.cells[1].len(), by_edge);
        assert_eq!(c.betti().unwrap(), vec![1, 0]);
    }

    #[test]
    fn single_strand_is_the_tree() {
        let t = radial(4).subdivide_for_oracle(3);
        let c = CubeComplex::build(&t, 1, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.cells[0].len(), t.len());
        assert_eq!(c.cells[1].len(), t.len() - 1);
        let c2 = CubeComplex::build(&t, 1, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(c2.betti().unwrap(), vec![1]);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let t = PlaneTree::parse("((()(()())))").unwrap().subdivide_for_oracle(4);
        let c = CubeComplex::build(&t, 4, 3, DEFAULT_BUDGET).unwrap();
        for k in 2..=3 {
            let hi = c.boundary(k).unwrap();
            let lo = c.boundary(k - 1).unwrap();
            for col in &hi {
                let mut acc: HashMap<u32, u8> = HashMap::new();
                for &f in col {
                    for &g in &lo[f as usize] {
                        *acc.entry(g).or_default() ^= 1;
                    }
                }
                assert!(acc.values().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn euler_characteristic() {
        // three strands: every cell has dimension at most 3, so the complex is complete
        let t = PlaneTree::parse("((()(()())))").unwrap().subdivide_for_oracle(3);
        let c = CubeComplex::build(&t, 3, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.max_dim(), 3);
        let counts = c.counts();
        let chi: i64 = counts.iter().enumerate().map(|(k, &m)| if k % 2 == 0 { m as i64 } else { -(m as i64) }).sum();
        let b = c.betti().unwrap();
        let top_rank = gf2_rank(c.boundary(3).unwrap(), counts[2]);
        let b3 = (counts[3] - top_rank) as i64;
        assert_eq!(chi, b[0] as i64 - b[1] as i64 + b[2] as i64 - b3);
    }

    #[test]
    fn radial_betti() {
        let t = radial(3).subdivide_for_oracle(4);
        let c = CubeComplex::build(&t, 4, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.betti().unwrap(), vec![1, 6, 0]);
    }

    #[test]
    fn betti_stable_under_subdivision() {
        let t = PlaneTree::parse("((()(()())))").unwrap();
        let a = CubeComplex::build(&t.subdivide_for_oracle(3), 3, 3, DEFAULT_BUDGET).unwrap().betti().unwrap();
        let b = CubeComplex::build(&t.subdivide_for_oracle(3).subdivide_edges(3), 3, 3, DEFAULT_BUDGET)
            .unwrap()
            .betti()
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_is_enforced() {
        let t = radial(5).subdivide_for_oracle(5);
        assert!(matches!(CubeComplex::build(&t, 5, 3, 10), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn morse_report_and_negative_control() {
        let t = PlaneTree::parse("((()(()())))").unwrap();
        let mut r = verify_morse_counts(&t, 4, DEFAULT_BUDGET).unwrap();
        assert!(r.pass, "{r:?}");
        r.morse[0] += 1;
        assert_ne!(r.b[1], r.morse[0]);
    }

    #[test]
    fn zero_and_repeated_forms() {
        let t = PlaneTree::parse("((()(()())))").unwrap().subdivide_for(4);
        let c = CubeComplex::build(&t, 4, 2, DEFAULT_BUDGET).unwrap();
        assert!(coboundary_oracle_check(&FormSum::default(), 1, &c).unwrap().is_empty());
        let cell = crate::cells::enumerate_reduced_1cells(&t, 4).unwrap()[0].clone();
        let rep = BasicForm { base: Some((cell.a, cell.x.clone())), factors: vec![cell.clone(), cell] };
        assert!(rep.is_zero());
        assert!(differential(&t, &rep).is_empty());
    }
}
