//! Z/2 cochains on the configuration space: basic forms, their differential,
//! necessary forms, the `<_r` order, the change-of-basis matrices and the
//! normal form of cup products of critical classes.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cells::{
    count_d, count_dbar, enumerate_reduced_1cells, lub_disrespect, ordered, upper_bound_exists, ExplicitCell,
    ReducedOneCell,
};
use crate::error::{Error, Result};
use crate::par;
use crate::tree::{PlaneTree, Vertex};

/// `f(a, x) dc_1 ∧ … ∧ dc_k`; a missing base is the constant function 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicForm {
    pub base: Option<(Vertex, Vec<usize>)>,
    pub factors: Vec<ReducedOneCell>,
}

impl BasicForm {
    pub fn zero_form(a: Vertex, x: Vec<usize>) -> Self {
        BasicForm { base: Some((a, x)), factors: Vec::new() }
    }

    pub fn one_form(a: Vertex, x: Vec<usize>, c: ReducedOneCell) -> Self {
        BasicForm { base: Some((a, x)), factors: vec![c] }
    }

    /// `1 · dc_1 ∧ … ∧ dc_k`.
    pub fn wedge(factors: Vec<ReducedOneCell>) -> Self {
        BasicForm { base: None, factors }
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// A repeated factor makes the form identically zero.
    pub fn is_zero(&self) -> bool {
        self.factors.iter().enumerate().any(|(i, c)| self.factors[..i].contains(c))
    }
}

impl fmt::Display for BasicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Some((a, x)) => write!(f, "f({a},{x:?})")?,
            None => f.write_str("1")?,
        }
        for c in &self.factors {
            write!(f, " d{c}")?;
        }
        Ok(())
    }
}

/// Z/2 formal sum of basic forms; inserting a present term cancels it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSum {
    pub terms: BTreeSet<BasicForm>,
}

impl FormSum {
    pub fn toggle(&mut self, form: BasicForm) {
        if form.is_zero() {
            return;
        }
        if !self.terms.remove(&form) {
            self.terms.insert(form);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

impl FromIterator<BasicForm> for FormSum {
    fn from_iter<I: IntoIterator<Item = BasicForm>>(iter: I) -> Self {
        let mut s = FormSum::default();
        for f in iter {
            s.toggle(f);
        }
        s
    }
}

/// Value of `dc` on a cell: the cell uses the edge of `c` and matches its counts.
pub fn eval_dc(t: &PlaneTree, c: &ReducedOneCell, cell: &ExplicitCell) -> bool {
    let Some(e) = t.neighbor(c.a, c.d) else { return false };
    cell.edges.binary_search(&e).is_ok() && count_d(t, c.a, cell) == c.x
}

pub fn eval_form(t: &PlaneTree, form: &BasicForm, cell: &ExplicitCell) -> bool {
    if form.is_zero() {
        return false;
    }
    if !form.factors.iter().all(|c| eval_dc(t, c, cell)) {
        return false;
    }
    match &form.base {
        Some((a, x)) => count_d(t, *a, cell) == *x || count_dbar(t, *a, cell) == *x,
        None => true,
    }
}

/// Every term `(a, d', y)` of `df(a, x)`, extraneous ones included.
pub fn differential_terms(t: &PlaneTree, a: Vertex, x: &[usize]) -> Vec<ReducedOneCell> {
    let mut out = Vec::new();
    for d in 1..t.num_directions(a).min(x.len()) {
        if x[d] >= 1 {
            out.push(ReducedOneCell::new(a, d, x.to_vec()));
        }
        if x[0] >= 1 {
            let mut y = x.to_vec();
            y[0] -= 1;
            y[d] += 1;
            out.push(ReducedOneCell::new(a, d, y));
        }
    }
    out
}

pub fn differential_0form(t: &PlaneTree, a: Vertex, x: &[usize]) -> FormSum {
    differential_terms(t, a, x).into_iter().map(|c| BasicForm::wedge(vec![c])).collect()
}

/// `d(f dc_1 ∧ …) = df ∧ dc_1 ∧ …`; `d1 = 0`.
pub fn differential(t: &PlaneTree, form: &BasicForm) -> FormSum {
    let Some((a, x)) = &form.base else { return FormSum::default() };
    differential_terms(t, *a, x)
        .into_iter()
        .map(|c| {
            let mut factors = vec![c];
            factors.extend(form.factors.iter().cloned());
            BasicForm::wedge(factors)
        })
        .collect()
}

pub fn differential_sum(t: &PlaneTree, s: &FormSum) -> FormSum {
    let mut out = FormSum::default();
    for f in &s.terms {
        for g in differential(t, f).terms {
            out.toggle(g);
        }
    }
    out
}

/// Terms whose class differs from every factor and which have an upper bound with
/// each factor.
pub fn annihilate_cells(
    t: &PlaneTree,
    factors: &[ReducedOneCell],
    terms: impl IntoIterator<Item = ReducedOneCell>,
) -> Vec<ReducedOneCell> {
    terms.into_iter().filter(|c| factors.iter().all(|f| f != c && upper_bound_exists(f, c, t))).collect()
}

/// Annihilator applied to a sum of 1-forms with leading factor 1.
pub fn annihilate(t: &PlaneTree, factors: &[ReducedOneCell], s: &FormSum) -> FormSum {
    s.terms
        .iter()
        .filter(|f| f.base.is_none() && f.factors.len() == 1)
        .filter(|f| factors.iter().all(|g| *g != f.factors[0] && upper_bound_exists(g, &f.factors[0], t)))
        .cloned()
        .collect()
}

/// The necessary cell of `form`, if the form is necessary.
pub fn is_necessary(t: &PlaneTree, form: &BasicForm) -> Result<Option<ReducedOneCell>> {
    let Some((a, x)) = &form.base else { return Ok(None) };
    let a = *a;
    if !t.is_essential(a) || x.len() != t.num_directions(a) {
        return Ok(None);
    }
    match form.factors.as_slice() {
        [] => {
            let Some(d) = (1..x.len()).find(|&d| x[d] >= 1) else { return Ok(None) };
            let c = ReducedOneCell::new(a, d, x.clone());
            Ok((!c.is_extraneous(t) && !c.is_critical()).then_some(c))
        }
        [c1] => {
            let mut found = None;
            for d in 1..x.len() {
                if x[d] == 0 {
                    continue;
                }
                let c = ReducedOneCell::new(a, d, x.clone());
                if c.is_extraneous(t) || c.a == c1.a {
                    continue;
                }
                if let Some((e_flag, f_flag)) = lub_disrespect(&c, c1, t) {
                    if !e_flag && f_flag {
                        if found.is_some() {
                            return Err(Error::Invariant(format!("{form} has two necessary cells")));
                        }
                        found = Some(c);
                    }
                }
            }
            Ok(found)
        }
        _ => Ok(None),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exceptional {
    None,
    TypeI,
    TypeII,
    TypeIII,
}

/// `(dir1, dir2, dir3)` for a five-strand cell with two directions holding ≥ 2 strands.
fn exceptional_dirs(c: &ReducedOneCell) -> Option<(usize, usize, usize)> {
    let big: Vec<usize> = (0..c.x.len()).filter(|&i| c.x[i] >= 2).collect();
    let [d1, d2] = big[..] else { return None };
    let d3 = if c.x[d1] == 3 {
        d1
    } else if c.x[d2] == 3 {
        d2
    } else {
        (0..c.x.len()).find(|&i| c.x[i] == 1)?
    };
    Some((d1, d2, d3))
}

pub fn classify_exceptional(c: &ReducedOneCell, n: usize) -> Exceptional {
    if n != 5 || c.n() != 5 || !c.is_critical() {
        return Exceptional::None;
    }
    let Some((d1, d2, d3)) = exceptional_dirs(c) else { return Exceptional::None };
    if 0 < d1 && d1 < d2 && d2 < d3 {
        if c.d == d2 {
            return Exceptional::TypeI;
        }
        if c.d == d3 {
            return Exceptional::TypeII;
        }
    }
    if d3 == 0 && 0 < d1 && d1 < d2 && c.d == d2 {
        return Exceptional::TypeIII;
    }
    Exceptional::None
}

/// The partner of a Type I or Type II cell.
pub fn corresponding_cell(c: &ReducedOneCell, n: usize) -> Option<ReducedOneCell> {
    let (_, d2, d3) = exceptional_dirs(c)?;
    match classify_exceptional(c, n) {
        Exceptional::TypeI => Some(ReducedOneCell::new(c.a, d3, c.x.clone())),
        Exceptional::TypeII => Some(ReducedOneCell::new(c.a, d2, c.x.clone())),
        _ => None,
    }
}

/// The `<_r` order on non-extraneous reduced 1-cells.
#[derive(Clone, Debug)]
pub struct ROrder {
    /// cells in `<_r` order (Type I/II pairs swapped)
    pub cells: Vec<ReducedOneCell>,
    /// rank of each position in the order before the swap
    pub base_rank: Vec<usize>,
    /// position for each base rank
    pub by_base: Vec<usize>,
    /// positions of critical cells, ascending
    pub critical: Vec<usize>,
    /// positions of noncritical cells, ascending
    pub noncritical: Vec<usize>,
    index: HashMap<ReducedOneCell, usize>,
}

fn base_key(c: &ReducedOneCell) -> (usize, std::cmp::Reverse<usize>, usize, &[usize]) {
    (c.a, std::cmp::Reverse(c.x[0]), c.d, &c.x)
}

impl ROrder {
    pub fn new(t: &PlaneTree, n: usize) -> Result<Self> {
        let mut base = enumerate_reduced_1cells(t, n)?;
        base.sort_by(|p, q| base_key(p).cmp(&base_key(q)));
        let index0: HashMap<ReducedOneCell, usize> = base.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut perm: Vec<usize> = (0..base.len()).collect();
        for (i, c) in base.iter().enumerate() {
            if classify_exceptional(c, n) == Exceptional::TypeI {
                let partner = corresponding_cell(c, n).expect("Type I cell has a partner");
                let j = index0[&partner];
                perm.swap(i, j);
            }
        }
        let cells: Vec<ReducedOneCell> = perm.iter().map(|&i| base[i].clone()).collect();
        let mut by_base = vec![0; perm.len()];
        for (pos, &b) in perm.iter().enumerate() {
            by_base[b] = pos;
        }
        let index = cells.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let critical = (0..cells.len()).filter(|&i| cells[i].is_critical()).collect();
        let noncritical = (0..cells.len()).filter(|&i| !cells[i].is_critical()).collect();
        Ok(ROrder { cells, base_rank: perm, by_base, critical, noncritical, index })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `ri`: position of a cell, if it is a non-extraneous reduced 1-cell.
    pub fn ri(&self, c: &ReducedOneCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// `si`: position among critical cells.
    pub fn si(&self, c: &ReducedOneCell) -> Option<usize> {
        let r = self.ri(c)?;
        self.critical.binary_search(&r).ok()
    }

    /// `ti`: position among noncritical cells.
    pub fn ti(&self, c: &ReducedOneCell) -> Option<usize> {
        let r = self.ri(c)?;
        self.noncritical.binary_search(&r).ok()
    }
}

/// Square bit matrix over GF(2), stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    size: usize,
    words: usize,
    cols: Vec<Vec<u64>>,
}

impl GF2Matrix {
    pub fn identity(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        let mut cols = vec![vec![0u64; words]; size];
        for (j, col) in cols.iter_mut().enumerate() {
            col[j / 64] |= 1 << (j % 64);
        }
        GF2Matrix { size, words, cols }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cols[col][row / 64] >> (row % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let bit = 1u64 << (row % 64);
        if value {
            self.cols[col][row / 64] |= bit;
        } else {
            self.cols[col][row / 64] &= !bit;
        }
    }

    pub fn column_support(&self, col: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.cols[col].iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn set_column(&mut self, col: usize, support: &[usize]) {
        self.cols[col].iter_mut().for_each(|w| *w = 0);
        for &r in support {
            self.cols[col][r / 64] ^= 1 << (r % 64);
        }
    }

    /// `self ← self · E`, where `E` is the identity with column `col` replaced by
    /// the indicator of `support`.
    pub fn mul_column_replacement(&mut self, col: usize, support: &[usize]) {
        let mut acc = vec![0u64; self.words];
        for &j in support {
            for (a, b) in acc.iter_mut().zip(&self.cols[j]) {
                *a ^= b;
            }
        }
        self.cols[col] = acc;
    }

    pub fn mul(&self, other: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.size, other.size);
        let mut out = GF2Matrix::identity(self.size);
        for j in 0..self.size {
            out.mul_column_into(j, self, &other.column_support(j));
        }
        out
    }

    fn mul_column_into(&mut self, col: usize, left: &GF2Matrix, support: &[usize]) {
        let mut acc = vec![0u64; self.words];
        for &i in support {
            for (a, b) in acc.iter_mut().zip(&left.cols[i]) {
                *a ^= b;
            }
        }
        self.cols[col] = acc;
    }

    /// No entry above the diagonal.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.size).all(|j| self.column_support(j).first().is_none_or(|&r| r >= j))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.size).all(|j| self.column_support(j).last().is_none_or(|&r| r <= j))
    }

    pub fn is_invertible(&self) -> bool {
        let mut cols = self.cols.clone();
        let mut rank = 0;
        for row in 0..self.size {
            let (w, bit) = (row / 64, 1u64 << (row % 64));
            let Some(p) = (rank..self.size).find(|&j| cols[j][w] & bit != 0) else { continue };
            cols.swap(rank, p);
            let pivot = cols[rank].clone();
            for (j, col) in cols.iter_mut().enumerate() {
                if j != rank && col[w] & bit != 0 {
                    for (a, b) in col.iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank == self.size
    }

    /// Rows as strings of `0`/`1`.
    pub fn dump_rows(&self) -> String {
        let mut s = String::with_capacity(self.size * (self.size + 1));
        for r in 0..self.size {
            for c in 0..self.size {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Matrix({0}x{0})\n{1}", self.size, self.dump_rows())
    }
}

/// How the column `ri(c)` of `M_c` was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McKind {
    Noncritical,
    Identity,
    Necessary { witnesses: usize },
    TypeI,
    TypeII,
    TypeIII,
}

/// The change of basis of first cohomology and the data it is built from.
pub struct ChangeOfBasis<'t> {
    pub tree: &'t PlaneTree,
    pub n: usize,
    pub order: ROrder,
    /// support of column `ri(c)` of `M_c` for each position `c`
    pub mc_columns: Vec<Vec<usize>>,
    pub mc_kinds: Vec<McKind>,
    pub ms: GF2Matrix,
    pub mt: GF2Matrix,
    pub m: GF2Matrix,
}

/// Positions of the non-extraneous terms of `df(a, x)` kept by the annihilator.
fn annihilated_positions(
    t: &PlaneTree,
    order: &ROrder,
    a: Vertex,
    x: &[usize],
    factors: &[ReducedOneCell],
) -> Vec<usize> {
    let mut out: Vec<usize> =
        annihilate_cells(t, factors, differential_terms(t, a, x)).iter().filter_map(|c| order.ri(c)).collect();
    out.sort_unstable();
    out
}

/// Critical cells `c1` for which `f(a, x_c) dc1` is necessary with necessary cell `c`.
pub fn necessary_witnesses(t: &PlaneTree, order: &ROrder, c: &ReducedOneCell) -> Result<Vec<ReducedOneCell>> {
    let mut out = Vec::new();
    for c1 in &order.cells {
        if c1.a == c.a {
            continue;
        }
        let form = BasicForm::one_form(c.a, c.x.clone(), c1.clone());
        if is_necessary(t, &form)?.as_ref() == Some(c) {
            out.push(c1.clone());
        }
    }
    Ok(out)
}

/// Column `ri(c)` of `M_c`.
fn mc_column(t: &PlaneTree, n: usize, order: &ROrder, pos: usize) -> Result<(Vec<usize>, McKind)> {
    let c = &order.cells[pos];
    if !c.is_critical() {
        let mut u = annihilated_positions(t, order, c.a, &c.x, &[]);
        u.retain(|&r| r != pos);
        return Ok((u, McKind::Noncritical));
    }
    match classify_exceptional(c, n) {
        Exceptional::TypeI => return Ok((vec![pos], McKind::TypeI)),
        Exceptional::TypeII => {
            let partner = corresponding_cell(c, n).expect("Type II cell has a partner");
            let p = order.ri(&partner).ok_or_else(|| Error::Invariant(format!("partner of {c} missing")))?;
            let mut u = vec![pos, p];
            u.sort_unstable();
            return Ok((u, McKind::TypeII));
        }
        Exceptional::TypeIII => {
            let (_, dir2, _) = exceptional_dirs(c).expect("Type III has exceptional directions");
            let mut u = vec![pos];
            for i in 1..c.x.len() {
                if i == c.d {
                    continue;
                }
                let mut y = c.x.clone();
                y[0] -= 1;
                y[i] += 1;
                if let Some(r) = order.ri(&ReducedOneCell::new(c.a, dir2, y)) {
                    u.push(r);
                }
            }
            u.sort_unstable();
            return Ok((u, McKind::TypeIII));
        }
        Exceptional::None => {}
    }
    let witnesses = necessary_witnesses(t, order, c)?;
    let Some(first) = witnesses.first() else { return Ok((vec![pos], McKind::Identity)) };
    let u = annihilated_positions(t, order, c.a, &c.x, std::slice::from_ref(first));
    for w in &witnesses[1..] {
        if annihilated_positions(t, order, c.a, &c.x, std::slice::from_ref(w)) != u {
            return Err(Error::Invariant(format!("witnesses of {c} give different columns")));
        }
    }
    Ok((u, McKind::Necessary { witnesses: witnesses.len() }))
}

impl<'t> ChangeOfBasis<'t> {
    pub fn new(t: &'t PlaneTree, n: usize) -> Result<Self> {
        let order = ROrder::new(t, n)?;
        let cols = par::map_range(order.len(), |pos| mc_column(t, n, &order, pos));
        let mut mc_columns = Vec::with_capacity(order.len());
        let mut mc_kinds = Vec::with_capacity(order.len());
        for col in cols {
            let (u, k) = col?;
            mc_columns.push(u);
            mc_kinds.push(k);
        }
        let size = order.len();
        let mut ms = GF2Matrix::identity(size);
        for &c in &order.critical {
            ms.mul_column_replacement(c, &mc_columns[c]);
        }
        let mut mt = GF2Matrix::identity(size);
        for &c in order.noncritical.iter().rev() {
            mt.mul_column_replacement(c, &mc_columns[c]);
        }
        let m = mt.mul(&ms);
        Ok(ChangeOfBasis { tree: t, n, order, mc_columns, mc_kinds, ms, mt, m })
    }

    pub fn matrix_m_c(&self, pos: usize) -> GF2Matrix {
        let mut m = GF2Matrix::identity(self.order.len());
        m.set_column(pos, &self.mc_columns[pos]);
        m
    }

    /// Support of `M dc` for a cell position.
    pub fn m_dc(&self, pos: usize) -> Vec<usize> {
        self.m.column_support(pos)
    }

    /// Expands `(M c1)^* ∪ (M c2)^*` in the basis of critical 2-cells, returned as
    /// pairs of positions (lower vertex first).
    pub fn cup_after_basis_change(&self, c1: usize, c2: usize) -> Result<BTreeSet<(usize, usize)>> {
        let mut start = BTreeSet::new();
        for p in self.m_dc(c1) {
            for q in self.m_dc(c2) {
                toggle_pair(&mut start, &self.order, p, q);
            }
        }
        self.normal_form(start)
    }

    /// Normal form of the single monomial `c1 ∧ c2`.
    pub fn cup_normal_form(&self, c1: usize, c2: usize) -> Result<BTreeSet<(usize, usize)>> {
        let mut start = BTreeSet::new();
        toggle_pair(&mut start, &self.order, c1, c2);
        self.normal_form(start)
    }

    /// Rewrites pairs whose upper bound is noncritical using coboundaries of
    /// necessary forms. Keys are base ranks, so every rewrite moves strictly upward.
    fn normal_form(&self, mut pending: BTreeSet<(usize, usize)>) -> Result<BTreeSet<(usize, usize)>> {
        let t = self.tree;
        let order = &self.order;
        let mut out = BTreeSet::new();
        let guard = order.len() * order.len() + 1;
        let mut steps = 0;
        while let Some((bp, bq)) = pending.pop_first() {
            steps += 1;
            if steps > guard {
                return Err(Error::Invariant("cup normal form did not terminate".into()));
            }
            let (pp, pq) = (order.by_base[bp], order.by_base[bq]);
            let (p, q) = (&order.cells[pp], &order.cells[pq]);
            let Some((p_dis, q_dis)) = lub_disrespect(p, q, t) else { continue };
            if p_dis && q_dis {
                toggle(&mut out, (pp, pq));
                continue;
            }
            if !q_dis {
                for r in annihilated_positions(t, order, q.a, &q.x, std::slice::from_ref(p)) {
                    if r != pq {
                        if order.base_rank[r] <= bq {
                            return Err(Error::Invariant(format!("rewrite of {p},{q} moved down")));
                        }
                        toggle(&mut pending, (bp, order.base_rank[r]));
                    }
                }
            } else {
                for r in annihilated_positions(t, order, p.a, &p.x, std::slice::from_ref(q)) {
                    if r != pp {
                        if order.base_rank[r] <= bp {
                            return Err(Error::Invariant(format!("rewrite of {p},{q} moved down")));
                        }
                        toggle(&mut pending, (order.base_rank[r], bq));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn toggle(set: &mut BTreeSet<(usize, usize)>, key: (usize, usize)) {
    if !set.remove(&key) {
        set.insert(key);
    }
}

/// Adds the monomial `{p, q}` keyed by base ranks, lower vertex first; pairs over a
/// single vertex vanish.
fn toggle_pair(set: &mut BTreeSet<(usize, usize)>, order: &ROrder, p: usize, q: usize) {
    let (cp, cq) = (&order.cells[p], &order.cells[q]);
    if cp.a == cq.a {
        return;
    }
    let (lo, hi, _) = ordered(cp, cq);
    let lo = order.base_rank[order.ri(lo).expect("cell in order")];
    let hi = order.base_rank[order.ri(hi).expect("cell in order")];
    toggle(set, (lo, hi));
}

/// The complex `K`: non-extraneous reduced 1-cells joined when they have an upper bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KComplex {
    pub vertices: Vec<ReducedOneCell>,
    pub edges: Vec<(usize, usize)>,
}

pub fn build_complex_k(t: &PlaneTree, n: usize) -> Result<KComplex> {
    let order = ROrder::new(t, n)?;
    let cells = &order.cells;
    let edges = par::flat_map_range(cells.len(), |i| {
        (i + 1..cells.len()).filter(|&j| upper_bound_exists(&cells[i], &cells[j], t)).map(|j| (i, j)).collect()
    });
    Ok(KComplex { vertices: order.cells.clone(), edges })
}

/// A relation of the cohomology ring: the coboundary support chain of a necessary form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Relation {
    pub form: String,
    pub necessary: ReducedOneCell,
    /// monomials as lists of `K` vertex indices
    pub chain: Vec<Vec<usize>>,
}

/// Coboundary support chains of every necessary 0-form and 1-form.
pub fn necessary_relations(t: &PlaneTree, n: usize) -> Result<Vec<Relation>> {
    let order = ROrder::new(t, n)?;
    let mut bases: Vec<(Vertex, Vec<usize>)> = order.cells.iter().map(|c| (c.a, c.x.clone())).collect();
    bases.sort();
    bases.dedup();
    let mut out = Vec::new();
    for (a, x) in &bases {
        let form = BasicForm::zero_form(*a, x.clone());
        if let Some(c) = is_necessary(t, &form)? {
            let chain = annihilated_positions(t, &order, *a, x, &[]).into_iter().map(|r| vec![r]).collect();
            out.push(Relation { form: form.to_string(), necessary: c, chain });
        }
    }
    let one_forms = par::flat_map_range(bases.len(), |i| {
        let (a, x) = &bases[i];
        order
            .cells
            .iter()
            .filter(|c1| c1.a != *a)
            .filter_map(|c1| {
                let form = BasicForm::one_form(*a, x.clone(), c1.clone());
                match is_necessary(t, &form) {
                    Ok(Some(c)) => {
                        let k = order.ri(c1).expect("factor in order");
                        let chain = annihilated_positions(t, &order, *a, x, std::slice::from_ref(c1))
                            .into_iter()
                            .map(|r| if r < k { vec![r, k] } else { vec![k, r] })
                            .collect();
                        Some(Ok(Relation { form: form.to_string(), necessary: c, chain }))
                    }
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                }
            })
            .collect::<Vec<_>>()
    });
    for r in one_forms {
        out.push(r?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::to_explicit;

    fn nth_in_direction(t: &PlaneTree, v: Vertex, dir: usize, k: usize) -> Vertex {
        let mut cur = t.neighbor(v, dir).unwrap();
        for _ in 1..k {
            cur = t.children(cur)[0];
        }
        cur
    }

    // Seven strands over three essential vertices a, b, c with b in direction 1 from a
    // and c in direction 2 from b; edges at b (direction 3) and at c (direction 1).
    #[test]
    fn counter_example_cell() {
        let t = PlaneTree::parse("(((()(()())())()))").unwrap().subdivide_for(7);
        let ess = t.essential_vertices();
        let (a, b, c) = (ess[0], ess[1], ess[2]);
        assert_eq!(t.direction(a, b), 1);
        assert_eq!(t.direction(b, c), 2);
        let edge_b = t.neighbor(b, 3).unwrap();
        let edge_c = t.neighbor(c, 1).unwrap();
        let vertices = vec![
            nth_in_direction(&t, a, 2, 1),
            nth_in_direction(&t, b, 1, 1),
            nth_in_direction(&t, b, 3, 2),
            nth_in_direction(&t, b, 2, 1),
            nth_in_direction(&t, c, 1, 2),
        ];
        let s = ExplicitCell::new(vertices, vec![edge_b, edge_c]);
        assert!(s.is_valid(&t));
        assert_eq!(count_d(&t, a, &s), vec![0, 6, 1]);
        assert_eq!(count_d(&t, b, &s), vec![1, 1, 3, 2]);
        assert_eq!(count_dbar(&t, b, &s), vec![2, 1, 3, 1]);
        assert_eq!(count_d(&t, c, &s), vec![5, 2, 0]);
        assert!(eval_form(&t, &BasicForm::zero_form(a, vec![0, 6, 1]), &s));
        let dc = ReducedOneCell::new(c, 1, vec![5, 2, 0]);
        assert!(eval_form(&t, &BasicForm::one_form(b, vec![2, 1, 3, 1], dc.clone()), &s));
        assert!(!eval_form(
            &t,
            &BasicForm::one_form(b, vec![2, 1, 3, 1], ReducedOneCell::new(c, 1, vec![4, 3, 0])),
            &s
        ));
        for v in 0..t.len() {
            assert_eq!(count_d(&t, v, &s).iter().sum::<usize>(), 7);
        }
    }

    #[test]
    fn differential_examples() {
        let t = PlaneTree::parse("((()()))").unwrap().subdivide_for(4);
        let leaf = (0..t.len()).find(|&v| v != 0 && t.degree(v) == 1).unwrap();
        assert!(differential_0form(&t, leaf, &[4]).is_empty());
        let a = t.essential_vertices()[0];
        let df = differential_0form(&t, a, &[0, 2, 2]);
        assert_eq!(df.len(), 2);
        let df = differential_0form(&t, a, &[1, 2, 1]);
        assert_eq!(df.len(), 4);
        for f in df.terms.iter().chain(differential_0form(&t, a, &[0, 3, 1]).terms.iter()) {
            assert!(differential(&t, f).is_empty());
        }
        let twice = differential_sum(&t, &differential_0form(&t, a, &[2, 1, 1]));
        assert!(twice.is_empty());
    }

    #[test]
    fn wedge_with_repeat_is_zero() {
        let c = ReducedOneCell::new(1, 2, vec![0, 3, 1]);
        let w = BasicForm::wedge(vec![c.clone(), c]);
        assert!(w.is_zero());
        let s: FormSum = [w].into_iter().collect();
        assert!(s.is_empty());
    }

    #[test]
    fn dc_detects_own_cell() {
        let t = PlaneTree::parse("((()(()())))").unwrap().subdivide_for(4);
        for c in enumerate_reduced_1cells(&t, 4).unwrap() {
            assert!(eval_dc(&t, &c, &to_explicit(&c, &t)));
        }
    }

    #[test]
    fn necessary_zero_forms() {
        let t = PlaneTree::parse("((()()))").unwrap().subdivide_for(4);
        let a = t.essential_vertices()[0];
        let c = is_necessary(&t, &BasicForm::zero_form(a, vec![1, 2, 1])).unwrap().unwrap();
        assert_eq!(c, ReducedOneCell::new(a, 1, vec![1, 2, 1]));
        assert!(!c.is_critical());
        // smallest nonzero direction is 2 but then x_1 = 0 is required; (a,2,[3,0,1]) is extraneous
        assert_eq!(is_necessary(&t, &BasicForm::zero_form(a, vec![3, 0, 1])).unwrap(), None);
    }

    #[test]
    fn annihilator_rules() {
        let t = PlaneTree::parse("(((()())()))").unwrap().subdivide_for(4);
        let ess = t.essential_vertices();
        let c1 = ReducedOneCell::new(ess[1], 2, vec![2, 1, 1]);
        let df = differential_0form(&t, ess[1], &[2, 1, 1]);
        let kept = annihilate(&t, std::slice::from_ref(&c1), &df);
        assert!(kept.is_empty(), "same vertex terms drop");
        assert_eq!(annihilate(&t, &[], &df), df);
    }

    #[test]
    fn exceptional_examples() {
        let c = ReducedOneCell::new(1, 2, vec![0, 2, 2, 1]);
        assert_eq!(classify_exceptional(&c, 5), Exceptional::TypeI);
        assert_eq!(corresponding_cell(&c, 5), Some(ReducedOneCell::new(1, 3, vec![0, 2, 2, 1])));
        assert_eq!(classify_exceptional(&ReducedOneCell::new(1, 3, vec![0, 2, 2, 1]), 5), Exceptional::TypeII);
        assert_eq!(classify_exceptional(&ReducedOneCell::new(1, 2, vec![1, 2, 2]), 5), Exceptional::TypeIII);
        assert_eq!(classify_exceptional(&ReducedOneCell::new(1, 2, vec![0, 2, 2]), 4), Exceptional::None);
    }

    #[test]
    fn gf2_matrix_ops() {
        let mut m = GF2Matrix::identity(70);
        m.set(69, 3, true);
        assert!(m.is_lower_triangular());
        assert!(m.is_invertible());
        let sq = m.mul(&m);
        assert_eq!(sq, GF2Matrix::identity(70));
        let mut z = GF2Matrix::identity(3);
        z.set_column(1, &[]);
        assert!(!z.is_invertible());
        let mut r = GF2Matrix::identity(4);
        r.mul_column_replacement(0, &[0, 2]);
        assert_eq!(r.column_support(0), vec![0, 2]);
        assert_eq!(r.dump_rows().lines().next(), Some("1000"));
    }

    #[test]
    fn radial_change_of_basis_is_trivial_on_critical_block() {
        let t = PlaneTree::parse("((()()()))").unwrap().subdivide_for(4);
        let cb = ChangeOfBasis::new(&t, 4).unwrap();
        for &c in &cb.order.critical {
            assert_eq!(cb.ms.column_support(c), vec![c]);
        }
        assert!(cb.ms.is_invertible());
    }
}
