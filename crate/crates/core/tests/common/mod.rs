//! Whole-pipeline checks shared by the integration and acceptance tests.
#![allow(dead_code)]

use rayon::prelude::*;
use treebraid::cells::{count_critical_cells, radial_rank};
use treebraid::delta::{
    build_delta, cub_table, detect_n, h_prime, hierarchy, m_cup_adjacent, neighborhood_structure_test,
    reconstruct_with_root, DeltaGraph, DetectedN,
};
use treebraid::forms::{classify_exceptional, corresponding_cell, ChangeOfBasis, Exceptional, McKind};
use treebraid::tree::{trees_homeomorphic, PlaneTree};

pub fn y(n: usize, x: usize) -> usize {
    radial_rank(n, x).unwrap() as usize
}

/// count_1 = Σ Y_n(deg a) and the refined per-direction CUB counts.
pub fn check_counting(raw: &PlaneTree, n: usize) -> Result<(), String> {
    let t = raw.subdivide_for(n);
    let (c1, _) = count_critical_cells(&t, n).map_err(|e| e.to_string())?;
    let expect: usize = t.essential_vertices().iter().map(|&a| y(n, t.degree(a))).sum();
    if c1 != expect {
        return Err(format!("count_1 {c1} != {expect}"));
    }
    let delta = build_delta(&t, n).map_err(|e| e.to_string())?;
    let cubs = cub_table(&delta, &t, n).map_err(|e| e.to_string())?;
    for (c, cub) in delta.cells.iter().zip(&cubs) {
        if let (Some(c), Some(cub)) = (c, cub) {
            if cub.cub_number < 2 || cub.cub_number > n - 2 {
                return Err(format!("CUB({c}) = {} out of range", cub.cub_number));
            }
        }
    }
    for a in t.essential_vertices() {
        for d in 0..t.num_directions(a) {
            // the refined count holds when d leads to another essential vertex
            let Some(end) = t.segment_end(a, d) else { continue };
            if !t.is_essential(end) {
                continue;
            }
            for k in 2..=n - 2 {
                let got = treebraid::delta::count_cub_at_least(&delta, &cubs, a, d, k);
                let want = y(n - k, t.degree(a));
                if got != want {
                    return Err(format!("vertex {a} dir {d} k {k}: {got} != {want}"));
                }
            }
        }
    }
    Ok(())
}

/// Edge count of Δ equals the number of critical 2-cells.
pub fn check_edge_count(raw: &PlaneTree, n: usize) -> Result<(), String> {
    let t = raw.subdivide_for(n);
    let (_, c2) = count_critical_cells(&t, n).map_err(|e| e.to_string())?;
    let delta = build_delta(&t, n).map_err(|e| e.to_string())?;
    if delta.edges.len() != c2 {
        return Err(format!("|E(Δ)| = {} but count_2 = {c2}", delta.edges.len()));
    }
    Ok(())
}

/// Reconstruction from every maximal root class gives back the tree.
pub fn check_round_trip(raw: &PlaneTree, n: usize) -> Result<(), String> {
    let t = raw.subdivide_for(n);
    let delta = build_delta(&t, n).map_err(|e| e.to_string())?;
    let h = hierarchy(&delta);
    let roots: Vec<Option<usize>> =
        if h.is_empty() { vec![None] } else { h.maximal.iter().copied().map(Some).collect() };
    for root in roots {
        let rebuilt = match root {
            Some(r) => reconstruct_with_root(&delta, &h, r, n),
            None => treebraid::delta::reconstruct_tree(&delta, n),
        }
        .map_err(|u| format!("root {root:?}: undefined: {u}"))?;
        if !trees_homeomorphic(&rebuilt, raw) {
            return Err(format!("root {root:?}: rebuilt {} not homeomorphic", rebuilt.canonical_form()));
        }
    }
    Ok(())
}

pub fn check_detect_n(raw: &PlaneTree, n: usize) -> Result<(), String> {
    let t = raw.subdivide_for(n);
    let delta = build_delta(&t, n).map_err(|e| e.to_string())?;
    let want = if n == 4 { DetectedN::Four } else { DetectedN::Five };
    let got = detect_n(&delta);
    if got != want {
        return Err(format!("detected {got}, expected {n}"));
    }
    Ok(())
}

/// Triangularity, invertibility, Type I/II identity and witness independence.
pub fn check_matrices(raw: &PlaneTree, n: usize) -> Result<(), String> {
    let t = raw.subdivide_for(n);
    let cb = ChangeOfBasis::new(&t, n).map_err(|e| e.to_string())?;
    let order = &cb.order;
    for pos in 0..order.len() {
        if cb.mc_columns[pos].first().is_some_and(|&r| r < pos) {
            return Err(format!("M_c for {} not lower triangular", order.cells[pos]));
        }
        if order.cells[pos].is_critical() && cb.ms.column_support(pos) != cb.mc_columns[pos] {
            return Err(format!("Ms dc != M_c dc for {}", order.cells[pos]));
        }
        let has_diag = cb.mc_columns[pos].first() == Some(&pos);
        let noncrit = cb.mc_kinds[pos] == McKind::Noncritical;
        if has_diag == noncrit {
            return Err(format!("diagonal of M_c wrong for {}", order.cells[pos]));
        }
    }
    if !cb.ms.is_lower_triangular() || !cb.mt.is_lower_triangular() || !cb.m.is_lower_triangular() {
        return Err("Ms, Mt or M not lower triangular".into());
    }
    if !cb.ms.is_invertible() {
        return Err("Ms not invertible".into());
    }
    for col in 0..order.len() {
        if cb.mt.column_support(col).iter().any(|&r| !order.cells[r].is_critical()) {
            return Err("Mt has a nonzero noncritical row".into());
        }
    }
    for &pos in &order.critical {
        let c = &order.cells[pos];
        if classify_exceptional(c, n) == Exceptional::TypeII {
            let partner = order.ri(&corresponding_cell(c, n).unwrap()).unwrap();
            let mut want = vec![pos, partner];
            want.sort_unstable();
            if cb.m_dc(pos) != want {
                return Err(format!("M dc2 != dc1 + dc2 for {c}"));
            }
        }
        if cb.m_dc(pos).iter().any(|&r| order.cells[r].a != c.a || r < pos) {
            return Err(format!("M dc for {c} leaves its vertex or moves down"));
        }
    }
    Ok(())
}

/// m_cup_adjacent ≡ neighborhood structure ≡ nonzero cup after change of basis.
pub fn check_cross(raw: &PlaneTree, n: usize) -> Result<usize, String> {
    let t = raw.subdivide_for(n);
    let cb = ChangeOfBasis::new(&t, n).map_err(|e| e.to_string())?;
    let delta: DeltaGraph = build_delta(&t, n).map_err(|e| e.to_string())?;
    let cubs = cub_table(&delta, &t, n).map_err(|e| e.to_string())?;
    let cells: Vec<_> = delta.cells.iter().map(|c| c.clone().unwrap()).collect();
    let pos: Vec<usize> = cells.iter().map(|c| cb.order.ri(c).unwrap()).collect();
    let m = cells.len();
    let failures: Vec<String> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (cells, cubs, cb, pos, t) = (&cells, &cubs, &cb, &pos, &t);
            (i + 1..m).filter_map(move |j| {
                let adj = m_cup_adjacent(&cells[i], &cells[j], t, n);
                let structural = match (&cubs[i], &cubs[j]) {
                    (Some(a), Some(b)) => neighborhood_structure_test(&cells[i], a, &cells[j], b, t, n),
                    _ => false,
                };
                let cup = match cb.cup_after_basis_change(pos[i], pos[j]) {
                    Ok(s) => !s.is_empty(),
                    Err(e) => return Some(e.to_string()),
                };
                (adj != structural || adj != cup)
                    .then(|| format!("{} {}: adjacent {adj} structural {structural} cup {cup}", cells[i], cells[j]))
            })
        })
        .collect();
    match failures.first() {
        None => Ok(m * (m.saturating_sub(1)) / 2),
        Some(f) => Err(format!("{} disagreements, first: {f}", failures.len())),
    }
}

/// H′ of the default root has `p1` plus the descendants of the root.
pub fn h_prime_size(raw: &PlaneTree, n: usize) -> usize {
    let t = raw.subdivide_for(n);
    let delta = build_delta(&t, n).unwrap();
    let h = hierarchy(&delta);
    h.root().map_or(0, |r| h_prime(&h, r).nodes.len() + 1)
}
