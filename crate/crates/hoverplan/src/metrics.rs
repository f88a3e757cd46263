//! Quality indicators and desk-scale ground truth: exact 3-objective
//! hypervolume, per-objective extremes, knee-point selection, and an
//! exhaustive enumeration oracle for tiny discretized instances.

use crate::archive::dominates;
use crate::error::{Error, Result};
use crate::objective::{evaluate_objectives, ObjectiveVector};
use crate::scenario::Scenario;
use crate::solution::{Bounds, GridSpec, SolutionVector};

/// Reference point in (-f1, f2, f3) space, componentwise worse than every
/// point of the fronts it measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypervolumeRef(pub [f64; 3]);

/// Componentwise max over all finite points, pushed 10% further from the
/// origin per axis (a fixed 1e-9 when the max sits exactly at 0), so that
/// every measured point strictly dominates the reference.
pub fn reference_point(objs: &[ObjectiveVector]) -> Result<HypervolumeRef> {
    let mut hi = [f64::NEG_INFINITY; 3];
    let mut any = false;
    for o in objs {
        if o.is_penalty() {
            continue;
        }
        any = true;
        let f = o.as_array();
        for d in 0..3 {
            hi[d] = hi[d].max(f[d]);
        }
    }
    if !any {
        return Err(Error::EmptyArchive);
    }
    let mut r = [0.0; 3];
    for d in 0..3 {
        let margin = if hi[d] == 0.0 { 1e-9 } else { 0.1 * hi[d].abs() };
        r[d] = hi[d] + margin;
    }
    Ok(HypervolumeRef(r))
}

/// Exact hypervolume of the region between the front and the reference point.
/// Every point must dominate the reference; dominated or duplicate points in
/// the input change nothing (the union of their boxes is measured).
pub fn hypervolume(front: &[ObjectiveVector], reference: &HypervolumeRef) -> Result<f64> {
    let r = reference.0;
    let mut pts = Vec::with_capacity(front.len());
    for o in front {
        let p = o.as_array();
        let ok = !o.is_penalty() && (0..3).all(|d| p[d] <= r[d]) && (0..3).any(|d| p[d] < r[d]);
        if !ok {
            return Err(Error::BadReference { point: p, reference: r });
        }
        pts.push(p);
    }
    Ok(union_volume(&pts, r))
}

/// Hypervolume with out-of-box points clipped away instead of rejected:
/// penalty points and points that do not strictly dominate the reference
/// contribute zero volume. Total, for per-iteration traces.
pub fn hypervolume_clipped(front: &[ObjectiveVector], reference: &HypervolumeRef) -> f64 {
    let r = reference.0;
    let pts: Vec<[f64; 3]> = front
        .iter()
        .filter(|o| !o.is_penalty())
        .map(|o| o.as_array())
        .filter(|p| (0..3).all(|d| p[d] < r[d]))
        .collect();
    union_volume(&pts, r)
}

/// Volume of the union of boxes [p, r] by sweeping f3 slabs, each weighted by
/// the 2D staircase area of the points active in the slab.
fn union_volume(pts: &[[f64; 3]], r: [f64; 3]) -> f64 {
    if pts.is_empty() {
        return 0.0;
    }
    let mut levels: Vec<f64> = pts.iter().map(|p| p[2]).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut volume = 0.0;
    for (t, &z) in levels.iter().enumerate() {
        let next_z = levels.get(t + 1).copied().unwrap_or(r[2]);
        if next_z <= z {
            continue;
        }
        let active: Vec<[f64; 2]> = pts.iter().filter(|p| p[2] <= z).map(|p| [p[0], p[1]]).collect();
        volume += staircase_area(active, r[0], r[1]) * (next_z - z);
    }
    volume
}

/// Area of the union of rectangles [p1, r1] x [p2, r2].
fn staircase_area(mut pts: Vec<[f64; 2]>, r1: f64, r2: f64) -> f64 {
    // Keep the 2D-nondominated subset: sort by f1 then f2, sweep keeping the
    // points whose f2 strictly improves on everything to their left.
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut stair: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for p in pts {
        if stair.last().is_none_or(|q| p[1] < q[1]) {
            stair.push(p);
        }
    }
    let mut area = 0.0;
    for (i, p) in stair.iter().enumerate() {
        let next_x = stair.get(i + 1).map_or(r1, |q| q[0]);
        area += (next_x - p[0]) * (r2 - p[1]);
    }
    area
}

/// Componentwise extremes over a set of objective vectors, with the rate
/// reported positive: (max rate in bps, min device energy, min flight energy).
pub fn best_per_objective(objs: &[ObjectiveVector]) -> Result<(f64, f64, f64)> {
    let mut best_rate = f64::NEG_INFINITY;
    let mut best_dev = f64::INFINITY;
    let mut best_uav = f64::INFINITY;
    let mut any = false;
    for o in objs {
        if o.is_penalty() {
            continue;
        }
        any = true;
        best_rate = best_rate.max(o.min_rate_bps());
        best_dev = best_dev.min(o.device_energy_j);
        best_uav = best_uav.min(o.uav_energy_j);
    }
    if !any {
        return Err(Error::EmptyArchive);
    }
    Ok((best_rate, best_dev, best_uav))
}

/// Index of the knee point: the entry closest (normalized Euclidean) to the
/// per-objective ideal of the set. Degenerate objectives (zero span) are
/// skipped; ties go to the lowest index. None when no finite entry exists.
pub fn knee_index(objs: &[ObjectiveVector]) -> Option<usize> {
    let finite: Vec<(usize, [f64; 3])> =
        objs.iter().enumerate().filter(|(_, o)| !o.is_penalty()).map(|(i, o)| (i, o.as_array())).collect();
    if finite.is_empty() {
        return None;
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for (_, f) in &finite {
        for d in 0..3 {
            lo[d] = lo[d].min(f[d]);
            hi[d] = hi[d].max(f[d]);
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, f) in &finite {
        let mut d2 = 0.0;
        for d in 0..3 {
            let span = hi[d] - lo[d];
            if span > 0.0 {
                d2 += ((f[d] - lo[d]) / span).powi(2);
            }
        }
        if best.is_none_or(|(_, bd)| d2 < bd) {
            best = Some((*i, d2));
        }
    }
    best.map(|(i, _)| i)
}

/// Exhaustively evaluate every grid combination of the continuous genes times
/// every visit permutation and return the nondominated objective vectors,
/// sorted lexicographically. Refuses instances whose combination count
/// exceeds the grid's evaluation cap.
pub fn brute_force_front(scn: &Scenario, grid: &GridSpec) -> Result<Vec<ObjectiveVector>> {
    let b = Bounds::from_scenario(scn);
    let dim = b.continuous_dim();
    let u = b.num_hovers;
    let perms = permutations(u);
    let combos = (grid.points_per_var as u128)
        .checked_pow(dim as u32)
        .and_then(|c| c.checked_mul(perms.len() as u128))
        .unwrap_or(u128::MAX);
    if combos > grid.max_evaluations as u128 {
        return Err(Error::EnumerationCap { combinations: combos, cap: grid.max_evaluations });
    }
    let axes: Vec<Vec<f64>> = (0..dim).map(|i| grid.axis_values(b.gene_bounds(i))).collect();
    let mut front: Vec<ObjectiveVector> = Vec::new();
    let mut counters = vec![0usize; dim];
    loop {
        let mut x = SolutionVector {
            hover_x: vec![0.0; u],
            hover_y: vec![0.0; u],
            visit_seq: (1..=u).collect(),
            speeds: vec![0.0; u],
            powers: vec![0.0; b.num_devices],
        };
        for (i, &c) in counters.iter().enumerate() {
            x.set_continuous_gene(i, axes[i][c]);
        }
        for perm in &perms {
            x.visit_seq.clone_from(perm);
            let f = evaluate_objectives(scn, &x);
            if !f.is_penalty() {
                insert_nondominated(&mut front, f);
            }
        }
        // Odometer increment over the grid axes.
        let mut i = 0;
        loop {
            if i == dim {
                front.sort_by(|a, b| {
                    let (a, b) = (a.as_array(), b.as_array());
                    a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])).then(a[2].total_cmp(&b[2]))
                });
                return Ok(front);
            }
            counters[i] += 1;
            if counters[i] < axes[i].len() {
                break;
            }
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Keep `front` the nondominated, duplicate-free subset of everything seen.
fn insert_nondominated(front: &mut Vec<ObjectiveVector>, f: ObjectiveVector) {
    if front.iter().any(|g| g == &f || dominates(g, &f)) {
        return;
    }
    front.retain(|g| !dominates(&f, g));
    front.push(f);
}

/// All permutations of 1..=u in lexicographic order.
fn permutations(u: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(u);
    let mut used = vec![false; u + 1];
    fn rec(u: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == u {
            out.push(cur.clone());
            return;
        }
        for v in 1..=u {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(u, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(u, &mut cur, &mut used, &mut out);
    out
}
