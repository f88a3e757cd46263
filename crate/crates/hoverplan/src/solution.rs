//! Mixed continuous–permutation solution encoding and its geometry.
//!
//! A candidate plan is X = [hover_x, hover_y, visit_seq, speeds, powers]:
//! `U` hover coordinates, a permutation of 1..U giving the visit order, `U`
//! leg speeds, and `K` device transmit powers — 4U + K dimensions in total.
//! Continuous genes live in per-component boxes; the permutation is kept
//! closed under swap moves, so no repair beyond projection is ever needed.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::energy::Segment;
use crate::error::{Error, Result};
use crate::scenario::{Area, Device, Scenario};

/// Grid partition of the field into `cols` x `rows` equal rectangles, one
/// hovering point per cell. Cells are numbered row-major from 1, starting at
/// the (x_min, y_min) corner.
#[derive(Debug, Clone, PartialEq)]
pub struct SubareaPartition {
    pub cols: usize,
    pub rows: usize,
    /// 1-based cell index per device, in device-list order.
    pub cell_of_device: Vec<usize>,
    /// Device indices (positions in the scenario device list) per cell;
    /// `devices_in_cell[u-1]` lists the members of cell u.
    pub devices_in_cell: Vec<Vec<usize>>,
}

/// Cell index (1-based) of a point under the boundary rule: points exactly on
/// an interior gridline belong to the lower-index cell.
pub fn cell_of_point(area: &Area, cols: usize, rows: usize, p: [f64; 2]) -> usize {
    let step = |v: f64, lo: f64, width: f64, n: usize| -> usize {
        let idx = ((v - lo) / width * n as f64).ceil() as isize - 1;
        idx.clamp(0, n as isize - 1) as usize
    };
    let col = step(p[0], area.x_min, area.width(), cols);
    let row = step(p[1], area.y_min, area.height(), rows);
    row * cols + col + 1
}

/// Assign every device to the grid cell containing it.
pub fn partition_devices(area: &Area, devices: &[Device], cols: usize, rows: usize) -> Result<SubareaPartition> {
    if cols == 0 || rows == 0 {
        return Err(Error::invalid("grid", format!("grid must be at least 1x1, got {cols}x{rows}")));
    }
    let num_cells = cols * rows;
    let mut cell_of_device = Vec::with_capacity(devices.len());
    let mut devices_in_cell = vec![Vec::new(); num_cells];
    for (i, d) in devices.iter().enumerate() {
        if !area.contains(d.pos) {
            return Err(Error::invalid("devices", format!("device {} at {:?} lies outside the area", d.id, d.pos)));
        }
        let cell = cell_of_point(area, cols, rows, d.pos);
        cell_of_device.push(cell);
        devices_in_cell[cell - 1].push(i);
    }
    Ok(SubareaPartition { cols, rows, cell_of_device, devices_in_cell })
}

/// Default grid factorization of `u` hovering points: the divisor pair
/// cols >= rows closest to square (6 -> 3x2, 8 -> 4x2, primes -> u x 1).
pub fn default_grid(u: usize) -> (usize, usize) {
    assert!(u >= 1);
    let mut rows = (u as f64).sqrt().floor() as usize;
    while rows > 1 && u % rows != 0 {
        rows -= 1;
    }
    (u / rows.max(1), rows.max(1))
}

/// One candidate plan.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionVector {
    pub hover_x: Vec<f64>,
    pub hover_y: Vec<f64>,
    /// Visit order: a permutation of 1..=U over hover indices.
    pub visit_seq: Vec<usize>,
    pub speeds: Vec<f64>,
    pub powers: Vec<f64>,
}

impl SolutionVector {
    pub fn num_hovers(&self) -> usize {
        self.hover_x.len()
    }

    pub fn num_devices(&self) -> usize {
        self.powers.len()
    }

    /// Total encoded dimension 4U + K.
    pub fn dim(&self) -> usize {
        4 * self.num_hovers() + self.num_devices()
    }

    /// Number of continuous genes (3U + K): hover_x | hover_y | speeds | powers.
    pub fn continuous_dim(&self) -> usize {
        3 * self.num_hovers() + self.num_devices()
    }

    /// Read continuous gene `i` in the flat hover_x | hover_y | speeds | powers layout.
    pub fn continuous_gene(&self, i: usize) -> f64 {
        let u = self.num_hovers();
        match i {
            _ if i < u => self.hover_x[i],
            _ if i < 2 * u => self.hover_y[i - u],
            _ if i < 3 * u => self.speeds[i - 2 * u],
            _ => self.powers[i - 3 * u],
        }
    }

    /// Write continuous gene `i` in the flat layout.
    pub fn set_continuous_gene(&mut self, i: usize, value: f64) {
        let u = self.num_hovers();
        match i {
            _ if i < u => self.hover_x[i] = value,
            _ if i < 2 * u => self.hover_y[i - u] = value,
            _ if i < 3 * u => self.speeds[i - 2 * u] = value,
            _ => self.powers[i - 3 * u] = value,
        }
    }
}

/// Per-component boxes for the continuous genes, plus the encoding shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub hover_x: [f64; 2],
    pub hover_y: [f64; 2],
    pub speed: [f64; 2],
    pub power: [f64; 2],
    pub num_hovers: usize,
    pub num_devices: usize,
}

impl Bounds {
    pub fn from_scenario(scn: &Scenario) -> Bounds {
        Bounds {
            hover_x: [scn.area.x_min, scn.area.x_max],
            hover_y: [scn.area.y_min, scn.area.y_max],
            speed: scn.speed_bounds,
            power: scn.power_bounds,
            num_hovers: scn.num_hovers,
            num_devices: scn.devices.len(),
        }
    }

    pub fn continuous_dim(&self) -> usize {
        3 * self.num_hovers + self.num_devices
    }

    /// [lower, upper] box of continuous gene `i` in the flat layout.
    pub fn gene_bounds(&self, i: usize) -> [f64; 2] {
        let u = self.num_hovers;
        match i {
            _ if i < u => self.hover_x,
            _ if i < 2 * u => self.hover_y,
            _ if i < 3 * u => self.speed,
            _ => self.power,
        }
    }
}

/// One violated constraint, with the offending index and value.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Hover x outside the field (constraint on the UAV movement area).
    HoverX { index: usize, value: f64 },
    /// Hover y outside the field.
    HoverY { index: usize, value: f64 },
    /// Transmit power outside [P_min, P_max].
    Power { index: usize, value: f64 },
    /// Speed outside [V_min, V_max].
    Speed { index: usize, value: f64 },
    /// visit_seq holds a duplicate value; 1-based positions of the pair.
    VisitDuplicate { positions: (usize, usize) },
    /// visit_seq entry outside 1..=U; 1-based position.
    VisitOutOfRange { position: usize, value: usize },
    /// Component lengths disagree with the U/K shape of the bounds.
    Shape { detail: String },
}

/// Check every box constraint and the permutation property; empty = valid.
pub fn validate(x: &SolutionVector, b: &Bounds) -> Vec<Violation> {
    let mut v = Vec::new();
    let (u, k) = (b.num_hovers, b.num_devices);
    if x.hover_x.len() != u || x.hover_y.len() != u || x.visit_seq.len() != u || x.speeds.len() != u || x.powers.len() != k {
        v.push(Violation::Shape {
            detail: format!(
                "expected U={u}, K={k}; got hover_x {}, hover_y {}, visit_seq {}, speeds {}, powers {}",
                x.hover_x.len(),
                x.hover_y.len(),
                x.visit_seq.len(),
                x.speeds.len(),
                x.powers.len()
            ),
        });
        return v;
    }
    let in_box = |val: f64, box_: [f64; 2]| val >= box_[0] && val <= box_[1] && val.is_finite();
    for (i, &val) in x.hover_x.iter().enumerate() {
        if !in_box(val, b.hover_x) {
            v.push(Violation::HoverX { index: i, value: val });
        }
    }
    for (i, &val) in x.hover_y.iter().enumerate() {
        if !in_box(val, b.hover_y) {
            v.push(Violation::HoverY { index: i, value: val });
        }
    }
    for (i, &val) in x.speeds.iter().enumerate() {
        if !in_box(val, b.speed) {
            v.push(Violation::Speed { index: i, value: val });
        }
    }
    for (i, &val) in x.powers.iter().enumerate() {
        if !in_box(val, b.power) {
            v.push(Violation::Power { index: i, value: val });
        }
    }
    let mut first_pos = vec![0usize; u + 1]; // 0 = unseen; else 1-based position
    for (pos0, &val) in x.visit_seq.iter().enumerate() {
        let pos = pos0 + 1;
        if val < 1 || val > u {
            v.push(Violation::VisitOutOfRange { position: pos, value: val });
        } else if first_pos[val] != 0 {
            v.push(Violation::VisitDuplicate { positions: (first_pos[val], pos) });
        } else {
            first_pos[val] = pos;
        }
    }
    v
}

pub fn is_valid(x: &SolutionVector, b: &Bounds) -> bool {
    validate(x, b).is_empty()
}

/// Project every continuous gene onto its box; the permutation is untouched.
/// Idempotent.
pub fn clamp(x: &mut SolutionVector, b: &Bounds) {
    let clamp_vec = |vals: &mut [f64], box_: [f64; 2]| {
        for v in vals {
            *v = v.clamp(box_[0], box_[1]);
        }
    };
    clamp_vec(&mut x.hover_x, b.hover_x);
    clamp_vec(&mut x.hover_y, b.hover_y);
    clamp_vec(&mut x.speeds, b.speed);
    clamp_vec(&mut x.powers, b.power);
}

/// The U+1 legs of the flight start -> hover_{sigma(1)} -> ... -> hover_{sigma(U)} -> end.
///
/// speeds[u-1] is flown on the leg arriving at the u-th visited hover; the
/// final hover -> end leg reuses the last speed.
pub fn path_segments(x: &SolutionVector, scn: &Scenario) -> Vec<Segment> {
    let pts = trajectory_polyline(x, scn);
    let u = x.num_hovers();
    let mut segs = Vec::with_capacity(u + 1);
    for i in 0..=u {
        let (a, b) = (pts[i], pts[i + 1]);
        let length_m = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        let speed_mps = x.speeds[i.min(u - 1)];
        segs.push(Segment { length_m, speed_mps });
    }
    segs
}

/// Vertices of the flight path: start, the hovers in visit order, end (U+2 points).
pub fn trajectory_polyline(x: &SolutionVector, scn: &Scenario) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(x.num_hovers() + 2);
    pts.push(scn.start_pos);
    for &h in &x.visit_seq {
        pts.push([x.hover_x[h - 1], x.hover_y[h - 1]]);
    }
    pts.push(scn.end_pos);
    pts
}

/// Uniformly random valid solution: continuous genes uniform in their boxes,
/// visit order a uniformly random permutation.
pub fn random_solution<R: Rng>(b: &Bounds, rng: &mut R) -> SolutionVector {
    let (u, k) = (b.num_hovers, b.num_devices);
    let draw = |rng: &mut R, box_: [f64; 2], n: usize| -> Vec<f64> {
        (0..n).map(|_| rng.random_range(box_[0]..=box_[1])).collect()
    };
    let hover_x = draw(rng, b.hover_x, u);
    let hover_y = draw(rng, b.hover_y, u);
    let speeds = draw(rng, b.speed, u);
    let powers = draw(rng, b.power, k);
    let mut visit_seq: Vec<usize> = (1..=u).collect();
    visit_seq.shuffle(rng);
    SolutionVector { hover_x, hover_y, visit_seq, speeds, powers }
}

/// Even discretization of every continuous gene, used to restrict the search
/// to a finite set that an exhaustive enumerator can also cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Grid points per continuous variable (>= 1; 1 means the box midpoint).
    pub points_per_var: usize,
    /// Refusal threshold for exhaustive enumeration.
    pub max_evaluations: u64,
}

impl GridSpec {
    pub fn new(points_per_var: usize) -> GridSpec {
        assert!(points_per_var >= 1);
        GridSpec { points_per_var, max_evaluations: 10_000_000 }
    }

    /// The grid values of one box: evenly spaced including both endpoints.
    pub fn axis_values(&self, box_: [f64; 2]) -> Vec<f64> {
        let n = self.points_per_var;
        if n == 1 {
            return vec![0.5 * (box_[0] + box_[1])];
        }
        (0..n).map(|i| box_[0] + (box_[1] - box_[0]) * i as f64 / (n - 1) as f64).collect()
    }

    /// Snap every continuous gene of `x` to its nearest grid value.
    pub fn snap(&self, x: &mut SolutionVector, b: &Bounds) {
        for i in 0..b.continuous_dim() {
            let box_ = b.gene_bounds(i);
            let n = self.points_per_var;
            let snapped = if n == 1 {
                0.5 * (box_[0] + box_[1])
            } else {
                let step = (box_[1] - box_[0]) / (n - 1) as f64;
                let idx = ((x.continuous_gene(i) - box_[0]) / step).round().clamp(0.0, (n - 1) as f64);
                box_[0] + step * idx
            };
            x.set_continuous_gene(i, snapped);
        }
    }
}
