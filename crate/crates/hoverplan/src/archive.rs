//! Pareto machinery: dominance, fast non-dominated sorting, the rank-based
//! acceptance rule, NSGA-II crowding distance, and a bounded external archive
//! truncated by dynamic elimination-based crowding distance (DECD).

use rand::Rng;

use crate::objective::ObjectiveVector;
use crate::solution::SolutionVector;

/// Pareto dominance under minimization: `a` dominates `b` iff `a` is no worse
/// everywhere and strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let a = a.as_array();
    let b = b.as_array();
    let mut strict = false;
    for i in 0..3 {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            strict = true;
        }
    }
    strict
}

/// Fast non-dominated sorting. Returns the 1-based front index of every input
/// point: front 1 is nondominated, front 2 is nondominated after removing
/// front 1, and so on.
pub fn nondominated_sort(objs: &[ObjectiveVector]) -> Vec<usize> {
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut dom_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objs[i], &objs[j]) {
                dominated_by[i].push(j);
                dom_count[j] += 1;
            } else if dominates(&objs[j], &objs[i]) {
                dominated_by[j].push(i);
                dom_count[i] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dom_count[i] == 0).collect();
    let mut front = 1;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            rank[i] = front;
            for &j in &dominated_by[i] {
                dom_count[j] -= 1;
                if dom_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        current = next;
        front += 1;
    }
    rank
}

/// Rank-based acceptance: the candidate replaces the incumbent when it sits in
/// a strictly better front; on equal fronts a fair coin decides; otherwise the
/// incumbent stays. Returns true when the candidate is accepted.
pub fn nds_accept<R: Rng + ?Sized>(incumbent_rank: usize, candidate_rank: usize, rng: &mut R) -> bool {
    nds_accept_with(incumbent_rank, candidate_rank, || rng.random::<f64>())
}

/// Same rule with the tie-break draw injected, for forced-draw tests.
pub fn nds_accept_with(incumbent_rank: usize, candidate_rank: usize, draw: impl FnOnce() -> f64) -> bool {
    if candidate_rank < incumbent_rank {
        true
    } else if candidate_rank == incumbent_rank {
        draw() < 0.5
    } else {
        false
    }
}

/// NSGA-II crowding distance of a mutually nondominated front. Per objective,
/// boundary points get +inf and interior points accumulate the normalized gap
/// between their neighbors; degenerate objectives (zero span) contribute 0.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    if n == 0 {
        return Vec::new();
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut dist = vec![0.0f64; n];
    for obj in 0..3 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| front[a].as_array()[obj].total_cmp(&front[b].as_array()[obj]));
        let lo = front[order[0]].as_array()[obj];
        let hi = front[order[n - 1]].as_array()[obj];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let prev = front[order[w - 1]].as_array()[obj];
            let next = front[order[w + 1]].as_array()[obj];
            dist[order[w]] += (next - prev) / span;
        }
    }
    dist
}

/// One archive member.
#[derive(Debug, Clone)]
pub struct ArchiveEntry {
    pub solution: SolutionVector,
    pub objectives: ObjectiveVector,
    pub crowding: f64,
}

/// Record of one DECD removal, for instrumentation: which objective vector was
/// dropped and which surviving entry (index after the removal) had its
/// crowding distance recomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct DecdRemoval {
    pub removed: ObjectiveVector,
    pub neighbor_recomputed: Option<usize>,
}

/// Bounded set of mutually nondominated solutions.
#[derive(Debug, Clone)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
    capacity: usize,
}

impl Archive {
    pub fn new(capacity: usize) -> Archive {
        assert!(capacity >= 1, "archive capacity must be at least 1");
        Archive { entries: Vec::new(), capacity }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Change the capacity without touching the entries; a reduction takes
    /// effect on the next `update` or `truncate_traced` call.
    pub fn set_capacity(&mut self, capacity: usize) {
        assert!(capacity >= 1, "archive capacity must be at least 1");
        self.capacity = capacity;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.entries.iter().map(|e| e.objectives).collect()
    }

    /// Merge candidates into the archive: union with the current entries,
    /// penalty sentinels excluded, duplicate objective vectors deduplicated
    /// keeping the first, then the nondominated subset is kept, crowding is
    /// recomputed, and DECD truncation enforces the capacity.
    pub fn update(&mut self, candidates: &[(SolutionVector, ObjectiveVector)]) {
        let mut pool: Vec<(SolutionVector, ObjectiveVector)> = Vec::with_capacity(self.entries.len() + candidates.len());
        for e in self.entries.drain(..) {
            pool.push((e.solution, e.objectives));
        }
        for (x, f) in candidates {
            if f.is_penalty() {
                continue;
            }
            pool.push((x.clone(), *f));
        }
        if pool.is_empty() {
            return;
        }
        // Dedupe identical objective vectors, keeping the earliest.
        let mut kept: Vec<(SolutionVector, ObjectiveVector)> = Vec::with_capacity(pool.len());
        for (x, f) in pool {
            if !kept.iter().any(|(_, g)| *g == f) {
                kept.push((x, f));
            }
        }
        let objs: Vec<ObjectiveVector> = kept.iter().map(|(_, f)| *f).collect();
        let ranks = nondominated_sort(&objs);
        let front: Vec<(SolutionVector, ObjectiveVector)> = kept
            .into_iter()
            .zip(&ranks)
            .filter_map(|(pair, &r)| (r == 1).then_some(pair))
            .collect();
        let front_objs: Vec<ObjectiveVector> = front.iter().map(|(_, f)| *f).collect();
        let crowding = crowding_distance(&front_objs);
        self.entries = front
            .into_iter()
            .zip(crowding)
            .map(|((solution, objectives), crowding)| ArchiveEntry { solution, objectives, crowding })
            .collect();
        self.truncate_traced();
    }

    /// DECD truncation: while over capacity, drop the entry with the smallest
    /// crowding distance (ties to the lowest index) and recompute the distance
    /// of only its nearest neighbor in min-max-normalized objective space.
    /// Returns one removal record per dropped entry.
    pub fn truncate_traced(&mut self) -> Vec<DecdRemoval> {
        let mut removals = Vec::new();
        while self.entries.len() > self.capacity {
            let worst = self
                .entries
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.crowding.total_cmp(&b.crowding))
                .map(|(i, _)| i)
                .expect("archive over capacity implies nonempty");
            let neighbor = self.nearest_neighbor(worst);
            let removed = self.entries.remove(worst);
            // Map the pre-removal neighbor index into the shrunken vector.
            let neighbor_after = neighbor.map(|j| if j > worst { j - 1 } else { j });
            if let Some(j) = neighbor_after {
                self.entries[j].crowding = self.crowding_of(j);
            }
            removals.push(DecdRemoval { removed: removed.objectives, neighbor_recomputed: neighbor_after });
        }
        removals
    }

    /// Nearest neighbor of entry `idx` by Euclidean distance in per-objective
    /// min-max normalized space (the normalization spans the current entries);
    /// ties go to the lowest index. None when `idx` is the only entry.
    fn nearest_neighbor(&self, idx: usize) -> Option<usize> {
        let n = self.entries.len();
        if n < 2 {
            return None;
        }
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for e in &self.entries {
            let f = e.objectives.as_array();
            for d in 0..3 {
                lo[d] = lo[d].min(f[d]);
                hi[d] = hi[d].max(f[d]);
            }
        }
        let span: Vec<f64> = (0..3).map(|d| if hi[d] > lo[d] { hi[d] - lo[d] } else { 1.0 }).collect();
        let target = self.entries[idx].objectives.as_array();
        let mut best: Option<(usize, f64)> = None;
        for (j, e) in self.entries.iter().enumerate() {
            if j == idx {
                continue;
            }
            let f = e.objectives.as_array();
            let d2: f64 = (0..3).map(|d| ((f[d] - target[d]) / span[d]).powi(2)).sum();
            let better = match best {
                None => true,
                Some((_, bd)) => d2 < bd,
            };
            if better {
                best = Some((j, d2));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Fresh NSGA-II crowding distance of entry `j` against the current entries.
    fn crowding_of(&self, j: usize) -> f64 {
        let objs = self.objectives();
        crowding_distance(&objs)[j]
    }
}
