//! Population loop of the hummingbird search: visit-table memory, flight
//! masks, guided/territorial foraging with rank-based acceptance, periodic
//! migration, and external-archive maintenance. Runs the baseline algorithm
//! and the improved variant (chaotic initialization + Cauchy perturbation)
//! from one code path so the two differ only where the operators differ.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::archive::{crowding_distance, nds_accept, nondominated_sort, Archive};
use crate::error::Result;
use crate::metrics::{best_per_objective, hypervolume_clipped, reference_point, HypervolumeRef};
use crate::objective::{evaluate_objectives, ObjectiveVector};
use crate::operators::{
    cauchy_mutate, discrete_mutation, hybrid_init, CauchyParams, Component, TentChain, TentParams,
};
use crate::scenario::Scenario;
use crate::solution::{clamp, random_solution, Bounds, GridSpec, SolutionVector};

/// Which algorithm variant the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Conventional multi-objective hummingbird search.
    Baseline,
    /// Improved variant: chaotic-map initialization and Cauchy perturbation
    /// after guided foraging.
    Improved,
}

/// Full algorithm configuration with every default resolved.
#[derive(Debug, Clone)]
pub struct AlgoConfig {
    pub mode: Mode,
    pub pop_size: usize,
    pub max_iters: usize,
    /// External archive capacity; conventionally the population size.
    pub archive_cap: usize,
    /// Probability of the guided (vs territorial) foraging branch.
    pub guided_prob: f64,
    /// Probability of Cauchy perturbation after a guided move (improved mode).
    pub cauchy_prob: f64,
    pub cauchy: CauchyParams,
    pub tent: TentParams,
    /// Iterations between migration events; conventionally 2·pop_size.
    pub migration_period: usize,
    /// Chaotic-chain initialization instead of uniform sampling.
    pub hybrid_init: bool,
    /// When set, every candidate is snapped onto this grid, restricting the
    /// search to the same finite space an exhaustive enumerator covers.
    pub grid: Option<GridSpec>,
    pub seed: u64,
}

impl AlgoConfig {
    /// Conventional defaults for the given variant.
    pub fn new(mode: Mode, seed: u64) -> AlgoConfig {
        let pop_size = 50;
        AlgoConfig {
            mode,
            pop_size,
            max_iters: 200,
            archive_cap: pop_size,
            guided_prob: 0.5,
            cauchy_prob: 0.2,
            cauchy: CauchyParams::default(),
            tent: TentParams::default(),
            migration_period: 2 * pop_size,
            hybrid_init: mode == Mode::Improved,
            grid: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        use crate::error::Error;
        if self.pop_size < 2 {
            return Err(Error::invalid("pop_size", format!("population needs at least 2 members, got {}", self.pop_size)));
        }
        if self.max_iters < 1 {
            return Err(Error::invalid("max_iters", "need at least one iteration"));
        }
        if self.archive_cap < 1 {
            return Err(Error::invalid("archive_cap", "capacity must be at least 1"));
        }
        if self.migration_period < 1 {
            return Err(Error::invalid("migration_period", "period must be at least 1 iteration"));
        }
        for (name, p) in [("guided_prob", self.guided_prob), ("cauchy_prob", self.cauchy_prob)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(name, format!("probability must lie in [0,1], got {p}")));
            }
        }
        if !self.tent.validate() {
            return Err(Error::invalid("tent", format!("tent parameters out of range: {:?}", self.tent)));
        }
        if !(self.cauchy.e_pos_scale >= 0.0 && self.cauchy.e_speed > 0.0) {
            return Err(Error::invalid("cauchy", format!("perturbation scales out of range: {:?}", self.cauchy)));
        }
        Ok(())
    }
}

/// One population member.
#[derive(Debug, Clone)]
pub struct Hummingbird {
    pub solution: SolutionVector,
    pub objectives: ObjectiveVector,
    /// Front index from the most recent population sort (1 = nondominated).
    pub rank: usize,
}

/// Staleness memory: entry (i, j) counts how long bird i has not visited food
/// source j. The diagonal is never read.
#[derive(Debug, Clone)]
pub struct VisitTable {
    n: usize,
    v: Vec<u64>,
}

impl VisitTable {
    pub fn new(n: usize) -> VisitTable {
        VisitTable { n, v: vec![0; n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.v[i * self.n + j]
    }

    /// Bird i visited source `target`: the whole row ages, the visited entry
    /// resets to zero.
    pub fn mark_visit(&mut self, i: usize, target: usize) {
        self.mark_stay(i);
        self.v[i * self.n + target] = 0;
    }

    /// Bird i foraged without visiting anyone: its row ages by one.
    pub fn mark_stay(&mut self, i: usize) {
        for j in 0..self.n {
            if j != i {
                self.v[i * self.n + j] += 1;
            }
        }
    }

    /// Source j was replaced by a new solution: every other bird now finds it
    /// maximally interesting (its own row maximum plus one).
    pub fn mark_replaced(&mut self, j: usize) {
        for l in 0..self.n {
            if l == j {
                continue;
            }
            let row_max = (0..self.n).filter(|&m| m != l).map(|m| self.v[l * self.n + m]).max().unwrap_or(0);
            self.v[l * self.n + j] = row_max + 1;
        }
    }

    /// Guided-foraging target for bird i: the stalest source, ties broken by
    /// the best front rank, then by the lowest index.
    pub fn select_target(&self, i: usize, ranks: &[usize]) -> usize {
        let mut best: Option<(usize, u64)> = None;
        for j in 0..self.n {
            if j == i {
                continue;
            }
            let s = self.get(i, j);
            let better = match best {
                None => true,
                Some((bj, bs)) => s > bs || (s == bs && ranks[j] < ranks[bj]),
            };
            if better {
                best = Some((j, s));
            }
        }
        best.expect("population has at least 2 members").0
    }
}

/// Counts of the stochastic events of one run, for instrumentation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub guided: u64,
    pub territorial: u64,
    pub cauchy: u64,
    pub migrations: u64,
    pub accepted: u64,
    /// Accepted candidates whose combined front rank was strictly worse than
    /// the incumbent's. The acceptance rule makes this impossible; the counter
    /// exists so tests can assert it stays zero.
    pub rank_regressions: u64,
}

/// One per-iteration trace record over the archive.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub iter: usize,
    pub hypervolume: f64,
    pub best_rate_bps: f64,
    pub best_device_energy_j: f64,
    pub best_uav_energy_j: f64,
}

/// Everything a finished run hands to the harness.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub archive: Archive,
    pub trace: Vec<TraceEntry>,
    /// The run-fixed reference point the trace hypervolumes were clipped to,
    /// derived from the initial population.
    pub trace_ref: HypervolumeRef,
    pub counters: OpCounters,
}

/// The optimizer state machine. `new` builds and evaluates the initial
/// population; each `step` advances one iteration.
pub struct Engine<'a> {
    scn: &'a Scenario,
    cfg: AlgoConfig,
    bounds: Bounds,
    rng: ChaCha8Rng,
    pop: Vec<Hummingbird>,
    visit: VisitTable,
    archive: Archive,
    trace: Vec<TraceEntry>,
    trace_ref: HypervolumeRef,
    counters: OpCounters,
    iter: usize,
}

/// What one bird did during candidate construction, applied to the visit
/// table after acceptance.
#[derive(Clone, Copy)]
enum ForageKind {
    Guided { target: usize },
    Territorial,
}

impl<'a> Engine<'a> {
    pub fn new(scn: &'a Scenario, cfg: AlgoConfig) -> Result<Engine<'a>> {
        cfg.validate()?;
        let bounds = Bounds::from_scenario(scn);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut pop = Vec::with_capacity(cfg.pop_size);
        let mut chain = TentChain::new(cfg.tent);
        for _ in 0..cfg.pop_size {
            let mut x = if cfg.hybrid_init {
                hybrid_init(&bounds, &mut chain, &mut rng)
            } else {
                random_solution(&bounds, &mut rng)
            };
            if let Some(g) = &cfg.grid {
                g.snap(&mut x, &bounds);
            }
            let objectives = evaluate_objectives(scn, &x);
            pop.push(Hummingbird { solution: x, objectives, rank: 0 });
        }
        let objs: Vec<ObjectiveVector> = pop.iter().map(|b| b.objectives).collect();
        let ranks = nondominated_sort(&objs);
        for (b, r) in pop.iter_mut().zip(&ranks) {
            b.rank = *r;
        }
        let trace_ref = reference_point(&objs)?;
        let mut archive = Archive::new(cfg.archive_cap);
        archive.update(&pop.iter().map(|b| (b.solution.clone(), b.objectives)).collect::<Vec<_>>());
        let visit = VisitTable::new(cfg.pop_size);
        Ok(Engine {
            scn,
            cfg,
            bounds,
            rng,
            pop,
            visit,
            archive,
            trace: Vec::new(),
            trace_ref,
            counters: OpCounters::default(),
            iter: 0,
        })
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn population(&self) -> &[Hummingbird] {
        &self.pop
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn trace_ref(&self) -> &HypervolumeRef {
        &self.trace_ref
    }

    pub fn iterations_done(&self) -> usize {
        self.iter
    }

    /// One iteration: candidate construction (all randomness drawn serially in
    /// bird index order), evaluation, combined-population sorting, acceptance,
    /// visit-table updates, archive update, scheduled migration, trace entry.
    pub fn step(&mut self) {
        let t = self.iter + 1;
        let n = self.cfg.pop_size;
        let cdim = self.bounds.continuous_dim();

        // Start-of-iteration ranking and the best-ranked "first individual"
        // whose visit order guided candidates inherit.
        let objs: Vec<ObjectiveVector> = self.pop.iter().map(|b| b.objectives).collect();
        let ranks = nondominated_sort(&objs);
        for (b, r) in self.pop.iter_mut().zip(&ranks) {
            b.rank = *r;
        }
        let first = first_individual(&objs, &ranks);

        // Candidate construction. Per-bird draw order: branch, mask, flight
        // scalar, (territorial only) sequence source, swap positions, then the
        // Cauchy gate draw after every guided move in both modes so the
        // variants consume identical random streams.
        let mut candidates = Vec::with_capacity(n);
        let mut kinds = Vec::with_capacity(n);
        for i in 0..n {
            let guided = self.rng.random::<f64>() < self.cfg.guided_prob;
            let mut v = self.pop[i].solution.clone();
            if guided {
                self.counters.guided += 1;
                let target = self.visit.select_target(i, &ranks);
                let mask = flight_mask(cdim, &mut self.rng);
                let a: f64 = self.rng.sample(StandardNormal);
                for (j, &m) in mask.iter().enumerate() {
                    let t_j = self.pop[target].solution.continuous_gene(j);
                    let b_j = self.pop[i].solution.continuous_gene(j);
                    v.set_continuous_gene(j, guided_gene(t_j, b_j, a, m));
                }
                v.visit_seq.clone_from(&self.pop[first].solution.visit_seq);
                discrete_mutation(&mut v.visit_seq, &mut self.rng);
                self.project(&mut v);
                let gate = self.rng.random::<f64>();
                if self.cfg.mode == Mode::Improved && gate < self.cfg.cauchy_prob {
                    self.counters.cauchy += 1;
                    cauchy_mutate(&mut v, &self.archive, Component::Positions, &self.cfg.cauchy, &mut self.rng);
                    cauchy_mutate(&mut v, &self.archive, Component::Speeds, &self.cfg.cauchy, &mut self.rng);
                    self.project(&mut v);
                }
                kinds.push(ForageKind::Guided { target });
            } else {
                self.counters.territorial += 1;
                let mask = flight_mask(cdim, &mut self.rng);
                let b: f64 = self.rng.sample(StandardNormal);
                for (j, &m) in mask.iter().enumerate() {
                    let x_j = self.pop[i].solution.continuous_gene(j);
                    v.set_continuous_gene(j, territorial_gene(x_j, b, m));
                }
                if self.archive.is_empty() {
                    v.visit_seq.clone_from(&self.pop[i].solution.visit_seq);
                } else {
                    let m = self.rng.random_range(0..self.archive.len());
                    v.visit_seq.clone_from(&self.archive.entries()[m].solution.visit_seq);
                }
                discrete_mutation(&mut v.visit_seq, &mut self.rng);
                self.project(&mut v);
                kinds.push(ForageKind::Territorial);
            }
            candidates.push(v);
        }

        // Evaluation (pure; all draws already made above).
        let cand_objs: Vec<ObjectiveVector> = candidates.iter().map(|c| evaluate_objectives(self.scn, c)).collect();

        // Acceptance on the combined ranking of incumbents and candidates,
        // applied in fixed index order.
        let mut combined = objs.clone();
        combined.extend(cand_objs.iter().copied());
        let cranks = nondominated_sort(&combined);
        let mut accepted = vec![false; n];
        for i in 0..n {
            if nds_accept(cranks[i], cranks[n + i], &mut self.rng) {
                accepted[i] = true;
                self.counters.accepted += 1;
                if cranks[n + i] > cranks[i] {
                    self.counters.rank_regressions += 1;
                }
                self.pop[i].solution = candidates[i].clone();
                self.pop[i].objectives = cand_objs[i];
            }
        }

        // Visit-table bookkeeping, in bird index order.
        for i in 0..n {
            match kinds[i] {
                ForageKind::Guided { target } => self.visit.mark_visit(i, target),
                ForageKind::Territorial => self.visit.mark_stay(i),
            }
            if accepted[i] {
                self.visit.mark_replaced(i);
            }
        }

        // Archive update from the post-acceptance population.
        self.archive.update(&self.pop.iter().map(|b| (b.solution.clone(), b.objectives)).collect::<Vec<_>>());

        // Scheduled migration: the worst-ranked bird restarts from a fresh
        // random solution.
        if t % self.cfg.migration_period == 0 {
            let objs: Vec<ObjectiveVector> = self.pop.iter().map(|b| b.objectives).collect();
            let ranks = nondominated_sort(&objs);
            let mut worst = 0;
            for i in 1..n {
                if ranks[i] > ranks[worst] {
                    worst = i;
                }
            }
            let mut x = random_solution(&self.bounds, &mut self.rng);
            self.project(&mut x);
            self.pop[worst].objectives = evaluate_objectives(self.scn, &x);
            self.pop[worst].solution = x;
            self.visit.mark_stay(worst);
            self.visit.mark_replaced(worst);
            self.counters.migrations += 1;
        }

        // Trace over the archive, clipped to the run-fixed reference point.
        let arch_objs = self.archive.objectives();
        let hv = hypervolume_clipped(&arch_objs, &self.trace_ref);
        let (best_rate_bps, best_device_energy_j, best_uav_energy_j) =
            best_per_objective(&arch_objs).expect("archive is never empty after initialization");
        self.trace.push(TraceEntry { iter: t, hypervolume: hv, best_rate_bps, best_device_energy_j, best_uav_energy_j });
        self.iter = t;
    }

    /// Project a candidate back into the search space: clamp the boxes and,
    /// under grid restriction, snap to the grid.
    fn project(&self, x: &mut SolutionVector) {
        clamp(x, &self.bounds);
        if let Some(g) = &self.cfg.grid {
            g.snap(x, &self.bounds);
        }
    }

    /// Run the remaining iterations and hand over the results.
    pub fn run_to_end(mut self) -> RunOutput {
        while self.iter < self.cfg.max_iters {
            self.step();
        }
        RunOutput { archive: self.archive, trace: self.trace, trace_ref: self.trace_ref, counters: self.counters }
    }
}

/// Build, run, and collect one configured optimization.
pub fn run(scn: &Scenario, cfg: &AlgoConfig) -> Result<RunOutput> {
    Ok(Engine::new(scn, cfg.clone())?.run_to_end())
}

/// Guided move of one gene: v = target + a·mask·(bird − target).
pub fn guided_gene(target: f64, bird: f64, a: f64, mask: f64) -> f64 {
    target + a * mask * (bird - target)
}

/// Territorial move of one gene: v = bird + b·mask·bird.
pub fn territorial_gene(bird: f64, b: f64, mask: f64) -> f64 {
    bird + b * mask * bird
}

/// Index of the best-ranked population member: lowest front rank, then the
/// largest crowding distance within the front, then the lowest index.
fn first_individual(objs: &[ObjectiveVector], ranks: &[usize]) -> usize {
    let n = objs.len();
    let mut crowd = vec![0.0f64; n];
    let max_rank = ranks.iter().copied().max().unwrap_or(1);
    for r in 1..=max_rank {
        let idx: Vec<usize> = (0..n).filter(|&i| ranks[i] == r).collect();
        if idx.is_empty() {
            continue;
        }
        let front: Vec<ObjectiveVector> = idx.iter().map(|&i| objs[i]).collect();
        for (&i, d) in idx.iter().zip(crowding_distance(&front)) {
            crowd[i] = d;
        }
    }
    (0..n)
        .min_by(|&a, &b| ranks[a].cmp(&ranks[b]).then(crowd[b].total_cmp(&crowd[a])).then(a.cmp(&b)))
        .expect("population is nonempty")
}

/// One of the three flight skills, chosen uniformly: axial masks a single
/// coordinate, diagonal masks a random proper subset, omnidirectional masks
/// everything. A 1-dimensional space always gets the full mask.
fn flight_mask<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    if dim == 1 {
        return vec![1.0];
    }
    match rng.random_range(0..3u8) {
        0 => {
            let mut m = vec![0.0; dim];
            m[rng.random_range(0..dim)] = 1.0;
            m
        }
        1 => {
            let u = rng.random::<f64>();
            let k = (u * (dim as f64 - 2.0)).ceil() as usize + 1;
            let mut m = vec![0.0; dim];
            for idx in rand::seq::index::sample(rng, dim, k.min(dim - 1)) {
                m[idx] = 1.0;
            }
            m
        }
        _ => vec![1.0; dim],
    }
}
