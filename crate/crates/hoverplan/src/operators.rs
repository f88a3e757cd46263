//! Search operators specific to the improved optimizer variant: chaotic
//! tent-map population initialization, Cauchy-density perturbation of selected
//! gene blocks, and swap mutation of the visit permutation.

use rand::Rng;

use crate::archive::Archive;
use crate::solution::{Bounds, SolutionVector};

/// Keeps the chaotic state strictly inside (0, 1).
const TENT_EPS: f64 = 1e-12;

/// Tent-map constants: branch threshold `d`, descending slope `e`, and the
/// initial chaotic state `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TentParams {
    pub d: f64,
    pub e: f64,
    pub x0: f64,
}

impl Default for TentParams {
    fn default() -> Self {
        TentParams { d: 0.7, e: 10.0 / 3.0, x0: 0.6 }
    }
}

impl TentParams {
    pub fn validate(&self) -> bool {
        self.d > 0.0 && self.d < 1.0 && self.e > 0.0 && self.x0 > 0.0 && self.x0 < 1.0
    }
}

/// The raw tent map: x/d on the rising branch, e·(1−x) on the falling one.
fn tent(x: f64, tp: &TentParams) -> f64 {
    if x < tp.d {
        x / tp.d
    } else {
        tp.e * (1.0 - x)
    }
}

/// One chaotic step with the uniform draw injected: returns the sample
/// tent(x)·draw used for gene generation and the next chaotic state, which is
/// tent(x) itself clipped into (0, 1).
pub fn tent_next_with(x: f64, tp: &TentParams, draw: impl FnOnce() -> f64) -> (f64, f64) {
    let t = tent(x, tp);
    let sample = t * draw();
    let next = t.clamp(TENT_EPS, 1.0 - TENT_EPS);
    (sample, next)
}

/// One chaotic step: (sample in [0,1), next state in (0,1)).
pub fn tent_next<R: Rng + ?Sized>(x: f64, tp: &TentParams, rng: &mut R) -> (f64, f64) {
    tent_next_with(x, tp, || rng.random::<f64>())
}

/// A tent map iterated from `x0`, shared across one run's whole initial
/// population so the chaotic trajectory is preserved between individuals.
#[derive(Debug, Clone)]
pub struct TentChain {
    params: TentParams,
    state: f64,
}

impl TentChain {
    pub fn new(params: TentParams) -> TentChain {
        assert!(params.validate(), "tent parameters out of range: {params:?}");
        TentChain { state: params.x0, params }
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    /// Advance the chain once and return the gene sample.
    pub fn next_sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let (sample, next) = tent_next(self.state, &self.params, rng);
        self.state = next;
        sample
    }
}

/// Draw one individual of the chaotic-chain initialization: every continuous
/// gene takes L + sample·(U−L) from the shared chain in flat layout order, and
/// the visit order starts as the ascending permutation.
pub fn hybrid_init<R: Rng + ?Sized>(b: &Bounds, chain: &mut TentChain, rng: &mut R) -> SolutionVector {
    let (u, k) = (b.num_hovers, b.num_devices);
    let mut x = SolutionVector {
        hover_x: vec![0.0; u],
        hover_y: vec![0.0; u],
        visit_seq: (1..=u).collect(),
        speeds: vec![0.0; u],
        powers: vec![0.0; k],
    };
    for i in 0..b.continuous_dim() {
        let [lo, hi] = b.gene_bounds(i);
        x.set_continuous_gene(i, lo + chain.next_sample(rng) * (hi - lo));
    }
    x
}

/// Scale rules of the Cauchy perturbation: hover coordinates use a fresh
/// E = e_pos_scale·uniform per invocation, speeds use the constant e_speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyParams {
    pub e_pos_scale: f64,
    pub e_speed: f64,
}

impl Default for CauchyParams {
    fn default() -> Self {
        CauchyParams { e_pos_scale: 0.1, e_speed: 0.01 }
    }
}

/// Which continuous gene block a perturbation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// Both hover coordinate vectors, 2U genes as one block.
    Positions,
    /// The U leg speeds.
    Speeds,
}

/// The unit-scale Cauchy density at `r`: 1/(π·(r²+1)), in (1/(2π), 1/π] for
/// r in [0, 1).
pub fn cauchy_factor_from(r: f64) -> f64 {
    1.0 / (std::f64::consts::PI * (r * r + 1.0))
}

/// Density factor at a uniform argument.
pub fn cauchy_factor<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    cauchy_factor_from(rng.random::<f64>())
}

/// Overwrite one gene block of `x` with a perturbed copy of the same block of
/// a chosen archive member: new_j = m_j·(1 + E·factor). Deterministic core
/// with the member index and both draws injected; `e_draw` is ignored for the
/// speed block. The caller clamps afterwards.
///
/// An empty archive leaves `x` untouched.
pub fn cauchy_mutate_with(
    x: &mut SolutionVector,
    arch: &Archive,
    component: Component,
    cp: &CauchyParams,
    member_idx: usize,
    r: f64,
    e_draw: f64,
) {
    if arch.is_empty() {
        return;
    }
    let member = &arch.entries()[member_idx].solution;
    let factor = cauchy_factor_from(r);
    let e = match component {
        Component::Positions => cp.e_pos_scale * e_draw,
        Component::Speeds => cp.e_speed,
    };
    let scale = 1.0 + e * factor;
    match component {
        Component::Positions => {
            for j in 0..x.hover_x.len() {
                x.hover_x[j] = member.hover_x[j] * scale;
            }
            for j in 0..x.hover_y.len() {
                x.hover_y[j] = member.hover_y[j] * scale;
            }
        }
        Component::Speeds => {
            for j in 0..x.speeds.len() {
                x.speeds[j] = member.speeds[j] * scale;
            }
        }
    }
}

/// Randomized perturbation: draws the archive member, the density argument,
/// and (for positions only) the E scale, in that order.
pub fn cauchy_mutate<R: Rng + ?Sized>(
    x: &mut SolutionVector,
    arch: &Archive,
    component: Component,
    cp: &CauchyParams,
    rng: &mut R,
) {
    if arch.is_empty() {
        return;
    }
    let member_idx = rng.random_range(0..arch.len());
    let r = rng.random::<f64>();
    let e_draw = match component {
        Component::Positions => rng.random::<f64>(),
        Component::Speeds => 0.0,
    };
    cauchy_mutate_with(x, arch, component, cp, member_idx, r, e_draw);
}

/// Swap the values at two injected positions if they differ.
pub fn discrete_mutation_at(seq: &mut [usize], p: usize, q: usize) {
    if seq[p] != seq[q] {
        seq.swap(p, q);
    }
}

/// Swap mutation: two positions drawn independently and uniformly; drawing
/// the same position twice leaves the permutation unchanged.
pub fn discrete_mutation<R: Rng + ?Sized>(seq: &mut [usize], rng: &mut R) {
    let n = seq.len();
    if n == 0 {
        return;
    }
    let p = rng.random_range(0..n);
    let q = rng.random_range(0..n);
    discrete_mutation_at(seq, p, q);
}
