//! The three objectives in minimization form and their evaluation.

use crate::channel::{average_pathloss, distance, elevation_angle_deg, transmit_rate};
use crate::energy::{hover_energy, movement_energy};
use crate::scenario::Scenario;
use crate::solution::{path_segments, SolutionVector};

/// One point in objective space: (-f1, f2, f3) where f1 is the minimum device
/// rate (maximized, stored negated), f2 the total device transmit energy, and
/// f3 the total UAV energy. All three are minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveVector {
    /// -f1: negated minimum device rate, in -bps (always <= 0 when feasible).
    pub neg_min_rate: f64,
    /// f2: total device transmit energy, J.
    pub device_energy_j: f64,
    /// f3: UAV hover + movement energy, J.
    pub uav_energy_j: f64,
}

impl ObjectiveVector {
    pub fn new(neg_min_rate: f64, device_energy_j: f64, uav_energy_j: f64) -> Self {
        ObjectiveVector { neg_min_rate, device_energy_j, uav_energy_j }
    }

    /// Sentinel for an infeasible plan: dominated by every feasible point,
    /// never stored in an archive.
    pub fn penalty() -> Self {
        ObjectiveVector {
            neg_min_rate: f64::INFINITY,
            device_energy_j: f64::INFINITY,
            uav_energy_j: f64::INFINITY,
        }
    }

    pub fn is_penalty(&self) -> bool {
        !(self.neg_min_rate.is_finite() && self.device_energy_j.is_finite() && self.uav_energy_j.is_finite())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.neg_min_rate, self.device_energy_j, self.uav_energy_j]
    }

    /// f1 in natural reporting units (positive bps).
    pub fn min_rate_bps(&self) -> f64 {
        -self.neg_min_rate
    }
}

/// Evaluate a candidate plan.
///
/// Every device uploads to the hover of its own subarea over a TDMA schedule,
/// so the hover time at a point is the sum of its devices' upload times.
/// f1 is the worst device rate, f2 the summed transmit energies, f3 the hover
/// energy plus the movement energy over start -> hovers in visit order -> end.
/// An infeasible plan (a device whose rate is zero) evaluates to the penalty
/// sentinel rather than an error.
pub fn evaluate_objectives(scn: &Scenario, x: &SolutionVector) -> ObjectiveVector {
    let mut min_rate = f64::INFINITY;
    let mut device_energy = 0.0;
    let mut hover_time = 0.0;
    for (u_idx, members) in scn.partition.devices_in_cell.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let hover = [x.hover_x[u_idx], x.hover_y[u_idx]];
        for &k in members {
            let dev = &scn.devices[k];
            let d = distance(dev.pos, hover, scn.altitude_m);
            let theta = match elevation_angle_deg(d, scn.altitude_m) {
                Ok(t) => t,
                Err(_) => return ObjectiveVector::penalty(),
            };
            let gain = average_pathloss(d, theta, &scn.channel);
            let rate = transmit_rate(x.powers[k], gain, &scn.channel, true);
            if !(rate > 0.0) {
                return ObjectiveVector::penalty();
            }
            let t = dev.data_bits / rate;
            hover_time += t;
            device_energy += x.powers[k] * t;
            if rate < min_rate {
                min_rate = rate;
            }
        }
    }
    let movement = match movement_energy(&path_segments(x, scn), &scn.uav_power) {
        Ok(e) => e,
        Err(_) => return ObjectiveVector::penalty(),
    };
    let uav_energy = hover_energy(hover_time, &scn.uav_power) + movement;
    ObjectiveVector::new(-min_rate, device_energy, uav_energy)
}
