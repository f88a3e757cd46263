//! Experiment configuration: a TOML schema covering the scenario, channel,
//! propulsion constants, algorithm list, and run plan. Every field has a
//! default matching the 100-device / 6-hover reference setup, so an empty
//! file is a complete experiment. dB and dBm fields are converted to linear
//! units once, at load time.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{AlgoConfig, Mode};
use crate::error::{Error, Result};
use crate::operators::{CauchyParams, TentParams};
use crate::scenario::{Area, ChannelParams, Device, Scenario, UavPowerParams};
use crate::solution::GridSpec;

/// 10^(db/10): decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Scenario geometry and device population.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    /// Field rectangle [x_min, x_max, y_min, y_max] in meters.
    pub area_m: [f64; 4],
    pub altitude_m: f64,
    /// Device count K; ignored when an explicit device list is given.
    pub num_devices: usize,
    /// Hover grid [cols, rows]; U = cols * rows.
    pub grid: [usize; 2],
    /// Seed of the device layout and data-volume draws.
    pub placement_seed: u64,
    /// Uniform range of per-device data volume, bits.
    pub data_bits_range: [f64; 2],
    pub start_pos_m: [f64; 2],
    pub end_pos_m: [f64; 2],
    /// Device transmit power box [P_min, P_max], W.
    pub power_bounds_w: [f64; 2],
    /// Leg speed box [V_min, V_max], m/s.
    pub speed_bounds_mps: [f64; 2],
    /// Explicit device list; overrides num_devices/placement_seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub devices: Option<Vec<DeviceSpec>>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            area_m: [0.0, 1000.0, 0.0, 1000.0],
            altitude_m: 100.0,
            num_devices: 100,
            grid: [3, 2],
            placement_seed: 2,
            data_bits_range: [1e6, 5e6],
            start_pos_m: [0.0, 0.0],
            end_pos_m: [1000.0, 1000.0],
            power_bounds_w: [0.1, 10.0],
            speed_bounds_mps: [10.0, 20.0],
            devices: None,
        }
    }
}

/// One explicitly placed device.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DeviceSpec {
    pub x_m: f64,
    pub y_m: f64,
    pub data_bits: f64,
}

/// Air-to-ground channel constants; gains in dB, noise in dBm.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSection {
    pub env_c: f64,
    pub env_b: f64,
    pub beta0_db: f64,
    pub mu0_db: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub bandwidth_hz: f64,
    pub noise_dbm: f64,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection {
            env_c: 11.95,
            env_b: 0.136,
            beta0_db: -60.0,
            mu0_db: -20.0,
            alpha_los: 2.5,
            alpha_nlos: 3.5,
            bandwidth_hz: 1e7,
            noise_dbm: -110.0,
        }
    }
}

/// Rotary-wing propulsion constants.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct UavPowerSection {
    pub p0_w: f64,
    pub pi_w: f64,
    pub u_tip_mps: f64,
    pub v0_mps: f64,
    pub d0: f64,
    pub rho_kg_m3: f64,
    pub s: f64,
    pub rotor_area_m2: f64,
    pub weight_kg: f64,
    pub omega_rad_s: f64,
    pub rotor_radius_m: f64,
}

impl Default for UavPowerSection {
    fn default() -> Self {
        UavPowerSection {
            p0_w: 79.8563,
            pi_w: 96.6850,
            u_tip_mps: 120.0,
            v0_mps: 4.03,
            d0: 0.6,
            rho_kg_m3: 1.225,
            s: 0.05,
            rotor_area_m2: 0.503,
            weight_kg: 2.0,
            omega_rad_s: 300.0,
            rotor_radius_m: 0.4,
        }
    }
}

/// Which optimizer variant an algorithm entry runs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    Baseline,
    Improved,
}

/// One algorithm entry; omitted fields take the conventional defaults
/// (archive capacity = population, migration every 2·population iterations,
/// chaotic initialization only in improved mode).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSection {
    pub mode: ModeSpec,
    /// Output label; defaults to the mode name. Must be unique per config.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default = "default_pop_size")]
    pub pop_size: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archive_cap: Option<usize>,
    #[serde(default = "default_guided_prob")]
    pub guided_prob: f64,
    #[serde(default = "default_cauchy_prob")]
    pub cauchy_prob: f64,
    #[serde(default = "default_cauchy_pos_scale")]
    pub cauchy_pos_scale: f64,
    #[serde(default = "default_cauchy_speed_scale")]
    pub cauchy_speed_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub migration_period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hybrid_init: Option<bool>,
    #[serde(default = "default_tent_d")]
    pub tent_d: f64,
    #[serde(default = "default_tent_e")]
    pub tent_e: f64,
    #[serde(default = "default_tent_x0")]
    pub tent_x0: f64,
    /// Restrict the search to an even grid with this many points per
    /// continuous variable (for oracle comparisons). Absent = continuous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points_per_var: Option<usize>,
}

fn default_pop_size() -> usize {
    50
}
fn default_max_iters() -> usize {
    200
}
fn default_guided_prob() -> f64 {
    0.5
}
fn default_cauchy_prob() -> f64 {
    0.2
}
fn default_cauchy_pos_scale() -> f64 {
    0.1
}
fn default_cauchy_speed_scale() -> f64 {
    0.01
}
fn default_tent_d() -> f64 {
    0.7
}
fn default_tent_e() -> f64 {
    10.0 / 3.0
}
fn default_tent_x0() -> f64 {
    0.6
}

impl AlgorithmSection {
    fn with_mode(mode: ModeSpec) -> AlgorithmSection {
        AlgorithmSection {
            mode,
            name: None,
            pop_size: default_pop_size(),
            max_iters: default_max_iters(),
            archive_cap: None,
            guided_prob: default_guided_prob(),
            cauchy_prob: default_cauchy_prob(),
            cauchy_pos_scale: default_cauchy_pos_scale(),
            cauchy_speed_scale: default_cauchy_speed_scale(),
            migration_period: None,
            hybrid_init: None,
            tent_d: default_tent_d(),
            tent_e: default_tent_e(),
            tent_x0: default_tent_x0(),
            grid_points_per_var: None,
        }
    }

    /// Output label of the entry.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| match self.mode {
            ModeSpec::Baseline => "baseline".to_string(),
            ModeSpec::Improved => "improved".to_string(),
        })
    }
}

/// Run plan.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub runs: usize,
    pub master_seed: u64,
    pub output_dir: String,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection { runs: 30, master_seed: 2024, output_dir: "results".to_string() }
    }
}

/// The complete experiment description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSection,
    pub channel: ChannelSection,
    pub uav_power: UavPowerSection,
    pub algorithms: Vec<AlgorithmSection>,
    pub experiment: ExperimentSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: ScenarioSection::default(),
            channel: ChannelSection::default(),
            uav_power: UavPowerSection::default(),
            algorithms: vec![
                AlgorithmSection::with_mode(ModeSpec::Improved),
                AlgorithmSection::with_mode(ModeSpec::Baseline),
            ],
            experiment: ExperimentSection::default(),
        }
    }
}

/// Parse a config file; an empty or absent body yields the full default
/// experiment.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Parse config text (see `load_config`).
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// Structural checks that do not need the scenario to be built.
    pub fn validate(&self) -> Result<()> {
        if self.experiment.runs < 1 {
            return Err(Error::Config("experiment.runs must be at least 1".to_string()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one [[algorithms]] entry is required".to_string()));
        }
        let mut labels: Vec<String> = self.algorithms.iter().map(|a| a.label()).collect();
        for label in &labels {
            if label.is_empty() || label.contains([',', '"']) || label.chars().any(|c| c.is_control()) {
                return Err(Error::Config(format!(
                    "algorithm name {label:?} cannot be used in CSV output; avoid commas, quotes, and control characters"
                )));
            }
        }
        labels.sort();
        labels.dedup();
        if labels.len() != self.algorithms.len() {
            return Err(Error::Config("algorithm labels must be unique; set distinct `name` values".to_string()));
        }
        let [lo, hi] = self.scenario.data_bits_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Config(format!("scenario.data_bits_range needs 0 < low <= high, got [{lo}, {hi}]")));
        }
        if self.scenario.devices.is_none() && self.scenario.num_devices == 0 {
            return Err(Error::Config("scenario.num_devices must be at least 1".to_string()));
        }
        Ok(())
    }

    /// Construct the validated problem instance, placing devices from the
    /// placement seed (x, y, data volume per device, in device order) unless
    /// an explicit list is given.
    pub fn build_scenario(&self) -> Result<Scenario> {
        let [x_min, x_max, y_min, y_max] = self.scenario.area_m;
        let area = Area::new(x_min, x_max, y_min, y_max)?;
        let devices: Vec<Device> = match &self.scenario.devices {
            Some(list) => list
                .iter()
                .enumerate()
                .map(|(i, d)| Device { id: i + 1, pos: [d.x_m, d.y_m], data_bits: d.data_bits })
                .collect(),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.scenario.placement_seed);
                let [q_lo, q_hi] = self.scenario.data_bits_range;
                (0..self.scenario.num_devices)
                    .map(|i| {
                        let x = rng.random_range(x_min..=x_max);
                        let y = rng.random_range(y_min..=y_max);
                        let q = rng.random_range(q_lo..=q_hi);
                        Device { id: i + 1, pos: [x, y], data_bits: q }
                    })
                    .collect()
            }
        };
        let channel = ChannelParams {
            env_c: self.channel.env_c,
            env_b: self.channel.env_b,
            beta0: db_to_linear(self.channel.beta0_db),
            mu0: db_to_linear(self.channel.mu0_db),
            alpha_los: self.channel.alpha_los,
            alpha_nlos: self.channel.alpha_nlos,
            bandwidth_hz: self.channel.bandwidth_hz,
            noise_w: dbm_to_watts(self.channel.noise_dbm),
        };
        let uav_power = UavPowerParams {
            p0_w: self.uav_power.p0_w,
            pi_w: self.uav_power.pi_w,
            u_tip: self.uav_power.u_tip_mps,
            v0: self.uav_power.v0_mps,
            d0: self.uav_power.d0,
            rho: self.uav_power.rho_kg_m3,
            s: self.uav_power.s,
            rotor_area: self.uav_power.rotor_area_m2,
            weight_kg: self.uav_power.weight_kg,
            omega: self.uav_power.omega_rad_s,
            rotor_radius: self.uav_power.rotor_radius_m,
        };
        Scenario::new(
            area,
            self.scenario.altitude_m,
            devices,
            (self.scenario.grid[0], self.scenario.grid[1]),
            self.scenario.start_pos_m,
            self.scenario.end_pos_m,
            channel,
            uav_power,
            self.scenario.power_bounds_w,
            self.scenario.speed_bounds_mps,
        )
    }

    /// Resolve every algorithm entry into a full engine configuration (seed 0;
    /// the harness reseeds per run) plus its output label.
    pub fn algo_configs(&self) -> Result<Vec<(String, AlgoConfig)>> {
        self.algorithms
            .iter()
            .map(|a| {
                let mode = match a.mode {
                    ModeSpec::Baseline => Mode::Baseline,
                    ModeSpec::Improved => Mode::Improved,
                };
                let grid = match a.grid_points_per_var {
                    None => None,
                    Some(0) => {
                        return Err(Error::Config(format!(
                            "algorithms.{}.grid_points_per_var must be at least 1 when present",
                            a.label()
                        )))
                    }
                    Some(n) => Some(GridSpec::new(n)),
                };
                let cfg = AlgoConfig {
                    mode,
                    pop_size: a.pop_size,
                    max_iters: a.max_iters,
                    archive_cap: a.archive_cap.unwrap_or(a.pop_size),
                    guided_prob: a.guided_prob,
                    cauchy_prob: a.cauchy_prob,
                    cauchy: CauchyParams { e_pos_scale: a.cauchy_pos_scale, e_speed: a.cauchy_speed_scale },
                    tent: TentParams { d: a.tent_d, e: a.tent_e, x0: a.tent_x0 },
                    migration_period: a.migration_period.unwrap_or(2 * a.pop_size),
                    hybrid_init: a.hybrid_init.unwrap_or(mode == Mode::Improved),
                    grid,
                    seed: 0,
                };
                cfg.validate()?;
                Ok((a.label(), cfg))
            })
            .collect()
    }

    /// SHA-256 of the canonical serialization (defaults filled in), hex.
    /// Covers everything that affects results; the output directory is
    /// normalized out so relocating results keeps the hash stable.
    pub fn config_hash(&self) -> Result<String> {
        let mut canonical = self.clone();
        canonical.experiment.output_dir = ExperimentSection::default().output_dir;
        let text = toml::to_string(&canonical)?;
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        Ok(format!("{:x}", h.finalize()))
    }
}
