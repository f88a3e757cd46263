//! Immutable world description: the field, the devices, the UAV's flight
//! envelope, and the channel/propulsion constants.

use crate::error::{Error, Result};
use crate::solution::{partition_devices, SubareaPartition};

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Area {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max) || !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::invalid("area", format!("bounds must be finite and ordered, got x [{x_min}, {x_max}], y [{y_min}, {y_max}]")));
        }
        Ok(Area { x_min, x_max, y_min, y_max })
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x_min && p[0] <= self.x_max && p[1] >= self.y_min && p[1] <= self.y_max
    }
}

/// Air-to-ground channel constants, all in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelParams {
    /// Environment constant C of the LoS-probability curve (dimensionless).
    pub env_c: f64,
    /// Environment constant B of the LoS-probability curve (1/degree).
    pub env_b: f64,
    /// Reference channel gain at 1 m (linear, not dB).
    pub beta0: f64,
    /// Excess NLoS attenuation (linear, in (0, 1]).
    pub mu0: f64,
    /// LoS path-loss exponent.
    pub alpha_los: f64,
    /// NLoS path-loss exponent.
    pub alpha_nlos: f64,
    /// Channel bandwidth in Hz.
    pub bandwidth_hz: f64,
    /// Noise power in watts (linear, not dBm).
    pub noise_w: f64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("env_c", self.env_c),
            ("env_b", self.env_b),
            ("beta0", self.beta0),
            ("mu0", self.mu0),
            ("alpha_los", self.alpha_los),
            ("alpha_nlos", self.alpha_nlos),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_w", self.noise_w),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be strictly positive, got {v}")));
            }
        }
        if self.mu0 > 1.0 {
            return Err(Error::invalid("mu0", format!("NLoS attenuation must be in (0, 1], got {}", self.mu0)));
        }
        if self.alpha_nlos < self.alpha_los {
            return Err(Error::invalid(
                "alpha_nlos",
                format!("NLoS exponent {} must be >= LoS exponent {}", self.alpha_nlos, self.alpha_los),
            ));
        }
        Ok(())
    }
}

/// Rotary-wing propulsion constants.
#[derive(Debug, Clone, PartialEq)]
pub struct UavPowerParams {
    /// Blade-profile power in hover, W.
    pub p0_w: f64,
    /// Induced power in hover, W.
    pub pi_w: f64,
    /// Rotor-blade tip speed, m/s.
    pub u_tip: f64,
    /// Mean rotor induced velocity in hover, m/s.
    pub v0: f64,
    /// Fuselage drag ratio (dimensionless).
    pub d0: f64,
    /// Air density, kg/m^3.
    pub rho: f64,
    /// Rotor solidity (dimensionless).
    pub s: f64,
    /// Rotor disc area, m^2.
    pub rotor_area: f64,
    /// Aircraft weight, kg (informational).
    pub weight_kg: f64,
    /// Blade angular velocity, rad/s (informational).
    pub omega: f64,
    /// Rotor radius, m (informational).
    pub rotor_radius: f64,
}

impl UavPowerParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("p0_w", self.p0_w),
            ("pi_w", self.pi_w),
            ("u_tip", self.u_tip),
            ("v0", self.v0),
            ("d0", self.d0),
            ("rho", self.rho),
            ("s", self.s),
            ("rotor_area", self.rotor_area),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be strictly positive, got {v}")));
            }
        }
        // The informational fields must at least agree with the tip speed.
        let implied = self.omega * self.rotor_radius;
        if (implied - self.u_tip).abs() > 0.01 * self.u_tip {
            return Err(Error::invalid(
                "u_tip",
                format!("tip speed {} differs from omega*rotor_radius = {implied} by more than 1%", self.u_tip),
            ));
        }
        Ok(())
    }
}

/// One IoT device on the ground.
#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    /// 1-based device index.
    pub id: usize,
    /// Horizontal position in meters.
    pub pos: [f64; 2],
    /// Data volume to upload, bits.
    pub data_bits: f64,
}

/// The complete immutable problem instance.
///
/// Construction validates every invariant once; afterwards the scenario can be
/// shared by reference across threads.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub area: Area,
    pub altitude_m: f64,
    pub devices: Vec<Device>,
    pub num_hovers: usize,
    pub partition: SubareaPartition,
    pub start_pos: [f64; 2],
    pub end_pos: [f64; 2],
    pub channel: ChannelParams,
    pub uav_power: UavPowerParams,
    /// [P_min, P_max] device transmit power bounds, W.
    pub power_bounds: [f64; 2],
    /// [V_min, V_max] UAV speed bounds, m/s.
    pub speed_bounds: [f64; 2],
}

impl Scenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        area: Area,
        altitude_m: f64,
        devices: Vec<Device>,
        grid: (usize, usize),
        start_pos: [f64; 2],
        end_pos: [f64; 2],
        channel: ChannelParams,
        uav_power: UavPowerParams,
        power_bounds: [f64; 2],
        speed_bounds: [f64; 2],
    ) -> Result<Self> {
        if !(altitude_m > 0.0 && altitude_m.is_finite()) {
            return Err(Error::invalid("altitude_m", format!("must be > 0, got {altitude_m}")));
        }
        if devices.is_empty() {
            return Err(Error::invalid("devices", "at least one device is required"));
        }
        for d in &devices {
            if !area.contains(d.pos) {
                return Err(Error::invalid("devices", format!("device {} at {:?} lies outside the area", d.id, d.pos)));
            }
            if !(d.data_bits > 0.0 && d.data_bits.is_finite()) {
                return Err(Error::invalid("devices", format!("device {} data_bits must be > 0, got {}", d.id, d.data_bits)));
            }
        }
        let (cols, rows) = grid;
        if cols == 0 || rows == 0 {
            return Err(Error::invalid("grid", format!("grid must be at least 1x1, got {cols}x{rows}")));
        }
        if !(power_bounds[0] > 0.0 && power_bounds[0] < power_bounds[1] && power_bounds[1].is_finite()) {
            return Err(Error::invalid("power_bounds", format!("need 0 < P_min < P_max, got {power_bounds:?}")));
        }
        if !(speed_bounds[0] > 0.0 && speed_bounds[0] < speed_bounds[1] && speed_bounds[1].is_finite()) {
            return Err(Error::invalid("speed_bounds", format!("need 0 < V_min < V_max, got {speed_bounds:?}")));
        }
        channel.validate()?;
        uav_power.validate()?;
        let partition = partition_devices(&area, &devices, cols, rows)?;
        Ok(Scenario {
            area,
            altitude_m,
            devices,
            num_hovers: cols * rows,
            partition,
            start_pos,
            end_pos,
            channel,
            uav_power,
            power_bounds,
            speed_bounds,
        })
    }

    pub fn num_devices(&self) -> usize {
        self.devices.len()
    }
}
