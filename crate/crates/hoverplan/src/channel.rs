//! Air-to-ground channel model: slant distance, elevation angle, LoS
//! probability, elevation-weighted average pathloss, and the uplink rate.

use crate::error::{Error, Result};
use crate::scenario::ChannelParams;

/// 3D distance between a ground device and the UAV hovering at `altitude_m`
/// above `hover_pos`. Always at least the altitude.
pub fn distance(device_pos: [f64; 2], hover_pos: [f64; 2], altitude_m: f64) -> f64 {
    assert!(altitude_m > 0.0, "altitude must be positive, got {altitude_m}");
    let dx = device_pos[0] - hover_pos[0];
    let dy = device_pos[1] - hover_pos[1];
    // max() guards the contract `distance >= altitude` against the one-ulp
    // case where sqrt rounds below the altitude for a directly-overhead link.
    (dx * dx + dy * dy + altitude_m * altitude_m).sqrt().max(altitude_m)
}

/// Elevation angle of the UAV seen from the device, in degrees: (180/pi)*asin(H/d).
pub fn elevation_angle_deg(distance_m: f64, altitude_m: f64) -> Result<f64> {
    if !(altitude_m > 0.0) {
        return Err(Error::Domain(format!("altitude must be positive, got {altitude_m}")));
    }
    if distance_m < altitude_m {
        return Err(Error::Domain(format!(
            "slant distance {distance_m} is shorter than the altitude {altitude_m}"
        )));
    }
    Ok((altitude_m / distance_m).asin().to_degrees())
}

/// LoS probability 1 / (1 + C*exp(-B*(theta - C))), strictly increasing in theta.
pub fn los_probability(theta_deg: f64, ch: &ChannelParams) -> f64 {
    debug_assert!(theta_deg > 0.0 && theta_deg <= 90.0, "elevation angle out of (0, 90]: {theta_deg}");
    1.0 / (1.0 + ch.env_c * (-ch.env_b * (theta_deg - ch.env_c)).exp())
}

/// Average linear channel gain: the LoS-probability-weighted mix of the LoS
/// gain beta0*d^-alpha_L and the NLoS gain mu0*beta0*d^-alpha_N.
pub fn average_pathloss(distance_m: f64, theta_deg: f64, ch: &ChannelParams) -> f64 {
    debug_assert!(distance_m > 0.0);
    let p_los = los_probability(theta_deg, ch);
    let h_los = ch.beta0 * distance_m.powf(-ch.alpha_los);
    let h_nlos = ch.mu0 * ch.beta0 * distance_m.powf(-ch.alpha_nlos);
    p_los * h_los + (1.0 - p_los) * h_nlos
}

/// Shannon uplink rate in bps for transmit power `p_w` over linear `gain`;
/// zero when the device is not associated with the hovering point.
pub fn transmit_rate(p_w: f64, gain: f64, ch: &ChannelParams, associated: bool) -> f64 {
    debug_assert!(p_w >= 0.0 && gain > 0.0);
    if !associated {
        return 0.0;
    }
    ch.bandwidth_hz * (1.0 + p_w * gain / ch.noise_w).log2()
}
