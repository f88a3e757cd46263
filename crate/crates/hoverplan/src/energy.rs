//! Energy models: device transmit energy and rotary-wing UAV propulsion,
//! movement, and hover energy.

use crate::error::{Error, Result};
use crate::scenario::UavPowerParams;

/// Upload time and energy of one device transmitting `data_bits` at `rate_bps`
/// with power `p_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceUpload {
    pub upload_time_s: f64,
    pub energy_j: f64,
}

/// One leg of the UAV path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub length_m: f64,
    pub speed_mps: f64,
}

/// Transmit energy E = p * Q / R and the upload time Q / R.
pub fn device_energy(p_w: f64, data_bits: f64, rate_bps: f64) -> Result<DeviceUpload> {
    if !(data_bits > 0.0) {
        return Err(Error::invalid("data_bits", format!("must be > 0, got {data_bits}")));
    }
    if !(p_w >= 0.0) {
        return Err(Error::invalid("p_w", format!("must be >= 0, got {p_w}")));
    }
    if !(rate_bps > 0.0) {
        return Err(Error::InfeasibleLink(format!(
            "rate {rate_bps} bps cannot move {data_bits} bits"
        )));
    }
    let upload_time_s = data_bits / rate_bps;
    Ok(DeviceUpload { upload_time_s, energy_j: p_w * upload_time_s })
}

/// Rotary-wing propulsion power at forward speed `v` (m/s): blade profile +
/// induced + parasite terms. At v = 0 this is exactly p0_w + pi_w.
pub fn propulsion_power(v: f64, up: &UavPowerParams) -> f64 {
    assert!(v >= 0.0, "speed must be nonnegative, got {v}");
    let blade = up.p0_w * (1.0 + 3.0 * v * v / (up.u_tip * up.u_tip));
    let v4 = v * v * v * v;
    let v0_2 = up.v0 * up.v0;
    let induced = up.pi_w * ((1.0 + v4 / (4.0 * v0_2 * v0_2)).sqrt() - v * v / (2.0 * v0_2)).sqrt();
    let parasite = 0.5 * up.d0 * up.rho * up.s * up.rotor_area * v * v * v;
    blade + induced + parasite
}

/// Movement energy over a piecewise-constant-speed path: sum of
/// P(V_seg) * length / V_seg. Zero-length segments contribute nothing.
pub fn movement_energy(segments: &[Segment], up: &UavPowerParams) -> Result<f64> {
    let mut total = 0.0;
    for (i, seg) in segments.iter().enumerate() {
        if !(seg.length_m >= 0.0) {
            return Err(Error::Domain(format!("segment {i} has negative length {}", seg.length_m)));
        }
        if seg.length_m == 0.0 {
            continue;
        }
        if !(seg.speed_mps > 0.0) {
            return Err(Error::Domain(format!(
                "segment {i} of length {} m has nonpositive speed {}",
                seg.length_m, seg.speed_mps
            )));
        }
        total += propulsion_power(seg.speed_mps, up) * seg.length_m / seg.speed_mps;
    }
    Ok(total)
}

/// Hover energy: hover power (P0 + Pi) times the total hover duration.
pub fn hover_energy(total_hover_time_s: f64, up: &UavPowerParams) -> f64 {
    assert!(total_hover_time_s >= 0.0, "hover time must be nonnegative, got {total_hover_time_s}");
    (up.p0_w + up.pi_w) * total_hover_time_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::test_fixtures;

    fn up() -> UavPowerParams {
        test_fixtures::uav_power()
    }

    #[test]
    fn hover_power_is_sum_of_constants() {
        let p = propulsion_power(0.0, &up());
        assert!((p / 176.5413 - 1.0).abs() < 1e-15, "got {p}");
    }

    // Expected values below were computed independently with a straight-line
    // Python transcription of the three power terms (IEEE doubles).
    #[test]
    fn propulsion_power_at_10_matches_independent_evaluation() {
        let p = propulsion_power(10.0, &up());
        assert!((p / 129.2351245875708 - 1.0).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn parasite_term_at_10() {
        let u = up();
        let parasite = 0.5 * u.d0 * u.rho * u.s * u.rotor_area * 1000.0;
        assert!((parasite - 9.242624999999999).abs() < 1e-12);
    }

    #[test]
    fn propulsion_power_at_20_matches_independent_evaluation() {
        let p = propulsion_power(20.0, &up());
        assert!((p / 179.91800683818576 - 1.0).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn movement_energy_single_segment() {
        let e = movement_energy(&[Segment { length_m: 1000.0, speed_mps: 10.0 }], &up()).unwrap();
        assert!((e / 12923.512458757079 - 1.0).abs() < 1e-12, "got {e}");
    }

    #[test]
    fn movement_energy_is_additive_and_ignores_zero_length() {
        let u = up();
        let one = movement_energy(&[Segment { length_m: 250.0, speed_mps: 15.0 }], &u).unwrap();
        let two = movement_energy(
            &[
                Segment { length_m: 250.0, speed_mps: 15.0 },
                Segment { length_m: 0.0, speed_mps: 15.0 },
                Segment { length_m: 250.0, speed_mps: 15.0 },
            ],
            &u,
        )
        .unwrap();
        assert!((two - 2.0 * one).abs() < 1e-9);
        assert_eq!(movement_energy(&[], &u).unwrap(), 0.0);
    }

    #[test]
    fn movement_energy_rejects_zero_speed_on_positive_length() {
        let res = movement_energy(&[Segment { length_m: 10.0, speed_mps: 0.0 }], &up());
        assert!(res.is_err());
    }

    #[test]
    fn device_energy_chain_values() {
        // Q/R and p*Q/R for the worked single-link example.
        let d = device_energy(0.1, 1e6, 66577925.307805926).unwrap();
        assert!((d.upload_time_s / 0.015019993419391742 - 1.0).abs() < 1e-12);
        assert!((d.energy_j / 0.0015019993419391744 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn device_energy_rejects_bad_inputs() {
        assert!(device_energy(0.1, 0.0, 1e6).is_err());
        assert!(matches!(device_energy(0.1, 1e6, 0.0), Err(crate::Error::InfeasibleLink(_))));
    }

    #[test]
    fn device_energy_linear_in_data() {
        let a = device_energy(0.5, 1e6, 1e7).unwrap();
        let b = device_energy(0.5, 2e6, 1e7).unwrap();
        assert!((b.energy_j - 2.0 * a.energy_j).abs() < 1e-15);
    }

    #[test]
    fn device_energy_times_rate_equals_power_times_data() {
        // E = p*Q/R is not monotone in p, but E*R = p*Q is an identity.
        for p in [0.1, 1.0, 10.0] {
            for r in [1e5, 1e6, 6.6e7] {
                let d = device_energy(p, 1e6, r).unwrap();
                assert!((d.energy_j * r / (p * 1e6) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hover_energy_values() {
        let u = up();
        assert!((hover_energy(1.0, &u) - 176.5413).abs() < 1e-12);
        assert_eq!(hover_energy(0.0, &u), 0.0);
        let e = hover_energy(0.015019993419391742, &u);
        assert!((e / 2.6516491642508635 - 1.0).abs() < 1e-12, "got {e}");
    }
}
