//! Fixed-decimal numeric formatting for every output file: 6 significant
//! digits, no exponent notation, monotone (so min/max of a column commutes
//! with the rounding and summary extremes stay re-derivable from dumps).

/// Format with 6 significant digits in plain decimal notation. Magnitudes of
/// 1e6 and above round to a whole number of tens/hundreds/... instead of
/// gaining fractional digits.
pub fn fmt_sig6(x: f64) -> String {
    if !x.is_finite() {
        // Output paths never carry sentinels; keep the formatter total anyway.
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = 5 - magnitude;
    if decimals >= 0 {
        format!("{x:.*}", decimals as usize)
    } else {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (x / scale).round() * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_renderings() {
        assert_eq!(fmt_sig6(176.5413), "176.541");
        assert_eq!(fmt_sig6(0.0015019993419391744), "0.00150200");
        assert_eq!(fmt_sig6(66577925.307805926), "66577900");
        assert_eq!(fmt_sig6(-135.8534), "-135.853");
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(2.6516491642508635), "2.65165");
        assert_eq!(fmt_sig6(1000.0), "1000.00");
        assert_eq!(fmt_sig6(123456789.0), "123457000");
    }

    #[test]
    fn renders_are_valid_json_numbers() {
        for x in [1.5e-7, -3.25, 0.0, 9.999999e9, 42.0] {
            let s = fmt_sig6(x);
            let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
            assert!(parsed.is_number(), "{s} did not parse as a JSON number");
        }
    }

    proptest! {
        /// Monotonicity: ordering survives the rounding.
        #[test]
        fn formatting_is_monotone(a in -1e12..1e12f64, b in -1e12..1e12f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let plo: f64 = fmt_sig6(lo).parse().unwrap();
            let phi: f64 = fmt_sig6(hi).parse().unwrap();
            prop_assert!(plo <= phi, "{} -> {} vs {} -> {}", lo, plo, hi, phi);
        }

        /// 6 significant digits means relative error below 1e-5.
        #[test]
        fn relative_error_is_bounded(x in prop::num::f64::NORMAL) {
            prop_assume!(x.abs() > 1e-300 && x.abs() < 1e300);
            let parsed: f64 = fmt_sig6(x).parse().unwrap();
            let rel = ((parsed - x) / x).abs();
            prop_assert!(rel < 1e-5, "{} -> {} (rel {})", x, parsed, rel);
        }
    }
}
