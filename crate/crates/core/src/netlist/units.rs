/// Parses a number with an optional engineering suffix (f p n u m k meg g,
/// case-insensitive). The suffix is folded into the decimal exponent before
/// conversion, so `2k` is exactly `2e3`.
pub fn parse_value(token: &str) -> Option<f64> {
    let lower = token.trim().to_ascii_lowercase();
    let (mantissa, exp) = if let Some(m) = lower.strip_suffix("meg") {
        (m, 6)
    } else {
        match lower.chars().last()? {
            'f' => (&lower[..lower.len() - 1], -15),
            'p' => (&lower[..lower.len() - 1], -12),
            'n' => (&lower[..lower.len() - 1], -9),
            'u' => (&lower[..lower.len() - 1], -6),
            'm' => (&lower[..lower.len() - 1], -3),
            'k' => (&lower[..lower.len() - 1], 3),
            'g' => (&lower[..lower.len() - 1], 9),
            _ => (lower.as_str(), 0),
        }
    };
    if mantissa.is_empty() || !mantissa.starts_with(|c: char| c.is_ascii_digit() || "+-.".contains(c)) {
        return None;
    }
    let v = if exp == 0 {
        mantissa.parse::<f64>().ok()?
    } else if mantissa.contains('e') {
        mantissa.parse::<f64>().ok()? * 10f64.powi(exp)
    } else {
        format!("{mantissa}e{exp}").parse::<f64>().ok()?
    };
    v.is_finite().then_some(v)
}

/// Shortest representation that parses back to the identical `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn suffixes() {
        assert_eq!(parse_value("2k"), Some(2000.0));
        assert_eq!(parse_value("2K"), Some(2000.0));
        assert_eq!(parse_value("1meg"), Some(1e6));
        assert_eq!(parse_value("1MEG"), Some(1e6));
        assert_eq!(parse_value("1m"), Some(1e-3));
        assert_eq!(parse_value("1M"), Some(1e-3));
        assert_eq!(parse_value("50u"), Some(50e-6));
        assert_eq!(parse_value("10n"), Some(10e-9));
        assert_eq!(parse_value("1p"), Some(1e-12));
        assert_eq!(parse_value("3f"), Some(3e-15));
        assert_eq!(parse_value("2g"), Some(2e9));
        assert_eq!(parse_value("1.5"), Some(1.5));
        assert_eq!(parse_value("-0.4"), Some(-0.4));
        assert_eq!(parse_value("1e-9"), Some(1e-9));
        assert_eq!(parse_value("2.5e-1k"), Some(250.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "k", "abc", "1x", "inf", "nan", "1..2", "meg"] {
            assert_eq!(parse_value(bad), None, "{bad}");
        }
    }

    proptest! {
        #[test]
        fn suffix_scaling_is_exact(m in 1u32..100_000, k in 0usize..8) {
            let (sfx, exp) = [("f", -15), ("p", -12), ("n", -9), ("u", -6), ("m", -3), ("k", 3), ("meg", 6), ("g", 9)][k];
            let expected: f64 = format!("{m}e{exp}").parse().unwrap();
            prop_assert_eq!(parse_value(&format!("{m}{sfx}")), Some(expected));
        }

        #[test]
        fn format_round_trips(v in proptest::num::f64::NORMAL) {
            prop_assert_eq!(parse_value(&format_value(v)), Some(v));
        }
    }
}
