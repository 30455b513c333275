//! Angle helpers. Every angle stored by this crate lives in `[0, 2π)`.

use std::f64::consts::{PI, TAU};

/// Wraps an angle into the half-open interval `[0, 2π)`.
pub fn wrap(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Maps an angle onto `[-π, π)`.
pub fn wrap_signed(theta: f64) -> f64 {
    let w = wrap(theta);
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

/// Parses an angle written in radians, accepting `pi` literals:
/// `pi`, `-pi/4`, `3pi/4`, `3*pi/4`, `2.5`, `pi*0.5`.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    if s.is_empty() {
        return None;
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let mut value = parse_product(num)?;
    if let Some(d) = den {
        let d = parse_product(d)?;
        if d == 0.0 {
            return None;
        }
        value /= d;
    }
    let v = sign * value;
    v.is_finite().then_some(v)
}

fn parse_product(s: &str) -> Option<f64> {
    if s.is_empty() {
        return None;
    }
    let mut value = 1.0;
    for factor in s.split('*') {
        value *= parse_factor(factor)?;
    }
    Some(value)
}

fn parse_factor(s: &str) -> Option<f64> {
    if s == "pi" || s == "π" {
        return Some(PI);
    }
    if let Some(coef) = s.strip_suffix("pi").or_else(|| s.strip_suffix('π')) {
        return coef.parse::<f64>().ok().map(|c| c * PI);
    }
    s.parse::<f64>().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap(0.0), 0.0);
        assert_eq!(wrap(TAU), 0.0);
        assert!((wrap(-PI / 4.0) - 7.0 * PI / 4.0).abs() < 1e-15);
        assert!(wrap(-1e-300) < TAU);
        assert_eq!(wrap_signed(PI), -PI);
        assert!((wrap_signed(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn parses_pi_literals() {
        let cases = [
            ("pi", PI),
            ("-pi/4", -PI / 4.0),
            ("3pi/4", 3.0 * PI / 4.0),
            ("3*pi/4", 3.0 * PI / 4.0),
            ("2.5", 2.5),
            ("pi*0.5", PI / 2.0),
            (" -PI / 2 ", -PI / 2.0),
            ("0", 0.0),
        ];
        for (text, want) in cases {
            let got = parse_angle(text).unwrap_or_else(|| panic!("failed on {text}"));
            assert!((got - want).abs() < 1e-15, "{text}: {got} != {want}");
        }
        assert!(parse_angle("").is_none());
        assert!(parse_angle("pie").is_none());
        assert!(parse_angle("1/0").is_none());
    }
}
