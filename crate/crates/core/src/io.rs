//! Text formatting shared by the CSV and PGM writers.

/// Formats `x` with 12 significant digits in scientific notation.
pub fn fmt_sig(x: f64) -> String {
    // -0.0 and 0.0 should print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt_sig(-0.0), fmt_sig(0.0));
        let back: f64 = fmt_sig(1.0 / 3.0).parse().unwrap();
        assert!((back - 1.0 / 3.0).abs() < 1e-12);
    }
}
