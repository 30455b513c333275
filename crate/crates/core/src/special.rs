//! Small special-function helpers.

use std::f64::consts::PI;

/// `sin(x)/x`, continuous at zero.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Trigamma function ψ'(x) for x > 0.
pub fn trigamma(mut x: f64) -> f64 {
    assert!(x > 0.0, "trigamma needs a positive argument");
    let mut acc = 0.0;
    while x < 16.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // asymptotic series with Bernoulli numbers B2..B10
    let series = inv
        + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    acc + series
}

/// Generalized Laguerre polynomials `L_0^a(x) ..= L_{p_max}^a(x)`.
pub fn laguerre_all(p_max: usize, a: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p_max + 1);
    out.push(1.0);
    if p_max == 0 {
        return out;
    }
    out.push(1.0 + a - x);
    for k in 1..p_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * out[k] - (kf + a) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

pub fn laguerre(p: usize, a: f64, x: f64) -> f64 {
    laguerre_all(p, a, x)[p]
}

/// Power carried outside `[l_min, l_max]` by the angular state
/// `e^{iνθ}/√(2π)`, whose per-index power is `sin²(πν)/(π²(l−ν)²)`.
pub fn spiral_tail_power(nu: f64, l_min: i64, l_max: i64) -> f64 {
    let s = (PI * nu).sin();
    let weight = s * s / (PI * PI);
    if weight < 1e-300 {
        return 0.0;
    }
    let upper = l_max as f64 + 1.0 - nu;
    let lower = nu - l_min as f64 + 1.0;
    if upper <= 0.0 || lower <= 0.0 {
        // window does not straddle ν; fall back to the full sum minus the window
        let inside: f64 = (l_min..=l_max)
            .map(|l| {
                let d = l as f64 - nu;
                weight / (d * d)
            })
            .sum();
        return (1.0 - inside).max(0.0);
    }
    weight * (trigamma(upper) + trigamma(lower))
}
