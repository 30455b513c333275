//! Laguerre–Gaussian modes in the waist plane.
//!
//! With `x = 2r²/w0²` the normalized radial part of mode `(l, p)` is
//! `C (−1)^p x^{|l|/2} L_p^{|l|}(x) e^{−x/2}` where `C = (2/w0) √(p!/(p+|l|)!)`
//! normalizes `∫ R² r dr = 1`. The azimuthal part is `e^{ilθ}/√(2π)`.

pub mod decompose;
pub mod farfield;

use crate::angular::OamIndex;
use crate::error::{OamError, Result};
use crate::quadrature::{gauss_laguerre, GaussRule};
use crate::special::{laguerre, laguerre_all};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgMode {
    pub l: OamIndex,
    pub p: u32,
    pub w0: f64,
}

impl LgMode {
    pub fn new(l: i64, p: u32, w0: f64) -> Result<Self> {
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(OamError::InvalidParameter(format!("waist {w0} must be positive")));
        }
        Ok(LgMode { l: OamIndex(l), p, w0 })
    }

    /// The fundamental Gaussian `(0, 0)` with unit waist.
    pub fn fundamental() -> Self {
        LgMode {
            l: OamIndex(0),
            p: 0,
            w0: 1.0,
        }
    }

    fn order(&self) -> f64 {
        self.l.0.unsigned_abs() as f64
    }
}

/// `ln C` for the radial normalization above.
fn ln_radial_norm(p: u32, a: f64, w0: f64) -> f64 {
    (2.0 / w0).ln() + 0.5 * (ln_gamma(p as f64 + 1.0) - ln_gamma(p as f64 + a + 1.0))
}

/// Normalized radial profile `R_{lp}(r)`.
pub fn radial_profile(mode: &LgMode, r: f64) -> f64 {
    let a = mode.order();
    let x = 2.0 * r * r / (mode.w0 * mode.w0);
    let sign = if mode.p % 2 == 0 { 1.0 } else { -1.0 };
    let lag = laguerre(mode.p as usize, a, x);
    if x == 0.0 {
        return if a == 0.0 {
            sign * ln_radial_norm(mode.p, a, mode.w0).exp() * lag
        } else {
            0.0
        };
    }
    let ln_mag = ln_radial_norm(mode.p, a, mode.w0) + 0.5 * a * x.ln() - 0.5 * x;
    sign * lag * ln_mag.exp()
}

/// Complex amplitude `u_{lp}(r, θ)` with unit L2 norm over the plane.
pub fn lg_amplitude(mode: &LgMode, r: f64, theta: f64) -> Complex64 {
    let angular = Complex64::from_polar(1.0 / TAU.sqrt(), mode.l.0 as f64 * theta);
    angular * radial_profile(mode, r)
}

/// `∫ R_a(r) R_b(r) r dr` for radial orders `a_order`/`b_order`, indices
/// `p_a`/`p_b`, exact by Gauss–Laguerre with weight `x^{(a+b)/2} e^{−x}`.
fn radial_overlap_with(rule: &GaussRule, a: u32, p_a: u32, b: u32, p_b: u32, w0: f64) -> f64 {
    let (af, bf) = (a as f64, b as f64);
    let mut acc = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w <= 0.0 {
            continue;
        }
        acc += (w * laguerre(p_a as usize, af, x)) * laguerre(p_b as usize, bf, x);
    }
    let sign = if (p_a + p_b) % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (ln_radial_norm(p_a, af, w0) + ln_radial_norm(p_b, bf, w0)).exp();
    sign * norm * w0 * w0 / 4.0 * acc
}

/// Quadrature order that integrates products up to these indices exactly.
pub fn radial_rule_order(p_max: u32, l_max: u32) -> usize {
    2 * (p_max + l_max) as usize + 32
}

/// `⟨u_a|u_b⟩`: exactly zero across different `l`, radial quadrature otherwise.
pub fn lg_overlap(a: &LgMode, b: &LgMode) -> Result<Complex64> {
    if a.w0 != b.w0 {
        return Err(OamError::Unsupported("overlaps between different waists".into()));
    }
    if a.l != b.l {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let order = a.l.0.unsigned_abs() as u32;
    let rule = gauss_laguerre(radial_rule_order(a.p.max(b.p), order), order as f64);
    Ok(Complex64::new(
        radial_overlap_with(&rule, order, a.p, order, b.p, a.w0),
        0.0,
    ))
}

/// Radial overlaps `∫ R_{l,p}(r) R_in(r) r dr` for `p = 0..=p_max` at fixed
/// `|l|`, against an input of order `|l_in|`, index `p_in`.
pub fn radial_column(l_abs: u32, p_max: u32, input: &LgMode, order: usize) -> Vec<f64> {
    let a_in = input.l.0.unsigned_abs() as u32;
    let alpha = 0.5 * (l_abs + a_in) as f64;
    let rule = gauss_laguerre(order, alpha);
    let (af, bf) = (l_abs as f64, a_in as f64);
    let mut acc = vec![0.0; p_max as usize + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        if w <= 0.0 {
            continue;
        }
        let wl = w * laguerre(input.p as usize, bf, x);
        for (slot, lag) in acc.iter_mut().zip(laguerre_all(p_max as usize, af, x)) {
            *slot += wl * lag;
        }
    }
    let w0 = input.w0;
    let ln_in = ln_radial_norm(input.p, bf, w0);
    acc.iter()
        .enumerate()
        .map(|(p, &v)| {
            let sign = if (p as u32 + input.p) % 2 == 0 { 1.0 } else { -1.0 };
            sign * (ln_radial_norm(p as u32, af, w0) + ln_in).exp() * w0 * w0 / 4.0 * v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_laguerre;

    #[test]
    fn amplitude_examples() {
        let g = LgMode::fundamental();
        let peak = lg_amplitude(&g, 0.0, 0.0);
        let c00 = (2.0 / std::f64::consts::PI).sqrt();
        assert!((peak.re - c00).abs() < 1e-14 && peak.im == 0.0);
        let v = LgMode::new(1, 0, 1.0).unwrap();
        assert_eq!(lg_amplitude(&v, 0.0, 1.0).norm(), 0.0);
        assert!(LgMode::new(0, 0, 0.0).is_err());
    }

    #[test]
    fn pointwise_norm_by_quadrature() {
        // ∫ |u|² r dr dθ with r dr = (w0²/4) dx, pointwise through lg_amplitude
        let rule = gauss_laguerre(200, 0.0);
        for l in 0..=3 {
            for p in 0..=3 {
                let m = LgMode::new(l, p, 1.3).unwrap();
                let total: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(&x, &w)| {
                        let r = (x / 2.0).sqrt() * m.w0;
                        (w.ln() + x).exp() * lg_amplitude(&m, r, 0.3).norm_sqr() * TAU
                    })
                    .sum::<f64>()
                    * m.w0
                    * m.w0
                    / 4.0;
                assert!((total - 1.0).abs() < 1e-10, "l={l} p={p}: {total}");
            }
        }
    }

    #[test]
    fn orthonormality() {
        let m = |l, p| LgMode::new(l, p, 1.0).unwrap();
        assert!((lg_overlap(&m(1, 2), &m(1, 2)).unwrap() - 1.0).norm() < 1e-12);
        assert!(lg_overlap(&m(1, 2), &m(1, 3)).unwrap().norm() < 1e-10);
        assert_eq!(lg_overlap(&m(1, 2), &m(2, 2)).unwrap().norm(), 0.0);
        assert!(lg_overlap(&m(0, 0), &LgMode::new(0, 0, 2.0).unwrap()).is_err());
        for p in 0..40 {
            let v = lg_overlap(&m(-7, p), &m(-7, p)).unwrap().re;
            assert!((v - 1.0).abs() < 1e-10, "p={p}: {v}");
        }
    }

    #[test]
    fn column_matches_gamma_formula() {
        // ∫ x^{a/2} L_p^a(x) e^{−x} dx = Γ(a/2+1) Γ(a/2+p) / (p! Γ(a/2))
        for &a in &[1u32, 2, 5, 12, 40] {
            let p_max = 60;
            let col = radial_column(a, p_max, &LgMode::fundamental(), radial_rule_order(p_max, a));
            let af = a as f64;
            for (p, &got) in col.iter().enumerate() {
                let pf = p as f64;
                let ln_int =
                    ln_gamma(af / 2.0 + 1.0) + ln_gamma(af / 2.0 + pf) - ln_gamma(pf + 1.0) - ln_gamma(af / 2.0);
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                let want =
                    sign * (ln_radial_norm(p as u32, af, 1.0) + ln_radial_norm(0, 0.0, 1.0) + ln_int).exp() / 4.0;
                assert!((got - want).abs() < 1e-10, "a={a} p={p}: {got} vs {want}");
            }
        }
        // l = 0 column against the fundamental: δ_p0
        let col = radial_column(0, 10, &LgMode::fundamental(), 64);
        assert!((col[0] - 1.0).abs() < 1e-13);
        assert!(col[1..].iter().all(|v| v.abs() < 1e-13));
    }
}
