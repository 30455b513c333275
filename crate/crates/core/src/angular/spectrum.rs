use super::wavefunction::{AngularWavefunction, ClosedForm, INV_SQRT_TAU};
use super::OamIndex;
use crate::error::{OamError, Result};
use crate::special::spiral_tail_power;
use num_complex::Complex64;
use serde::Serialize;

/// Half-width of the default OAM window.
pub const DEFAULT_OAM_WINDOW: i64 = 512;

/// Projections `⟨l|state⟩` over a window, with the power left outside it.
#[derive(Debug, Clone, Serialize)]
pub struct OamSpectrum {
    pub l_min: i64,
    pub l_max: i64,
    pub amplitudes: Vec<(i64, Complex64)>,
    /// `Σ |⟨l|state⟩|²` inside the window.
    pub captured_power: f64,
    /// `1 − captured_power`.
    pub residual: f64,
}

impl OamSpectrum {
    pub fn amplitude(&self, l: i64) -> Option<Complex64> {
        if l < self.l_min || l > self.l_max {
            return None;
        }
        Some(self.amplitudes[(l - self.l_min) as usize].1)
    }

    pub fn power(&self, l: i64) -> Option<f64> {
        self.amplitude(l).map(|a| a.norm_sqr())
    }
}

/// Decomposes `state` onto the integer OAM eigenstates `l_min..=l_max`.
pub fn oam_spectrum(state: &AngularWavefunction, l_min: OamIndex, l_max: OamIndex) -> Result<OamSpectrum> {
    let (lo, hi) = (l_min.0, l_max.0);
    if lo > hi {
        return Err(OamError::InvalidParameter(format!("empty OAM window [{lo}, {hi}]")));
    }
    let amplitudes: Vec<(i64, Complex64)> = match state {
        AngularWavefunction::ClosedForm(c) => (lo..=hi).map(|l| (l, ClosedForm::oam(l).inner(c))).collect(),
        AngularWavefunction::Sampled(s) => {
            let h = s.grid.step();
            (lo..=hi)
                .map(|l| {
                    let sum: Complex64 = s
                        .grid
                        .thetas()
                        .zip(&s.values)
                        .map(|(t, v)| Complex64::from_polar(INV_SQRT_TAU, -(l as f64) * t) * v)
                        .sum();
                    (l, sum * h)
                })
                .collect()
        }
    };
    let captured_power: f64 = amplitudes.iter().map(|(_, a)| a.norm_sqr()).sum();
    Ok(OamSpectrum {
        l_min: lo,
        l_max: hi,
        amplitudes,
        captured_power,
        residual: 1.0 - captured_power,
    })
}

/// Analytic tail bound for jump-free spiral states `e^{iνθ}/√(2π)`
/// (rotation only changes phases, so it also bounds rotated states).
pub fn spiral_spectrum_tail(winding: f64, l_min: i64, l_max: i64) -> f64 {
    spiral_tail_power(winding, l_min, l_max)
}
