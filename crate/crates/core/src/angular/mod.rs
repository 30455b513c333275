//! States on the unit circle: the angular factor of a transverse field.

mod grid;
mod spectrum;
mod wavefunction;

pub use grid::AngularGrid;
pub use spectrum::{oam_spectrum, spiral_spectrum_tail, OamSpectrum, DEFAULT_OAM_WINDOW};
pub use wavefunction::{
    inner_product, to_sampled, AngularWavefunction, ClosedForm, PiecewisePhase, Sampled, INV_SQRT_TAU,
};

use crate::angle::wrap;
use crate::error::{OamError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Integer OAM eigenvalue in units of ħ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OamIndex(pub i64);

impl From<i64> for OamIndex {
    fn from(l: i64) -> Self {
        OamIndex(l)
    }
}

/// Piecewise phase of a spiral ramp `ℓθ` whose edge sits at `alpha`:
/// `(2π−α)ℓ` on `[0, α)` and `−αℓ` on `[α, 2π)`.
pub(crate) fn spiral_edge_phase(ell: f64, alpha: f64) -> PiecewisePhase {
    if alpha == 0.0 {
        PiecewisePhase::constant(0.0)
    } else {
        PiecewisePhase::from_jumps((TAU - alpha) * ell, &[(alpha, -alpha * ell)])
    }
}

/// Basis element `|a^(l)_λ(α)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonIntegerOamState {
    pub l: OamIndex,
    pub lambda: f64,
    pub alpha: f64,
}

impl NonIntegerOamState {
    pub fn new(l: i64, lambda: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(OamError::InvalidParameter(format!(
                "fractional part {lambda} outside [0, 1)"
            )));
        }
        if !alpha.is_finite() {
            return Err(OamError::InvalidParameter("non-finite orientation".into()));
        }
        Ok(NonIntegerOamState {
            l: OamIndex(l),
            lambda,
            alpha: wrap(alpha),
        })
    }

    /// `e^{i(l+λ)θ}/√(2π)` times the orientation-dependent constants.
    pub fn to_closed_form(&self) -> ClosedForm {
        ClosedForm {
            l: self.l.0,
            twist: self.lambda,
            phase: spiral_edge_phase(self.lambda, self.alpha),
        }
    }
}
