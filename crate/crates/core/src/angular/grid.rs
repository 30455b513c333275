use crate::error::{OamError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Uniform discretization of the azimuth: `θ_k = 2πk/n`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngularGrid {
    n_points: usize,
}

impl AngularGrid {
    pub const DEFAULT_POINTS: usize = 4096;
    pub const MIN_POINTS: usize = 16;

    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(OamError::InvalidGrid(format!(
                "{n_points} points, need at least {}",
                Self::MIN_POINTS
            )));
        }
        if !n_points.is_power_of_two() {
            return Err(OamError::InvalidGrid(format!(
                "{n_points} points is not a power of two"
            )));
        }
        Ok(AngularGrid { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn step(&self) -> f64 {
        TAU / self.n_points as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        TAU * k as f64 / self.n_points as f64
    }

    pub fn thetas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.theta(k))
    }
}

impl Default for AngularGrid {
    fn default() -> Self {
        AngularGrid {
            n_points: Self::DEFAULT_POINTS,
        }
    }
}
