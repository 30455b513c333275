//! Shared inputs for the criterion benches.

use oamsim_core::{PhasePlate, SectorSet};

pub fn half_spiral() -> PhasePlate {
    PhasePlate::spiral(0.5, 0.0).expect("finite")
}

/// Three-sector φ = π mask with irregular edges, a typical search iterate.
pub fn irregular_mask() -> PhasePlate {
    let sectors = SectorSet::new(&[(0.2, 1.1), (1.9, 3.4), (4.0, 5.5)]).expect("valid arcs");
    PhasePlate::BinarySectors {
        phi: std::f64::consts::PI,
        sectors,
        alpha: 0.0,
    }
}
