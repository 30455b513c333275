//! Unions of half-open arcs on the circle.

use crate::angle::wrap;
use crate::error::{OamError, Result};
use std::f64::consts::{PI, TAU};

/// Disjoint, sorted, non-empty arcs `[a, b)` with `0 ≤ a < b ≤ 2π`.
/// Arcs touching at an interior point are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSet {
    arcs: Vec<(f64, f64)>,
}

impl SectorSet {
    /// Validates user-supplied sectors: each non-empty, inside `[0, 2π]`,
    /// pairwise disjoint, with total measure strictly between 0 and 2π.
    pub fn new(sectors: &[(f64, f64)]) -> Result<Self> {
        if sectors.is_empty() {
            return Err(OamError::InvalidPlate("no sectors given".into()));
        }
        let mut arcs = sectors.to_vec();
        for &(a, b) in &arcs {
            if !(a.is_finite() && b.is_finite()) {
                return Err(OamError::InvalidPlate("non-finite sector bound".into()));
            }
            if !(0.0 <= a && a < b && b <= TAU) {
                return Err(OamError::InvalidPlate(format!(
                    "sector [{a}, {b}) is empty or leaves [0, 2π)"
                )));
            }
        }
        arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in arcs.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(OamError::InvalidPlate(format!(
                    "sectors [{}, {}) and [{}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let set = SectorSet::from_sorted(arcs);
        let m = set.measure();
        if !(m > 0.0 && m < TAU) {
            return Err(OamError::InvalidPlate(format!(
                "total sector measure {m} must lie in (0, 2π)"
            )));
        }
        Ok(set)
    }

    /// The half plane `[0, π)`.
    pub fn half_plane() -> Self {
        SectorSet { arcs: vec![(0.0, PI)] }
    }

    fn from_sorted(arcs: Vec<(f64, f64)>) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(arcs.len());
        for (a, b) in arcs {
            if b <= a {
                continue;
            }
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        SectorSet { arcs: merged }
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = wrap(theta);
        self.arcs.iter().any(|&(a, b)| a <= t && t < b)
    }

    /// The set rotated by `alpha` (arcs crossing 2π are split).
    pub fn rotate(&self, alpha: f64) -> SectorSet {
        let shift = wrap(alpha);
        let mut out = Vec::with_capacity(self.arcs.len() + 1);
        for &(a, b) in &self.arcs {
            let (ra, rb) = (a + shift, b + shift);
            if ra >= TAU {
                out.push((ra - TAU, rb - TAU));
            } else if rb > TAU {
                out.push((ra, TAU));
                out.push((0.0, rb - TAU));
            } else {
                out.push((ra, rb));
            }
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        SectorSet::from_sorted(out)
    }

    /// Measure of the intersection with `other`.
    pub fn intersection_measure(&self, other: &SectorSet) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut total = 0.0;
        while i < self.arcs.len() && j < other.arcs.len() {
            let (a0, a1) = self.arcs[i];
            let (b0, b1) = other.arcs[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if hi > lo {
                total += hi - lo;
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// `measure(M \ (M + alpha))`.
    pub fn rotation_mismatch(&self, alpha: f64) -> f64 {
        (self.measure() - self.intersection_measure(&self.rotate(alpha))).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SectorSet::new(&[]).is_err());
        assert!(SectorSet::new(&[(1.0, 1.0)]).is_err());
        assert!(SectorSet::new(&[(0.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(SectorSet::new(&[(0.0, TAU)]).is_err());
        assert!(SectorSet::new(&[(-0.1, 1.0)]).is_err());
        let s = SectorSet::new(&[(3.0, 4.0), (0.0, 1.0)]).unwrap();
        assert_eq!(s.arcs(), &[(0.0, 1.0), (3.0, 4.0)]);
        // touching arcs merge
        let s = SectorSet::new(&[(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(s.arcs(), &[(0.0, 2.0)]);
    }

    #[test]
    fn rotation_wraps() {
        let h = SectorSet::half_plane().rotate(3.0 * PI / 2.0);
        assert_eq!(h.arcs().len(), 2);
        assert!((h.measure() - PI).abs() < 1e-15);
        assert!(h.contains(0.1) && h.contains(5.0) && !h.contains(2.0));
    }

    #[test]
    fn half_plane_mismatch_is_triangular() {
        let h = SectorSet::half_plane();
        for &(alpha, want) in &[(0.0, 0.0), (1.0, 1.0), (PI, PI), (4.0, TAU - 4.0)] {
            assert!((h.rotation_mismatch(alpha) - want).abs() < 1e-14, "α={alpha}");
        }
    }

    #[test]
    fn mismatch_is_symmetric() {
        let s = SectorSet::new(&[(0.2, 1.1), (2.0, 2.5), (4.0, 5.9)]).unwrap();
        for k in 0..50 {
            let a = 0.123 * k as f64;
            let d = s.rotation_mismatch(a) - s.rotation_mismatch(TAU - a);
            assert!(d.abs() < 1e-13);
        }
    }
}
