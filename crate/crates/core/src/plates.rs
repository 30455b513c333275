//! Azimuthal phase plates acting as unitary operators on angular states.
//!
//! Three families are supported: spiral ramps `e^{iℓθ}` with a radial edge
//! at orientation `α`, straight-edge step plates delaying the half plane
//! `[α, α+π)` by `φ`, and binary masks delaying an arbitrary union of
//! sectors by `φ`. Uniform phase offsets (plate base, complement factor
//! `e^{i2πℓ}`) are dropped throughout.

use crate::angle::wrap;
use crate::angular::{spiral_edge_phase, AngularWavefunction, ClosedForm, OamIndex, PiecewisePhase, Sampled};
use crate::error::{OamError, Result};
use crate::sectors::SectorSet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlateDoc", into = "PlateDoc")]
pub enum PhasePlate {
    Spiral { ell: f64, alpha: f64 },
    Step { phi: f64, alpha: f64 },
    BinarySectors { phi: f64, sectors: SectorSet, alpha: f64 },
}

/// Integer/fractional split of a spiral step index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateDecomposition {
    pub ell: f64,
    pub j: i64,
    pub lambda: f64,
}

impl PhasePlate {
    pub fn spiral(ell: f64, alpha: f64) -> Result<Self> {
        check_finite("ell", ell)?;
        check_finite("alpha", alpha)?;
        Ok(PhasePlate::Spiral {
            ell,
            alpha: wrap(alpha),
        })
    }

    pub fn step(phi: f64, alpha: f64) -> Result<Self> {
        check_finite("phi", phi)?;
        check_finite("alpha", alpha)?;
        Ok(PhasePlate::Step {
            phi,
            alpha: wrap(alpha),
        })
    }

    pub fn binary(phi: f64, sectors: &[(f64, f64)], alpha: f64) -> Result<Self> {
        check_finite("phi", phi)?;
        check_finite("alpha", alpha)?;
        Ok(PhasePlate::BinarySectors {
            phi,
            sectors: SectorSet::new(sectors)?,
            alpha: wrap(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            PhasePlate::Spiral { alpha, .. }
            | PhasePlate::Step { alpha, .. }
            | PhasePlate::BinarySectors { alpha, .. } => *alpha,
        }
    }

    /// Same plate with its orientation set to `alpha`.
    pub fn oriented(&self, alpha: f64) -> PhasePlate {
        let alpha = wrap(alpha);
        match self.clone() {
            PhasePlate::Spiral { ell, .. } => PhasePlate::Spiral { ell, alpha },
            PhasePlate::Step { phi, .. } => PhasePlate::Step { phi, alpha },
            PhasePlate::BinarySectors { phi, sectors, .. } => PhasePlate::BinarySectors { phi, sectors, alpha },
        }
    }

    /// `ℓ = j + λ` for spiral plates.
    pub fn decomposition(&self) -> Option<PlateDecomposition> {
        match *self {
            PhasePlate::Spiral { ell, .. } => {
                let j = ell.floor();
                Some(PlateDecomposition {
                    ell,
                    j: j as i64,
                    lambda: ell - j,
                })
            }
            _ => None,
        }
    }

    /// Coefficient of the linear ramp in the imprinted phase.
    pub fn ramp(&self) -> f64 {
        match self {
            PhasePlate::Spiral { ell, .. } => *ell,
            _ => 0.0,
        }
    }

    /// Region delayed by `φ` for step and binary plates (already rotated).
    pub fn delayed_region(&self) -> Option<SectorSet> {
        match self {
            PhasePlate::Spiral { .. } => None,
            PhasePlate::Step { alpha, .. } => Some(SectorSet::half_plane().rotate(*alpha)),
            PhasePlate::BinarySectors { sectors, alpha, .. } => Some(sectors.rotate(*alpha)),
        }
    }

    /// Piecewise-constant part of the imprinted phase.
    pub fn edge_phase(&self) -> PiecewisePhase {
        match self {
            PhasePlate::Spiral { ell, alpha } => spiral_edge_phase(*ell, *alpha),
            PhasePlate::Step { phi, .. } | PhasePlate::BinarySectors { phi, .. } => {
                let region = self.delayed_region().expect("step/binary have a region");
                sector_phase(&region, *phi)
            }
        }
    }

    /// The plate's transmission `e^{i(ramp·θ + edge(θ))}` at `theta`.
    pub fn transmission(&self, theta: f64) -> Complex64 {
        let t = wrap(theta);
        Complex64::from_polar(1.0, self.ramp() * t + self.edge_phase().at(t))
    }

    /// Plate with the negated phase profile (the Hermitian conjugate).
    pub fn adjoint(&self) -> PhasePlate {
        match self.clone() {
            PhasePlate::Spiral { ell, alpha } => PhasePlate::Spiral { ell: -ell, alpha },
            PhasePlate::Step { phi, alpha } => PhasePlate::Step { phi: -phi, alpha },
            PhasePlate::BinarySectors { phi, sectors, alpha } => PhasePlate::BinarySectors {
                phi: -phi,
                sectors,
                alpha,
            },
        }
    }

    /// Pointwise multiplication of `state` by the plate's transmission.
    pub fn apply(&self, state: &AngularWavefunction) -> AngularWavefunction {
        match state {
            AngularWavefunction::ClosedForm(c) => self.apply_closed(c).into(),
            AngularWavefunction::Sampled(s) => {
                let edge = self.edge_phase();
                let ramp = self.ramp();
                let values = s
                    .grid
                    .thetas()
                    .zip(&s.values)
                    .map(|(t, v)| v * Complex64::from_polar(1.0, ramp * t + edge.at(t)))
                    .collect();
                Sampled { grid: s.grid, values }.into()
            }
        }
    }

    pub fn apply_closed(&self, state: &ClosedForm) -> ClosedForm {
        let twist = state.twist + self.ramp();
        let carry = twist.floor();
        ClosedForm {
            l: state.l + carry as i64,
            twist: twist - carry,
            phase: state.phase.add(&self.edge_phase()),
        }
    }

    /// The basis state `plate |l⟩` (`|a^(l+j)_λ(α)⟩` for spirals,
    /// `|b^(l)_φ(α)⟩` for step plates).
    pub fn plate_state(&self, l: OamIndex) -> ClosedForm {
        self.apply_closed(&ClosedForm::oam(l.0))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(OamError::InvalidPlate(format!("{name} must be finite")))
    }
}

fn sector_phase(region: &SectorSet, phi: f64) -> PiecewisePhase {
    let arcs = region.arcs();
    let initial = if arcs.first().is_some_and(|a| a.0 == 0.0) {
        phi
    } else {
        0.0
    };
    let mut jumps = Vec::with_capacity(2 * arcs.len());
    for &(a, b) in arcs {
        if a > 0.0 {
            jumps.push((a, phi));
        }
        if b < std::f64::consts::TAU {
            jumps.push((b, 0.0));
        }
    }
    PiecewisePhase::from_jumps(initial, &jumps)
}

/// Wire format: `{"type":"spiral"|"step"|"binary", "ell"|"phi", "alpha", "sectors"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PlateDoc {
    Spiral {
        ell: f64,
        #[serde(default)]
        alpha: f64,
    },
    Step {
        phi: f64,
        #[serde(default)]
        alpha: f64,
    },
    Binary {
        phi: f64,
        #[serde(default)]
        alpha: f64,
        sectors: Vec<[f64; 2]>,
    },
}

impl TryFrom<PlateDoc> for PhasePlate {
    type Error = OamError;

    fn try_from(doc: PlateDoc) -> Result<Self> {
        match doc {
            PlateDoc::Spiral { ell, alpha } => PhasePlate::spiral(ell, alpha),
            PlateDoc::Step { phi, alpha } => PhasePlate::step(phi, alpha),
            PlateDoc::Binary { phi, alpha, sectors } => {
                let s: Vec<(f64, f64)> = sectors.iter().map(|s| (s[0], s[1])).collect();
                PhasePlate::binary(phi, &s, alpha)
            }
        }
    }
}

impl From<PhasePlate> for PlateDoc {
    fn from(p: PhasePlate) -> Self {
        match p {
            PhasePlate::Spiral { ell, alpha } => PlateDoc::Spiral { ell, alpha },
            PhasePlate::Step { phi, alpha } => PlateDoc::Step { phi, alpha },
            PhasePlate::BinarySectors { phi, sectors, alpha } => PlateDoc::Binary {
                phi,
                alpha,
                sectors: sectors.arcs().iter().map(|&(a, b)| [a, b]).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{inner_product, to_sampled, AngularGrid, NonIntegerOamState};
    use std::f64::consts::{PI, TAU};

    fn fidelity(a: &AngularWavefunction, b: &AngularWavefunction) -> f64 {
        inner_product(a, b).unwrap().norm()
    }

    #[test]
    fn identity_and_integer_plates() {
        let s = NonIntegerOamState::new(2, 0.3, 1.0).unwrap().to_closed_form();
        let out = PhasePlate::spiral(0.0, 2.5).unwrap().apply_closed(&s);
        assert!((s.inner(&out) - 1.0).norm() < 1e-14);

        let out = PhasePlate::spiral(1.0, 0.0)
            .unwrap()
            .apply(&AngularWavefunction::oam(0));
        let c = out.as_closed_form().unwrap();
        assert_eq!((c.l, c.twist), (1, 0.0));
        assert!((ClosedForm::oam(1).inner(c) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn half_spiral_on_gaussian_keeps_4_over_pi2_in_l0() {
        let out = PhasePlate::spiral(0.5, 0.0).unwrap().plate_state(OamIndex(0));
        let p0 = ClosedForm::oam(0).inner(&out).norm_sqr();
        assert!((p0 - 4.0 / (PI * PI)).abs() < 1e-14);
    }

    #[test]
    fn adjoint_round_trips() {
        let plates = [
            PhasePlate::spiral(0.5, 0.0).unwrap(),
            PhasePlate::spiral(2.0 / 3.0, 1.3).unwrap(),
            PhasePlate::step(PI, 2.0).unwrap(),
            PhasePlate::binary(1.1, &[(0.1, 0.9), (3.0, 5.0)], 4.0).unwrap(),
        ];
        let input = AngularWavefunction::oam(0);
        for p in &plates {
            let back = p.adjoint().apply(&p.apply(&input));
            assert!((fidelity(&input, &back) - 1.0).abs() < 1e-12, "{p:?}");
        }
        // step with φ=π is its own adjoint up to a global phase
        let s = PhasePlate::step(PI, 0.4).unwrap();
        let a = s.plate_state(OamIndex(0));
        let b = s.adjoint().plate_state(OamIndex(0));
        assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_thirds_plate_and_its_adjoint_detect_with_unit_probability() {
        let plate = PhasePlate::spiral(2.0 / 3.0, 0.0).unwrap();
        let after = plate.plate_state(OamIndex(0));
        let undone = plate.adjoint().apply_closed(&after);
        let p = ClosedForm::oam(0).inner(&undone).norm_sqr();
        assert!((p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn plate_states_match_definitions() {
        // Spiral(j + 1/2, 0)|l⟩ = |a^(l+j)_{1/2}(0)⟩
        let st = PhasePlate::spiral(3.5, 0.0).unwrap().plate_state(OamIndex(-1));
        assert_eq!((st.l, st.twist), (2, 0.5));
        // Step(φ=0) is the identity
        let st = PhasePlate::step(0.0, 1.0).unwrap().plate_state(OamIndex(4));
        assert!((ClosedForm::oam(4).inner(&st) - 1.0).norm() < 1e-15);
        // Step(π, 0): sign flip on [0, π)
        let st = PhasePlate::step(PI, 0.0).unwrap().plate_state(OamIndex(0));
        assert!((st.eval(1.0).re + crate::angular::INV_SQRT_TAU).abs() < 1e-15);
        assert!((st.eval(4.0).re - crate::angular::INV_SQRT_TAU).abs() < 1e-15);
        // jump counts
        let sp = PhasePlate::spiral(0.5, 1.0).unwrap().plate_state(OamIndex(0));
        assert_eq!(sp.breakpoints(), vec![1.0]);
        let stp = PhasePlate::step(PI, 1.0).unwrap().plate_state(OamIndex(0));
        assert_eq!(stp.breakpoints(), vec![1.0, 1.0 + PI]);
        let bin = PhasePlate::binary(PI, &[(0.5, 1.0), (2.0, 3.0)], 0.0)
            .unwrap()
            .plate_state(OamIndex(0));
        assert_eq!(bin.breakpoints().len(), 4);
    }

    #[test]
    fn spiral_composition_and_rotation() {
        let s: AngularWavefunction = NonIntegerOamState::new(1, 0.2, 0.0).unwrap().to_closed_form().into();
        for &alpha in &[0.0, 0.9, 4.4] {
            let p1 = PhasePlate::spiral(0.3, alpha).unwrap();
            let p2 = PhasePlate::spiral(1.45, alpha).unwrap();
            let p12 = PhasePlate::spiral(1.75, alpha).unwrap();
            let two = p1.apply(&p2.apply(&s));
            let one = p12.apply(&s);
            assert!((fidelity(&two, &one) - 1.0).abs() < 1e-12);
        }
        // integer spirals commute with rotation
        for n in -2..=3 {
            for &alpha in &[0.5, 2.0, 5.5] {
                let a = PhasePlate::spiral(n as f64, 0.0).unwrap().plate_state(OamIndex(1));
                let b = PhasePlate::spiral(n as f64, alpha).unwrap().plate_state(OamIndex(1));
                assert!((a.inner(&b).norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_covariance() {
        // plate_state at α equals the α = 0 state evaluated at θ − α, up to a global phase
        for plate in [
            PhasePlate::spiral(0.7, 0.0).unwrap(),
            PhasePlate::step(1.2, 0.0).unwrap(),
            PhasePlate::binary(2.0, &[(0.3, 1.2), (2.0, 4.0)], 0.0).unwrap(),
        ] {
            let alpha = 2.1;
            let base = plate.plate_state(OamIndex(0));
            let rotated = plate.oriented(alpha).plate_state(OamIndex(0));
            let g = AngularGrid::new(1024).unwrap();
            let shifted: Vec<Complex64> = g.thetas().map(|t| base.eval(t - alpha)).collect();
            let direct = to_sampled(&rotated, g);
            let ratio = direct.values[0] / shifted[0];
            assert!((ratio.norm() - 1.0).abs() < 1e-12);
            for (d, s) in direct.values.iter().zip(&shifted) {
                assert!((d - s * ratio).norm() < 1e-12, "{plate:?}");
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p: PhasePlate = serde_json::from_str(r#"{"type":"spiral","ell":0.5}"#).unwrap();
        assert_eq!(p, PhasePlate::spiral(0.5, 0.0).unwrap());
        let p: PhasePlate =
            serde_json::from_str(r#"{"type":"binary","phi":3.0,"alpha":-1.0,"sectors":[[0,1],[2,3]]}"#).unwrap();
        assert!((p.alpha() - (TAU - 1.0)).abs() < 1e-15);
        let back: PhasePlate = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<PhasePlate>(r#"{"type":"binary","phi":3.0,"sectors":[[0,2],[1,3]]}"#).is_err());
        assert!(serde_json::from_str::<PhasePlate>(r#"{"type":"prism","phi":3.0}"#).is_err());
    }

    #[test]
    fn decomposition_splits_step_index() {
        let d = PhasePlate::spiral(3.5, 0.0).unwrap().decomposition().unwrap();
        assert_eq!((d.j, d.lambda), (3, 0.5));
        let d = PhasePlate::spiral(-0.25, 0.0).unwrap().decomposition().unwrap();
        assert_eq!((d.j, d.lambda), (-1, 0.75));
        assert!(PhasePlate::step(1.0, 0.0).unwrap().decomposition().is_none());
    }
}
