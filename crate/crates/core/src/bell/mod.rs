//! CHSH bookkeeping over relative-angle coincidence fringes.

pub mod exact;
pub mod search;

use crate::angle::wrap;
use crate::error::{OamError, Result};
use crate::overlap::{spiral_overlap_probability, step_overlap_probability};
use crate::plates::PhasePlate;
use crate::sectors::SectorSet;
use crate::twophoton::{coincidence_amplitude, partner_plate, AnalyzerSetting, TwoPhotonState};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

/// Floor a partner probability must clear for an S = 4 certificate.
pub const NONVANISHING_FLOOR: f64 = 1e-3;

/// Anything that yields a coincidence probability for analyzer angles `x`
/// (signal) and `y` (idler).
pub trait CoincidenceModel {
    fn probability(&self, x: f64, y: f64) -> f64;
    fn describe(&self) -> String;
}

/// Closed-form fringes depending only on `δ = (y − x) mod 2π`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFringe {
    Spiral {
        lambda: f64,
    },
    Step {
        phi: f64,
    },
    Binary {
        sectors: SectorSet,
        phi: f64,
    },
    /// `cos²(y − x)`, the polarization sanity fringe.
    Cos2,
    Constant(f64),
}

impl ClosedFringe {
    /// The rotation-overlap fringe of `plate`'s family.
    pub fn for_plate(plate: &PhasePlate) -> Self {
        match plate {
            PhasePlate::Spiral { .. } => ClosedFringe::Spiral {
                lambda: plate.decomposition().expect("spiral").lambda,
            },
            PhasePlate::Step { phi, .. } => ClosedFringe::Step { phi: *phi },
            PhasePlate::BinarySectors { phi, sectors, .. } => ClosedFringe::Binary {
                sectors: sectors.clone(),
                phi: *phi,
            },
        }
    }

    pub fn at(&self, delta: f64) -> f64 {
        let d = wrap(delta);
        match self {
            ClosedFringe::Spiral { lambda } => spiral_overlap_probability(*lambda, d),
            ClosedFringe::Step { phi } => step_overlap_probability(*phi, d),
            ClosedFringe::Binary { sectors, phi } => {
                let m = sectors.rotation_mismatch(d);
                let a = 1.0 - (m / PI) * (1.0 - phi.cos());
                a * a
            }
            ClosedFringe::Cos2 => d.cos().powi(2),
            ClosedFringe::Constant(c) => *c,
        }
    }
}

impl CoincidenceModel for ClosedFringe {
    fn probability(&self, x: f64, y: f64) -> f64 {
        self.at(y - x)
    }

    fn describe(&self) -> String {
        match self {
            ClosedFringe::Spiral { lambda } => format!("spiral rotation fringe, lambda={lambda}"),
            ClosedFringe::Step { phi } => format!("step rotation fringe, phi={phi}"),
            ClosedFringe::Binary { sectors, phi } => {
                format!("binary mask fringe, phi={phi}, sectors={:?}", sectors.arcs())
            }
            ClosedFringe::Cos2 => "cos^2(y-x)".into(),
            ClosedFringe::Constant(c) => format!("constant {c}"),
        }
    }
}

/// Coincidences computed from the two-photon state itself, with the idler
/// analyzer the conservation partner of the signal plate.
#[derive(Debug, Clone)]
pub struct PairModel {
    pub state: TwoPhotonState,
    pub signal_template: PhasePlate,
}

impl CoincidenceModel for PairModel {
    fn probability(&self, x: f64, y: f64) -> f64 {
        let s = AnalyzerSetting::signal(self.signal_template.oriented(x));
        let i = AnalyzerSetting::idler(partner_plate(&self.signal_template, self.state.q, y));
        coincidence_amplitude(&self.state, &s, &i)
            .expect("partner plates satisfy conservation")
            .norm_sqr()
    }

    fn describe(&self) -> String {
        format!("two-photon state q={} behind {:?}", self.state.q, self.signal_template)
    }
}

pub fn coincidence_probability<M: CoincidenceModel + ?Sized>(model: &M, x: f64, y: f64) -> f64 {
    model.probability(x, y)
}

/// The four probabilities entering one correlation, in the order
/// `[P(x,y), P(x⊥,y⊥), P(x,y⊥), P(x⊥,y)]`.
pub fn correlation_terms<M: CoincidenceModel + ?Sized>(model: &M, x: f64, y: f64, perp: f64) -> [f64; 4] {
    let (xp, yp) = (x + perp, y + perp);
    [
        model.probability(x, y),
        model.probability(xp, yp),
        model.probability(x, yp),
        model.probability(xp, y),
    ]
}

fn correlation_from(terms: [f64; 4], x: f64, y: f64) -> Result<f64> {
    let den: f64 = terms.iter().sum();
    if !(den > 0.0) {
        return Err(OamError::DegenerateFringe { x, y });
    }
    Ok(((terms[0] + terms[1] - terms[2] - terms[3]) / den).clamp(-1.0, 1.0))
}

pub fn e_correlation<M: CoincidenceModel + ?Sized>(model: &M, x: f64, y: f64, perp: f64) -> Result<f64> {
    correlation_from(correlation_terms(model, x, y, perp), x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellSettings {
    pub alpha1: f64,
    pub alpha1p: f64,
    pub alpha2: f64,
    pub alpha2p: f64,
    pub perp_offset: f64,
}

impl BellSettings {
    pub fn new(alpha1: f64, alpha1p: f64, alpha2: f64, alpha2p: f64, perp_offset: f64) -> Result<Self> {
        let all = [alpha1, alpha1p, alpha2, alpha2p, perp_offset];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(OamError::InvalidParameter("non-finite analyzer angle".into()));
        }
        if !(perp_offset > 0.0) {
            return Err(OamError::InvalidParameter(format!(
                "perpendicular offset {perp_offset} must be positive"
            )));
        }
        Ok(BellSettings {
            alpha1: wrap(alpha1),
            alpha1p: wrap(alpha1p),
            alpha2: wrap(alpha2),
            alpha2p: wrap(alpha2p),
            perp_offset,
        })
    }

    /// `(−π/4, π/4, −π/2, 0)` with `x⊥ = x + π`.
    pub fn paper() -> Self {
        Self::new(-FRAC_PI_4, FRAC_PI_4, -FRAC_PI_2, 0.0, PI).expect("valid")
    }

    /// `(−π/8, π/8, −π/4, 0)` with `x⊥ = x + π/2`.
    pub fn polarization() -> Self {
        Self::new(-FRAC_PI_8, FRAC_PI_8, -FRAC_PI_4, 0.0, FRAC_PI_2).expect("valid")
    }

    /// Default settings for a plate family: polarization-style for the
    /// π-periodic half-plane fringe (φ = π), the `paper` set
    /// otherwise.
    pub fn default_for(plate: &PhasePlate) -> Self {
        let half_plane = match plate {
            PhasePlate::Step { .. } => true,
            PhasePlate::BinarySectors { sectors, .. } => {
                sectors.arcs().len() == 1 && (sectors.measure() - PI).abs() < 1e-12
            }
            PhasePlate::Spiral { .. } => false,
        };
        match plate {
            PhasePlate::Step { phi, .. } | PhasePlate::BinarySectors { phi, .. }
                if half_plane && (phi.cos() + 1.0).abs() < 1e-12 =>
            {
                Self::polarization()
            }
            _ => Self::paper(),
        }
    }

    /// Setting pairs in CHSH order with their sign.
    pub fn pairs(&self) -> [(&'static str, f64, f64, f64); 4] {
        [
            ("a1a2", self.alpha1, self.alpha2, 1.0),
            ("a1pa2", self.alpha1p, self.alpha2, -1.0),
            ("a1a2p", self.alpha1, self.alpha2p, 1.0),
            ("a1pa2p", self.alpha1p, self.alpha2p, 1.0),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EValues {
    pub a1a2: f64,
    pub a1pa2: f64,
    pub a1a2p: f64,
    pub a1pa2p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellResult {
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "E")]
    pub e: EValues,
    /// Four correlation blocks of `[P(x,y), P(x⊥,y⊥), P(x,y⊥), P(x⊥,y)]`
    /// in the order of [`EValues`].
    #[serde(rename = "P")]
    pub p: Vec<f64>,
    pub settings: BellSettings,
    pub fringe: String,
}

pub fn chsh_s<M: CoincidenceModel + ?Sized>(model: &M, settings: &BellSettings) -> Result<BellResult> {
    let mut p = Vec::with_capacity(16);
    let mut e = [0.0; 4];
    let mut s = 0.0;
    for (k, (_, x, y, sign)) in settings.pairs().into_iter().enumerate() {
        let terms = correlation_terms(model, x, y, settings.perp_offset);
        p.extend_from_slice(&terms);
        e[k] = correlation_from(terms, x, y)?;
        s += sign * e[k];
    }
    Ok(BellResult {
        s,
        e: EValues {
            a1a2: e[0],
            a1pa2: e[1],
            a1a2p: e[2],
            a1pa2p: e[3],
        },
        p,
        settings: *settings,
        fringe: model.describe(),
    })
}

/// Zero/nonzero pattern behind S = 4: every "+" pair has vanishing
/// perpendicular terms and the "−" pair vanishing direct terms, while the
/// complementary terms stay above [`NONVANISHING_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub max_vanishing: f64,
    pub min_partner: f64,
    pub tolerance: f64,
    pub holds: bool,
}

pub fn certify_maximal(result: &BellResult, tolerance: f64) -> Certificate {
    let mut max_vanishing: f64 = 0.0;
    let mut min_partner = f64::INFINITY;
    for (k, block) in result.p.chunks_exact(4).enumerate() {
        let (direct, cross) = ([block[0], block[1]], [block[2], block[3]]);
        let (zero, partner) = if k == 1 { (direct, cross) } else { (cross, direct) };
        max_vanishing = zero.iter().fold(max_vanishing, |m, &v| m.max(v));
        min_partner = partner.iter().fold(min_partner, |m, &v| m.min(v));
    }
    Certificate {
        max_vanishing,
        min_partner,
        tolerance,
        holds: max_vanishing <= tolerance && min_partner > NONVANISHING_FLOOR,
    }
}
