//! Independent numerical checks for the closed forms.
//!
//! Everything here integrates pointwise evaluations of the plate states with
//! [`CircleQuadrature`], which splits cells at the known phase jumps. None of
//! it reuses the segment-exact inner products of [`ClosedForm::inner`].

use crate::angular::{ClosedForm, OamIndex};
use crate::bell::{certify_maximal, chsh_s, BellSettings, ClosedFringe, CoincidenceModel};
use crate::error::Result;
use crate::plates::PhasePlate;
use crate::quadrature::CircleQuadrature;
use crate::twophoton::{partner_plate, AnalyzerSetting};
use num_complex::Complex64;
use serde::Serialize;

/// `∫ conj(a) b dθ` by jump-aware quadrature.
pub fn quadrature_inner(a: &ClosedForm, b: &ClosedForm, quad: &CircleQuadrature) -> Complex64 {
    let mut cuts = a.breakpoints();
    cuts.extend(b.breakpoints());
    quad.integrate(&cuts, |t| a.eval(t).conj() * b.eval(t))
}

/// One closed-form versus oracle comparison.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    /// Quadrature cells used by the oracle.
    pub grid: usize,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, oracle: f64, tolerance: f64, grid: usize) -> Self {
        let abs_diff = (closed_form - oracle).abs();
        OracleReport {
            quantity: quantity.into(),
            closed_form,
            oracle,
            abs_diff,
            tolerance,
            grid,
            pass: abs_diff <= tolerance,
        }
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Checks the rotation-overlap probability of `template` at `alpha`.
pub fn verify_overlap(template: &PhasePlate, alpha: f64, tolerance: f64, quad: &CircleQuadrature) -> OracleReport {
    let closed = crate::overlap::rotation_overlap_probability(template, alpha);
    let a = template.oriented(0.0).plate_state(OamIndex(0));
    let b = template.oriented(alpha).plate_state(OamIndex(0));
    let oracle = quadrature_inner(&a, &b, quad).norm_sqr();
    OracleReport::new(
        format!("{} rotation overlap, alpha={alpha:.6}", family_name(template)),
        closed,
        oracle,
        tolerance,
        quad.cells(),
    )
}

/// Coincidences for a `q = 0` pair with every amplitude integrated by
/// quadrature from the analyzer projectors.
pub struct QuadratureFringe<'a> {
    pub signal_template: PhasePlate,
    pub quad: &'a CircleQuadrature,
}

impl CoincidenceModel for QuadratureFringe<'_> {
    fn probability(&self, x: f64, y: f64) -> f64 {
        let s = AnalyzerSetting::signal(self.signal_template.oriented(x)).projector();
        let i = AnalyzerSetting::idler(partner_plate(&self.signal_template, 0, y)).projector();
        quadrature_inner(&i, &s.conj(), self.quad).norm_sqr()
    }

    fn describe(&self) -> String {
        format!("quadrature fringe, {} cells", self.quad.cells())
    }
}

/// S from the closed-form fringe against S from [`QuadratureFringe`].
pub fn verify_bell(
    template: &PhasePlate,
    settings: &BellSettings,
    tolerance: f64,
    quad: &CircleQuadrature,
) -> Result<OracleReport> {
    let closed = chsh_s(&ClosedFringe::for_plate(template), settings)?;
    let oracle = chsh_s(
        &QuadratureFringe {
            signal_template: template.clone(),
            quad,
        },
        settings,
    )?;
    Ok(OracleReport::new(
        format!("{} CHSH S", family_name(template)),
        closed.s,
        oracle.s,
        tolerance,
        quad.cells(),
    ))
}

/// Rechecks the S = 4 zero pattern of `mask` with quadrature probabilities.
/// `closed_form` and `oracle` hold the largest should-vanish probability of
/// each route; `pass` also requires the oracle certificate to hold.
pub fn verify_certificate(
    mask: &PhasePlate,
    settings: &BellSettings,
    tolerance: f64,
    quad: &CircleQuadrature,
) -> Result<OracleReport> {
    let closed = certify_maximal(&chsh_s(&ClosedFringe::for_plate(mask), settings)?, tolerance);
    let oracle = certify_maximal(
        &chsh_s(
            &QuadratureFringe {
                signal_template: mask.clone(),
                quad,
            },
            settings,
        )?,
        tolerance,
    );
    let mut report = OracleReport::new(
        "S=4 certificate, largest vanishing P",
        closed.max_vanishing,
        oracle.max_vanishing,
        tolerance,
        quad.cells(),
    );
    report.pass &= closed.holds && oracle.holds;
    Ok(report)
}

pub(crate) fn family_name(plate: &PhasePlate) -> &'static str {
    match plate {
        PhasePlate::Spiral { .. } => "spiral",
        PhasePlate::Step { .. } => "step",
        PhasePlate::BinarySectors { .. } => "binary",
    }
}
