//! Rotation overlaps: how much a plate-made state still overlaps with the
//! same state produced by the plate turned through `α`.

use crate::angle::{wrap, wrap_signed};
use crate::angular::OamIndex;
use crate::error::{OamError, Result};
use crate::io::fmt_sig;
use crate::oracle::quadrature_inner;
use crate::plates::PhasePlate;
use crate::quadrature::CircleQuadrature;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

/// `⟨a^(l+j)_λ(0)|a^(l+j)_λ(α)⟩ = (1/2π)[2π − α + α e^{i2πλ}] e^{−i(l+j+λ)α}`.
///
/// The phase factor follows the rotated-state convention; a literal
/// rotated-plate computation carries an extra `e^{ilα}` (see
/// [`crate::oracle::verify_overlap`]). Magnitudes agree exactly.
pub fn spiral_overlap_amplitude(l: OamIndex, j: i64, lambda: f64, alpha: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    let a = wrap(alpha);
    let bracket = Complex64::new(TAU - a, 0.0) + Complex64::from_polar(a, TAU * lambda);
    let winding = (l.0 + j) as f64 + lambda;
    Ok(bracket / TAU * Complex64::from_polar(1.0, -winding * a))
}

/// `(1 − α/π)² sin²(λπ) + cos²(λπ)`, independent of `l` and `j`.
pub fn spiral_overlap_probability(lambda: f64, alpha: f64) -> f64 {
    let a = wrap(alpha);
    let (s, c) = (lambda * PI).sin_cos();
    let r = 1.0 - a / PI;
    (r * r * s * s + c * c).clamp(0.0, 1.0)
}

/// Step-plate rotation amplitude `1 + (|α|/π)(cos φ − 1)` with `α` taken in
/// `[−π, π)`. Symmetric in `α`, so it never exceeds 1 in magnitude.
pub fn step_overlap_amplitude(phi: f64, alpha: f64) -> f64 {
    let a = wrap_signed(alpha).abs();
    1.0 + (a / PI) * (phi.cos() - 1.0)
}

/// Square of [`step_overlap_amplitude`].
pub fn step_overlap_probability(phi: f64, alpha: f64) -> f64 {
    let a = step_overlap_amplitude(phi, alpha);
    (a * a).clamp(0.0, 1.0)
}

/// Rotation overlap for a plate delaying a sector union `M` by `φ`:
/// `1 − (m/π)(1 − cos φ)` with `m = |M \ (M + α)|`. Real because rotation
/// preserves measure. Step plates are the half-plane case.
pub fn binary_mask_overlap(mask: &PhasePlate, alpha: f64) -> Result<Complex64> {
    let (phi, region) = match mask {
        PhasePlate::BinarySectors { phi, .. } | PhasePlate::Step { phi, .. } => {
            (*phi, mask.delayed_region().expect("sector plates have a region"))
        }
        PhasePlate::Spiral { .. } => {
            return Err(OamError::InvalidPlate(
                "binary_mask_overlap needs a sector plate".into(),
            ))
        }
    };
    let m = region.rotation_mismatch(alpha);
    let value = ((TAU - 2.0 * m) + Complex64::from_polar(m, phi) + Complex64::from_polar(m, -phi)) / TAU;
    Ok(Complex64::new(value.re, 0.0))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(OamError::InvalidParameter(format!(
            "fractional step {lambda} outside [0, 1)"
        )))
    }
}

/// Which closed form a curve instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormId {
    SpiralRotation,
    StepRotation,
    BinaryMaskRotation,
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapCurve {
    pub family: &'static str,
    /// λ for spirals, φ for step and binary plates.
    pub parameter: f64,
    pub closed_form: ClosedFormId,
    pub samples: Vec<(f64, f64)>,
}

impl OverlapCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha_rad,probability\n");
        for &(a, p) in &self.samples {
            let _ = writeln!(out, "{},{}", fmt_sig(a), fmt_sig(p));
        }
        out
    }
}

/// Rotation-overlap probability for the plate family of `template`.
pub fn rotation_overlap_probability(template: &PhasePlate, alpha: f64) -> f64 {
    match template {
        PhasePlate::Spiral { .. } => {
            let d = template.decomposition().expect("spiral");
            spiral_overlap_probability(d.lambda, alpha)
        }
        PhasePlate::Step { phi, .. } => step_overlap_probability(*phi, alpha),
        PhasePlate::BinarySectors { .. } => binary_mask_overlap(template, alpha)
            .expect("binary plate")
            .norm_sqr()
            .clamp(0.0, 1.0),
    }
}

/// Samples the rotation overlap of `template`'s family at `n_samples`
/// uniform angles in `[0, 2π)`. With `verify`, every sample is recomputed by
/// quadrature of the plate states and must agree within `tolerance`.
pub fn sample_curve(
    template: &PhasePlate,
    n_samples: usize,
    verify: Option<(&CircleQuadrature, f64)>,
) -> Result<OverlapCurve> {
    if n_samples < 2 {
        return Err(OamError::InvalidParameter(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let (family, parameter, closed_form) = match template {
        PhasePlate::Spiral { .. } => (
            "spiral",
            template.decomposition().expect("spiral").lambda,
            ClosedFormId::SpiralRotation,
        ),
        PhasePlate::Step { phi, .. } => ("step", *phi, ClosedFormId::StepRotation),
        PhasePlate::BinarySectors { phi, .. } => ("binary", *phi, ClosedFormId::BinaryMaskRotation),
    };
    let base = template.oriented(0.0).plate_state(OamIndex(0));
    let samples = (0..n_samples)
        .map(|k| {
            let alpha = TAU * k as f64 / n_samples as f64;
            let p = rotation_overlap_probability(template, alpha);
            if let Some((quad, tol)) = verify {
                let rotated = template.oriented(alpha).plate_state(OamIndex(0));
                let oracle = quadrature_inner(&base, &rotated, quad).norm_sqr();
                if (oracle - p).abs() > tol {
                    return Err(OamError::OracleMismatch {
                        quantity: format!("{family} rotation overlap at α={alpha}"),
                        closed_form: p,
                        oracle,
                    });
                }
            }
            Ok((alpha, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OverlapCurve {
        family,
        parameter,
        closed_form,
        samples,
    })
}
