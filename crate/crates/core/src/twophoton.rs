//! Down-converted photon pairs and coincidence detection behind phase
//! plates.
//!
//! The angular pair state is `C Σ_n |a^n_λ⟩_s |a^(q−n−1)_λ⟩_i` for the
//! half-integer basis, which equals `C e^{iqθ} δ(θ_s − θ_i)` in the angle
//! representation. An analyzer made of plate `P` followed by a single-mode
//! fiber projects onto `P†|0⟩`.

use crate::angle::wrap;
use crate::angular::{ClosedForm, NonIntegerOamState, OamIndex};
use crate::error::{OamError, Result};
use crate::io::fmt_sig;
use crate::plates::PhasePlate;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

/// Tolerance for treating a spiral step as exactly half-integer, and for
/// the angular-momentum conservation check.
const INDEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPhotonState {
    /// Pump OAM `q`.
    pub q: i64,
    /// Fractional offset of the basis used for Schmidt expansions.
    pub basis_lambda: f64,
    /// Overall normalization `C`. Defaults to 1.
    pub c: Complex64,
}

impl TwoPhotonState {
    pub fn new(q: i64) -> Self {
        TwoPhotonState {
            q,
            basis_lambda: 0.5,
            c: Complex64::new(1.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    Signal,
    Idler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzerSetting {
    pub plate: PhasePlate,
    pub arm: Arm,
}

impl AnalyzerSetting {
    pub fn signal(plate: PhasePlate) -> Self {
        AnalyzerSetting {
            plate,
            arm: Arm::Signal,
        }
    }

    pub fn idler(plate: PhasePlate) -> Self {
        AnalyzerSetting { plate, arm: Arm::Idler }
    }

    /// The state the analyzer projects onto, `P†|0⟩`.
    pub fn projector(&self) -> ClosedForm {
        self.plate.adjoint().plate_state(OamIndex(0))
    }
}

/// Idler index paired with signal index `n` for pump OAM `q`.
pub fn schmidt_pairing(q: i64, n: i64) -> i64 {
    q - n - 1
}

/// The plate an idler analyzer needs to be the conservation partner of
/// `signal` at pump OAM `q`, turned to `alpha`.
///
/// Spirals take step `−ℓ_s − q`; sector plates take the conjugate delay.
pub fn partner_plate(signal: &PhasePlate, q: i64, alpha: f64) -> PhasePlate {
    match signal {
        PhasePlate::Spiral { ell, .. } => PhasePlate::Spiral {
            ell: -ell - q as f64,
            alpha: wrap(alpha),
        },
        other => other.adjoint().oriented(alpha),
    }
}

/// Idler angular state left after the signal analyzer clicks,
/// `conj(s(θ)) e^{iqθ}` (unnormalized by `C`).
pub fn collapsed_idler(state: &TwoPhotonState, signal: &AnalyzerSetting) -> ClosedForm {
    signal.projector().conj().shift_oam(state.q)
}

/// For a half-integer spiral signal analyzer `Ŝ(α_s, j + 1/2)` the idler is
/// left in `|a^(q+j)_{1/2}(α_s)⟩` up to a global phase.
pub fn collapse_idler(state: &TwoPhotonState, signal: &AnalyzerSetting) -> Result<NonIntegerOamState> {
    if signal.arm != Arm::Signal {
        return Err(OamError::UnsupportedAnalyzer(
            "collapse needs a signal-arm analyzer".into(),
        ));
    }
    if (state.basis_lambda - 0.5).abs() > INDEX_TOL {
        return Err(OamError::Unsupported(
            "collapse to a basis state needs the half-integer basis".into(),
        ));
    }
    match &signal.plate {
        PhasePlate::Spiral { alpha, .. } => {
            let d = signal.plate.decomposition().expect("spiral");
            if (d.lambda - 0.5).abs() > INDEX_TOL {
                return Err(OamError::UnsupportedAnalyzer(format!(
                    "spiral step {} is not half-integer",
                    d.ell
                )));
            }
            NonIntegerOamState::new(state.q + d.j, 0.5, *alpha)
        }
        _ => Err(OamError::UnsupportedAnalyzer(
            "collapse to a basis state needs a spiral analyzer".into(),
        )),
    }
}

/// Coincidence amplitude `C ∫ e^{iqθ} conj(s(θ)) conj(i(θ)) dθ`.
///
/// Both analyzers must belong to the same plate family. Spiral settings must
/// satisfy `ℓ_s + ℓ_i + q = 0`.
pub fn coincidence_amplitude(
    state: &TwoPhotonState,
    signal: &AnalyzerSetting,
    idler: &AnalyzerSetting,
) -> Result<Complex64> {
    check_arms(signal, idler)?;
    check_pair(state, &signal.plate, &idler.plate)?;
    let collapsed = collapsed_idler(state, signal);
    Ok(state.c * idler.projector().inner(&collapsed))
}

fn check_arms(signal: &AnalyzerSetting, idler: &AnalyzerSetting) -> Result<()> {
    if signal.arm != Arm::Signal || idler.arm != Arm::Idler {
        return Err(OamError::UnsupportedAnalyzer(
            "expected one signal and one idler analyzer".into(),
        ));
    }
    Ok(())
}

fn check_pair(state: &TwoPhotonState, signal: &PhasePlate, idler: &PhasePlate) -> Result<()> {
    match (signal, idler) {
        (PhasePlate::Spiral { ell: ls, .. }, PhasePlate::Spiral { ell: li, .. }) => {
            let excess = ls + li + state.q as f64;
            if excess.abs() > INDEX_TOL {
                Err(OamError::UnsupportedAnalyzer(format!(
                    "spiral steps {ls} and {li} violate conservation with pump OAM {} (excess {excess})",
                    state.q
                )))
            } else {
                Ok(())
            }
        }
        (PhasePlate::Step { .. }, PhasePlate::Step { .. })
        | (PhasePlate::BinarySectors { .. }, PhasePlate::BinarySectors { .. }) => Ok(()),
        _ => Err(OamError::UnsupportedAnalyzer(
            "signal and idler plates belong to different families".into(),
        )),
    }
}

/// Schmidt-sum route to the coincidence amplitude, truncated at `|n| ≤ n_max`.
/// Returns the amplitude and a Cauchy–Schwarz bound on the truncation error.
pub fn schmidt_sum_amplitude(
    state: &TwoPhotonState,
    signal: &AnalyzerSetting,
    idler: &AnalyzerSetting,
    n_max: i64,
) -> Result<(Complex64, f64)> {
    check_arms(signal, idler)?;
    if (state.basis_lambda - 0.5).abs() > INDEX_TOL {
        return Err(OamError::Unsupported(
            "Schmidt pairing q−n−1 holds for the half-integer basis".into(),
        ));
    }
    let s = signal.projector();
    let i = idler.projector();
    let basis = |n: i64| NonIntegerOamState::new(n, 0.5, 0.0).expect("valid").to_closed_form();
    let (mut acc, mut ps, mut pi) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
    for n in -n_max..=n_max {
        let cs = s.inner(&basis(n));
        let ci = i.inner(&basis(schmidt_pairing(state.q, n)));
        acc += cs * ci;
        ps += cs.norm_sqr();
        pi += ci.norm_sqr();
    }
    let bound = (1.0 - ps).max(0.0).sqrt() * (1.0 - pi).max(0.0).sqrt();
    Ok((state.c * acc, state.c.norm() * bound))
}

#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceFringe {
    pub family: &'static str,
    pub parameter: f64,
    pub q: i64,
    pub normalization: &'static str,
    pub samples: Vec<(f64, f64)>,
}

impl CoincidenceFringe {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("delta_rad,coincidence_probability\n");
        for &(d, p) in &self.samples {
            let _ = writeln!(out, "{},{}", fmt_sig(d), fmt_sig(p));
        }
        out
    }

    /// Run metadata without the samples.
    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.family,
            "parameter": self.parameter,
            "q": self.q,
            "n_samples": self.samples.len(),
            "normalization": self.normalization,
        })
    }
}

/// Coincidence probability against the relative orientation
/// `δ = α_i − α_s`, sampled at `n_samples` points in `[0, 2π)`, with the
/// signal analyzer fixed at `offset`. `signal_template` fixes the family and
/// its parameter; the idler is its conservation partner.
pub fn coincidence_fringe(
    state: &TwoPhotonState,
    signal_template: &PhasePlate,
    n_samples: usize,
    offset: f64,
) -> Result<CoincidenceFringe> {
    if n_samples < 2 {
        return Err(OamError::InvalidParameter(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let (family, parameter) = match signal_template {
        PhasePlate::Spiral { .. } => ("spiral", signal_template.decomposition().expect("spiral").lambda),
        PhasePlate::Step { phi, .. } => ("step", *phi),
        PhasePlate::BinarySectors { phi, .. } => ("binary", *phi),
    };
    let signal = AnalyzerSetting::signal(signal_template.oriented(offset));
    let collapsed = collapsed_idler(state, &signal);
    let samples = (0..n_samples)
        .map(|k| {
            let delta = TAU * k as f64 / n_samples as f64;
            let idler = partner_plate(signal_template, state.q, offset + delta);
            let amp = state.c * AnalyzerSetting::idler(idler).projector().inner(&collapsed);
            (delta, amp.norm_sqr())
        })
        .collect();
    Ok(CoincidenceFringe {
        family,
        parameter,
        q: state.q,
        normalization: "C=1",
        samples,
    })
}

/// `(1 − δ/π)²`, the half-integer spiral coincidence fringe.
pub fn half_spiral_fringe(delta: f64) -> f64 {
    let r = 1.0 - wrap(delta) / PI;
    r * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::{spiral_overlap_probability, step_overlap_probability};
    use crate::quadrature::CircleQuadrature;
    use std::f64::consts::FRAC_PI_2;

    fn spiral(ell: f64, alpha: f64) -> PhasePlate {
        PhasePlate::spiral(ell, alpha).unwrap()
    }

    #[test]
    fn pairing() {
        assert_eq!(schmidt_pairing(0, 0), -1);
        assert_eq!(schmidt_pairing(0, -1), 0);
        assert_eq!(schmidt_pairing(3, 1), 1);
    }

    #[test]
    fn schmidt_bracket_is_diagonal_on_the_pairing() {
        // ∫ e^{iqθ} conj(a^n) conj(a^m) dθ, by quadrature
        let quad = CircleQuadrature::new(1024, 4);
        let q = 1;
        for n in -3..=3 {
            let an = NonIntegerOamState::new(n, 0.5, 0.0).unwrap().to_closed_form();
            for m in -5..=5 {
                let am = NonIntegerOamState::new(m, 0.5, 0.0).unwrap().to_closed_form();
                let full = quad.integrate(&[], |t| {
                    Complex64::from_polar(1.0, q as f64 * t) * an.eval(t).conj() * am.eval(t).conj()
                });
                let want = if m == schmidt_pairing(q, n) { 1.0 } else { 0.0 };
                assert!((full - want).norm() < 1e-10, "n={n} m={m}: {full}");
            }
        }
    }

    #[test]
    fn collapse_examples() {
        let st = TwoPhotonState::new(0);
        let s = collapse_idler(&st, &AnalyzerSetting::signal(spiral(0.5, 0.0))).unwrap();
        assert_eq!((s.l.0, s.lambda, s.alpha), (0, 0.5, 0.0));
        let st = TwoPhotonState::new(2);
        let s = collapse_idler(&st, &AnalyzerSetting::signal(spiral(1.5, 0.7))).unwrap();
        assert_eq!((s.l.0, s.lambda), (3, 0.5));
        assert!((s.alpha - 0.7).abs() < 1e-15);
        assert!(collapse_idler(&st, &AnalyzerSetting::signal(spiral(0.3, 0.0))).is_err());
        let step = PhasePlate::step(PI, 0.0).unwrap();
        assert!(collapse_idler(&st, &AnalyzerSetting::signal(step)).is_err());
    }

    #[test]
    fn collapse_matches_the_general_state_up_to_phase() {
        for &(q, ell, alpha) in &[(0, 0.5, 0.0), (1, 1.5, 2.0), (-2, -0.5, 4.1)] {
            let st = TwoPhotonState::new(q);
            let sig = AnalyzerSetting::signal(spiral(ell, alpha));
            let general = collapsed_idler(&st, &sig);
            let basis = collapse_idler(&st, &sig).unwrap().to_closed_form();
            assert!((general.inner(&basis).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn amplitude_examples() {
        let st = TwoPhotonState::new(0);
        let a = coincidence_amplitude(
            &st,
            &AnalyzerSetting::signal(spiral(0.5, 0.0)),
            &AnalyzerSetting::idler(spiral(-0.5, 0.0)),
        )
        .unwrap();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        let a = coincidence_amplitude(
            &st,
            &AnalyzerSetting::signal(spiral(0.5, 0.0)),
            &AnalyzerSetting::idler(spiral(-0.5, PI)),
        )
        .unwrap();
        assert!(a.norm_sqr() < 1e-20);
        let bad = coincidence_amplitude(
            &st,
            &AnalyzerSetting::signal(spiral(0.5, 0.0)),
            &AnalyzerSetting::idler(spiral(0.5, 0.0)),
        );
        assert!(bad.is_err());
        let mixed = coincidence_amplitude(
            &st,
            &AnalyzerSetting::signal(spiral(0.5, 0.0)),
            &AnalyzerSetting::idler(PhasePlate::step(PI, 0.0).unwrap()),
        );
        assert!(mixed.is_err());
        let swapped = coincidence_amplitude(
            &st,
            &AnalyzerSetting::idler(spiral(0.5, 0.0)),
            &AnalyzerSetting::signal(spiral(-0.5, 0.0)),
        );
        assert!(swapped.is_err());
    }

    #[test]
    fn fringes_follow_the_single_plate_overlaps() {
        for q in [-1, 0, 2] {
            let st = TwoPhotonState::new(q);
            for &lambda in &[0.5, 0.3] {
                let f = coincidence_fringe(&st, &spiral(1.0 + lambda, 0.0), 64, 0.4).unwrap();
                for &(d, p) in &f.samples {
                    let want = spiral_overlap_probability(lambda, d);
                    assert!((p - want).abs() < 1e-10, "q={q} λ={lambda} δ={d}");
                }
            }
        }
        // step plates carry no OAM to absorb the pump, so take q = 0
        let st = TwoPhotonState::new(0);
        let f = coincidence_fringe(&st, &PhasePlate::step(FRAC_PI_2, 0.0).unwrap(), 64, 1.0).unwrap();
        for &(d, p) in &f.samples {
            assert!((p - step_overlap_probability(FRAC_PI_2, d)).abs() < 1e-10);
        }
        let f = coincidence_fringe(&TwoPhotonState::new(0), &spiral(0.5, 0.0), 4, 0.0).unwrap();
        assert!((f.samples[1].1 - 0.25).abs() < 1e-12);
        assert!(f.samples[2].1 < 1e-20);
        for &(d, p) in &f.samples {
            assert!((p - half_spiral_fringe(d)).abs() < 1e-12);
        }
        assert!(f.to_csv().starts_with("delta_rad,coincidence_probability\n"));
        assert_eq!(f.report_json()["normalization"], "C=1");
    }

    #[test]
    fn schmidt_sum_agrees_within_its_bound() {
        let st = TwoPhotonState::new(1);
        for &(as_, ai) in &[(0.0, 0.0), (0.3, 2.2), (5.0, 1.0)] {
            let sig = AnalyzerSetting::signal(spiral(0.5, as_));
            let idl = AnalyzerSetting::idler(spiral(-1.5, ai));
            let direct = coincidence_amplitude(&st, &sig, &idl).unwrap();
            let (sum, bound) = schmidt_sum_amplitude(&st, &sig, &idl, 512).unwrap();
            assert!((direct - sum).norm() <= bound + 1e-12, "{direct} {sum} {bound}");
            assert!(bound < 1e-3);
        }
    }
}
