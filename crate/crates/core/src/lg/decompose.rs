//! Modal decomposition of a plate-shaped beam into LG modes.

use super::{radial_column, radial_profile, radial_rule_order, LgMode};
use crate::angular::{oam_spectrum, AngularWavefunction, ClosedForm, OamIndex};
use crate::error::{OamError, Result};
use crate::io::fmt_sig;
use crate::plates::PhasePlate;
use crate::quadrature::gauss_legendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Half-width of the default `l` window around the plate step.
pub const DEFAULT_L_HALF_WIDTH: i64 = 60;
pub const DEFAULT_P_MAX: u32 = 120;
/// How often an incomplete window is doubled before giving up.
const MAX_EXPANSIONS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecomposeWindow {
    pub l_min: i64,
    pub l_max: i64,
    pub p_max: u32,
    /// Radial Gauss–Laguerre order; `None` picks the exact-product default.
    pub quad_order: Option<usize>,
}

impl DecomposeWindow {
    /// `|l − ℓ| ≤ 60`, `p ≤ 120` around the plate's step (or the input index
    /// for sector plates).
    pub fn around(center: f64) -> Self {
        let c = center.round() as i64;
        DecomposeWindow {
            l_min: c - DEFAULT_L_HALF_WIDTH,
            l_max: c + DEFAULT_L_HALF_WIDTH,
            p_max: DEFAULT_P_MAX,
            quad_order: None,
        }
    }

    fn widened(&self) -> Self {
        let mid = (self.l_min + self.l_max) / 2;
        let half = ((self.l_max - self.l_min) / 2).max(1);
        DecomposeWindow {
            l_min: mid - 2 * half,
            l_max: mid + 2 * half,
            ..*self
        }
    }

    fn deepened(&self) -> Self {
        DecomposeWindow {
            p_max: 2 * self.p_max.max(1),
            quad_order: self.quad_order.map(|o| 2 * o),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LgEntry {
    pub l: i64,
    pub p: u32,
    pub coefficient: Complex64,
    pub power: f64,
    pub cumulative_power: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LgDecomposition {
    /// Every computed mode, greedy order (descending power).
    pub entries: Vec<LgEntry>,
    pub ordering: &'static str,
    pub window: DecomposeWindow,
    pub target_power: f64,
    /// Modes needed to reach `target_power`, if the window allows it.
    pub count_at_target: Option<usize>,
    /// Cumulative power after `count_at_target` modes (or all modes).
    pub achieved_power: f64,
    /// Angular power outside the `l` window.
    pub angular_tail: f64,
    /// `1 − Σ entries − angular_tail`: radial truncation inside the window.
    pub residual: f64,
    pub incomplete: bool,
}

impl LgDecomposition {
    pub fn total_power(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.cumulative_power)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("l,p,re,im,power,cumulative_power\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                e.l,
                e.p,
                fmt_sig(e.coefficient.re),
                fmt_sig(e.coefficient.im),
                fmt_sig(e.power),
                fmt_sig(e.cumulative_power)
            );
        }
        out
    }
}

fn plate_output(plate: &PhasePlate, input: &LgMode) -> ClosedForm {
    plate.apply_closed(&ClosedForm::oam(input.l.0))
}

/// Coefficients `⟨u_{lp}|P u_in⟩` over the window, greedy-accumulated until
/// `target_power`.
pub fn decompose_plate_output(
    plate: &PhasePlate,
    input: &LgMode,
    window: DecomposeWindow,
    target_power: f64,
) -> Result<LgDecomposition> {
    if window.l_min > window.l_max {
        return Err(OamError::InvalidParameter("empty l window".into()));
    }
    if !(0.0..=1.0).contains(&target_power) {
        return Err(OamError::InvalidParameter(format!(
            "target power {target_power} outside [0, 1]"
        )));
    }
    let state: AngularWavefunction = plate_output(plate, input).into();
    let spectrum = oam_spectrum(&state, OamIndex(window.l_min), OamIndex(window.l_max))?;
    let l_abs_max = window.l_min.unsigned_abs().max(window.l_max.unsigned_abs()) as u32;
    let in_abs = input.l.0.unsigned_abs() as u32;
    let order = window
        .quad_order
        .unwrap_or_else(|| radial_rule_order(window.p_max + input.p, l_abs_max + in_abs));

    // one radial column per distinct |l|
    let mut orders: Vec<u32> = (window.l_min..=window.l_max).map(|l| l.unsigned_abs() as u32).collect();
    orders.sort_unstable();
    orders.dedup();
    let columns: Vec<(u32, Vec<f64>)> = orders
        .par_iter()
        .map(|&a| (a, radial_column(a, window.p_max, input, order)))
        .collect();
    let column = |a: u32| &columns[columns.binary_search_by_key(&a, |c| c.0).expect("present")].1;

    let mut entries: Vec<LgEntry> = Vec::new();
    for &(l, amp) in &spectrum.amplitudes {
        for (p, &rho) in column(l.unsigned_abs() as u32).iter().enumerate() {
            let coefficient = amp * rho;
            entries.push(LgEntry {
                l,
                p: p as u32,
                coefficient,
                power: coefficient.norm_sqr(),
                cumulative_power: 0.0,
            });
        }
    }
    entries.sort_by(|a, b| b.power.total_cmp(&a.power).then(a.l.cmp(&b.l)).then(a.p.cmp(&b.p)));
    let mut acc = 0.0;
    let mut count_at_target = None;
    for (k, e) in entries.iter_mut().enumerate() {
        acc += e.power;
        e.cumulative_power = acc;
        if count_at_target.is_none() && acc >= target_power {
            count_at_target = Some(k + 1);
        }
    }
    let achieved_power = match count_at_target {
        Some(n) => entries[n - 1].cumulative_power,
        None => acc,
    };
    Ok(LgDecomposition {
        entries,
        ordering: "greedy_by_power",
        window,
        target_power,
        count_at_target,
        achieved_power,
        angular_tail: spectrum.residual,
        residual: 1.0 - acc - spectrum.residual,
        incomplete: count_at_target.is_none(),
    })
}

/// [`decompose_plate_output`] with the default window, expanded while the
/// target is out of reach: the `l` range doubles when the angular power
/// inside it cannot reach the target, the `p` range doubles otherwise.
pub fn decompose_auto(plate: &PhasePlate, input: &LgMode, target_power: f64) -> Result<LgDecomposition> {
    let center = input.l.0 as f64
        + match plate {
            PhasePlate::Spiral { ell, .. } => *ell,
            _ => 0.0,
        };
    let mut window = DecomposeWindow::around(center);
    let mut result = decompose_plate_output(plate, input, window, target_power)?;
    for _ in 0..MAX_EXPANSIONS {
        if !result.incomplete {
            break;
        }
        window = if 1.0 - result.angular_tail < target_power {
            window.widened()
        } else {
            window.deepened()
        };
        result = decompose_plate_output(plate, input, window, target_power)?;
    }
    Ok(result)
}

/// Power of `P u_in − Σ entries` over the plane. The azimuthal integral is
/// done per `l` column (the angular basis is orthonormal); the radial one by
/// Gauss–Legendre on `[0, r_max]` from pointwise mode profiles. Columns
/// outside the window contribute their angular power.
pub fn reconstruction_residual(
    decomp: &LgDecomposition,
    plate: &PhasePlate,
    input: &LgMode,
    radial_nodes: usize,
    r_max: f64,
) -> Result<f64> {
    let w = &decomp.window;
    let state: AngularWavefunction = plate_output(plate, input).into();
    let spectrum = oam_spectrum(&state, OamIndex(w.l_min), OamIndex(w.l_max))?;
    let rule = gauss_legendre(radial_nodes);
    let half = 0.5 * r_max;
    let w0 = input.w0;
    let inside: f64 = spectrum
        .amplitudes
        .par_iter()
        .map(|&(l, amp)| {
            let modes: Vec<&LgEntry> = decomp.entries.iter().filter(|e| e.l == l).collect();
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &wt)| {
                    let r = half * (t + 1.0);
                    let mut diff = amp * radial_profile(input, r);
                    for e in &modes {
                        let m = LgMode {
                            l: OamIndex(l),
                            p: e.p,
                            w0,
                        };
                        diff -= e.coefficient * radial_profile(&m, r);
                    }
                    wt * half * r * diff.norm_sqr()
                })
                .sum::<f64>()
        })
        .sum();
    Ok(inside + spectrum.residual)
}
