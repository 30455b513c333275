use super::grid::AngularGrid;
use crate::angle::wrap;
use crate::error::{OamError, Result};
use crate::special::sinc;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// `1/√(2π)`.
pub const INV_SQRT_TAU: f64 = 0.398_942_280_401_432_7;

/// Piecewise-constant phase on `[0, 2π)`.
///
/// Segment `k` starts at `segments[k].0` and holds phase `segments[k].1`
/// until the next start (or 2π). The first segment always starts at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePhase {
    segments: Vec<(f64, f64)>,
}

impl PiecewisePhase {
    pub fn constant(phase: f64) -> Self {
        PiecewisePhase {
            segments: vec![(0.0, phase)],
        }
    }

    /// Builds a profile from `initial` (phase on `[0, first jump)`) and a
    /// list of `(angle, phase)` jumps; angles are wrapped and sorted.
    pub fn from_jumps(initial: f64, jumps: &[(f64, f64)]) -> Self {
        let mut js: Vec<(f64, f64)> = jumps.iter().map(|&(a, p)| (wrap(a), p)).collect();
        js.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut segments = vec![(0.0, initial)];
        for (a, p) in js {
            let last = segments.last_mut().expect("non-empty");
            if a == last.0 {
                last.1 = p;
            } else {
                segments.push((a, p));
            }
        }
        PiecewisePhase { segments }
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }

    /// Jump list: every segment start except the leading one at θ = 0.
    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.segments[1..]
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments[1..].iter().map(|s| s.0)
    }

    /// Phase at `theta` (wrapped), half-open on the right of each segment.
    pub fn at(&self, theta: f64) -> f64 {
        let t = wrap(theta);
        let idx = self.segments.partition_point(|s| s.0 <= t);
        self.segments[idx.saturating_sub(1)].1
    }

    /// Pointwise sum of two profiles.
    pub fn add(&self, other: &PiecewisePhase) -> PiecewisePhase {
        let mut starts: Vec<f64> = self.segments.iter().chain(&other.segments).map(|s| s.0).collect();
        starts.sort_by(f64::total_cmp);
        starts.dedup();
        let segments = starts.into_iter().map(|a| (a, self.at(a) + other.at(a))).collect();
        PiecewisePhase { segments }
    }

    pub fn negate(&self) -> PiecewisePhase {
        PiecewisePhase {
            segments: self.segments.iter().map(|&(a, p)| (a, -p)).collect(),
        }
    }

    /// Iterates `(start, end, phase)` for every segment.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.segments.iter().enumerate().map(move |(k, &(a, p))| {
            let b = self.segments.get(k + 1).map_or(TAU, |s| s.0);
            (a, b, p)
        })
    }
}

/// Analytic angular state `e^{i(l+twist)θ} e^{iφ(θ)} / √(2π)` with a
/// piecewise-constant phase `φ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    /// Integer OAM base.
    pub l: i64,
    /// Real-valued addition to the winding; any real value.
    pub twist: f64,
    pub phase: PiecewisePhase,
}

impl ClosedForm {
    /// The integer OAM eigenstate `|l⟩`.
    pub fn oam(l: i64) -> Self {
        ClosedForm {
            l,
            twist: 0.0,
            phase: PiecewisePhase::constant(0.0),
        }
    }

    /// Total winding `l + twist`.
    pub fn winding(&self) -> f64 {
        self.l as f64 + self.twist
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let t = wrap(theta);
        Complex64::from_polar(INV_SQRT_TAU, self.winding() * t + self.phase.at(t))
    }

    pub fn conj(&self) -> ClosedForm {
        ClosedForm {
            l: -self.l,
            twist: -self.twist,
            phase: self.phase.negate(),
        }
    }

    /// Multiplies the state by `e^{iqθ}`.
    pub fn shift_oam(&self, q: i64) -> ClosedForm {
        ClosedForm {
            l: self.l + q,
            ..self.clone()
        }
    }

    /// Exact `∫ conj(self) other dθ`, integrated segment by segment.
    pub fn inner(&self, other: &ClosedForm) -> Complex64 {
        let kappa = (other.l - self.l) as f64 + (other.twist - self.twist);
        let diff = self.phase.negate().add(&other.phase);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b, p) in diff.pieces() {
            let width = b - a;
            if width <= 0.0 {
                continue;
            }
            let mid = 0.5 * (a + b);
            let mag = width * sinc(0.5 * kappa * width);
            acc += Complex64::from_polar(mag, kappa * mid + p);
        }
        acc / TAU
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.phase.breakpoints().collect()
    }
}

/// Complex samples on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    pub grid: AngularGrid,
    pub values: Vec<Complex64>,
}

impl Sampled {
    pub fn new(grid: AngularGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(OamError::GridMismatch {
                left: grid.n_points(),
                right: values.len(),
            });
        }
        Ok(Sampled { grid, values })
    }

    /// Rectangle rule `Σ conj(a_k) b_k · 2π/n`.
    pub fn inner(&self, other: &Sampled) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(OamError::GridMismatch {
                left: self.grid.n_points(),
                right: other.grid.n_points(),
            });
        }
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(sum * self.grid.step())
    }
}

/// An angular wavefunction in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum AngularWavefunction {
    ClosedForm(ClosedForm),
    Sampled(Sampled),
}

impl From<ClosedForm> for AngularWavefunction {
    fn from(c: ClosedForm) -> Self {
        AngularWavefunction::ClosedForm(c)
    }
}

impl From<Sampled> for AngularWavefunction {
    fn from(s: Sampled) -> Self {
        AngularWavefunction::Sampled(s)
    }
}

impl AngularWavefunction {
    pub fn oam(l: i64) -> Self {
        ClosedForm::oam(l).into()
    }

    pub fn as_closed_form(&self) -> Option<&ClosedForm> {
        match self {
            AngularWavefunction::ClosedForm(c) => Some(c),
            AngularWavefunction::Sampled(_) => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&Sampled> {
        match self {
            AngularWavefunction::Sampled(s) => Some(s),
            AngularWavefunction::ClosedForm(_) => None,
        }
    }

    /// L2 norm: exact for closed forms, rectangle rule for samples.
    pub fn norm(&self) -> f64 {
        inner_product(self, self)
            .expect("a state is always compatible with itself")
            .re
            .max(0.0)
            .sqrt()
    }
}

/// `∫₀^{2π} conj(a(θ)) b(θ) dθ`.
///
/// Two closed forms are integrated exactly; two sampled states use the
/// rectangle rule and must share a grid. A closed form paired with a
/// sampled state is first sampled onto that state's grid.
pub fn inner_product(a: &AngularWavefunction, b: &AngularWavefunction) -> Result<Complex64> {
    use AngularWavefunction::*;
    match (a, b) {
        (ClosedForm(x), ClosedForm(y)) => Ok(x.inner(y)),
        (Sampled(x), Sampled(y)) => x.inner(y),
        (ClosedForm(x), Sampled(y)) => to_sampled(x, y.grid).inner(y),
        (Sampled(x), ClosedForm(y)) => x.inner(&to_sampled(y, x.grid)),
    }
}

/// Pointwise evaluation at the grid nodes (half-open convention at jumps).
pub fn to_sampled(state: &ClosedForm, grid: AngularGrid) -> Sampled {
    let values = grid.thetas().map(|t| state.eval(t)).collect();
    Sampled { grid, values }
}
