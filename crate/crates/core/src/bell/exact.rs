//! CHSH in exact rational arithmetic for the piecewise-quadratic fringes.
//! Angles are rationals in units of π.

use crate::error::{OamError, Result};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

/// `t mod 2` in `[0, 2)`.
pub fn wrap_units(t: Q) -> Q {
    let two = Q::from_integer(2);
    t - two * (t / two).floor()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactFringe {
    /// `(1 − δ/π)²`.
    HalfSpiral,
    /// `(1 + (|δ|/π)(cos φ − 1))²` with `δ ∈ [−π, π)`; `cos φ` given exactly.
    Step {
        cos_phi: Q,
    },
    Constant(Q),
}

impl ExactFringe {
    pub fn at(&self, delta: Q) -> Q {
        let d = wrap_units(delta);
        match *self {
            ExactFringe::HalfSpiral => {
                let r = Q::one() - d;
                r * r
            }
            ExactFringe::Step { cos_phi } => {
                let m = if d < Q::one() { d } else { Q::from_integer(2) - d };
                let a = Q::one() + m * (cos_phi - Q::one());
                a * a
            }
            ExactFringe::Constant(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSettings {
    pub a1: Q,
    pub a1p: Q,
    pub a2: Q,
    pub a2p: Q,
    pub perp: Q,
}

impl ExactSettings {
    pub fn paper() -> Self {
        ExactSettings {
            a1: q(-1, 4),
            a1p: q(1, 4),
            a2: q(-1, 2),
            a2p: Q::zero(),
            perp: Q::one(),
        }
    }

    pub fn polarization() -> Self {
        ExactSettings {
            a1: q(-1, 8),
            a1p: q(1, 8),
            a2: q(-1, 4),
            a2p: Q::zero(),
            perp: q(1, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactBellResult {
    #[serde(serialize_with = "ser_q")]
    pub s: Q,
    #[serde(serialize_with = "ser_qs")]
    pub e: Vec<Q>,
    #[serde(serialize_with = "ser_qs")]
    pub p: Vec<Q>,
}

fn ser_q<S: serde::Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_qs<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Same bookkeeping as [`super::chsh_s`], exactly.
pub fn exact_chsh(fringe: ExactFringe, st: &ExactSettings) -> Result<ExactBellResult> {
    let pairs = [
        (st.a1, st.a2, 1),
        (st.a1p, st.a2, -1),
        (st.a1, st.a2p, 1),
        (st.a1p, st.a2p, 1),
    ];
    let (mut p, mut e, mut s) = (Vec::with_capacity(16), Vec::with_capacity(4), Q::zero());
    for (x, y, sign) in pairs {
        let (xp, yp) = (x + st.perp, y + st.perp);
        let terms = [
            fringe.at(y - x),
            fringe.at(yp - xp),
            fringe.at(yp - x),
            fringe.at(y - xp),
        ];
        let den = terms[0] + terms[1] + terms[2] + terms[3];
        if den.is_zero() {
            return Err(OamError::DegenerateFringe {
                x: to_f64(x) * std::f64::consts::PI,
                y: to_f64(y) * std::f64::consts::PI,
            });
        }
        let ev = (terms[0] + terms[1] - terms[2] - terms[3]) / den;
        s += Q::from_integer(sign) * ev;
        e.push(ev);
        p.extend_from_slice(&terms);
    }
    Ok(ExactBellResult { s, e, p })
}

pub fn to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_fifths() {
        let r = exact_chsh(ExactFringe::HalfSpiral, &ExactSettings::paper()).unwrap();
        assert_eq!(r.s, q(16, 5));
        for v in &r.p {
            assert_eq!(16 % v.denom(), 0, "{v}");
        }
        assert_eq!(r.e, vec![q(4, 5), q(-4, 5), q(4, 5), q(4, 5)]);
    }

    #[test]
    fn step_cases() {
        let pi_step = ExactFringe::Step { cos_phi: q(-1, 1) };
        let r = exact_chsh(pi_step, &ExactSettings::polarization()).unwrap();
        assert_eq!(r.s, q(16, 5));
        let half_step = ExactFringe::Step { cos_phi: Q::zero() };
        let r = exact_chsh(half_step, &ExactSettings::paper()).unwrap();
        assert_eq!(r.s, q(16, 5));
    }

    #[test]
    fn degenerate_and_wrap() {
        assert!(exact_chsh(ExactFringe::Constant(Q::zero()), &ExactSettings::paper()).is_err());
        let r = exact_chsh(ExactFringe::Constant(q(1, 3)), &ExactSettings::paper()).unwrap();
        assert_eq!(r.s, Q::zero());
        assert_eq!(wrap_units(q(-1, 4)), q(7, 4));
        assert_eq!(wrap_units(q(9, 2)), q(1, 2));
        assert_eq!(ExactFringe::HalfSpiral.at(q(-1, 4)), q(9, 16));
    }

    #[test]
    fn agrees_with_float_path() {
        use super::super::{chsh_s, BellSettings, ClosedFringe};
        let f = chsh_s(&ClosedFringe::Spiral { lambda: 0.5 }, &BellSettings::paper()).unwrap();
        let r = exact_chsh(ExactFringe::HalfSpiral, &ExactSettings::paper()).unwrap();
        for (a, b) in f.p.iter().zip(&r.p) {
            assert!((a - to_f64(*b)).abs() < 1e-14);
        }
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["s"], "16/5");
    }
}
