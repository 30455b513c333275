//! Closed forms against the quadrature oracle on the documented examples.

use oamsim_core::oracle::{verify_overlap, QuadratureFringe};
use oamsim_core::quadrature::CircleQuadrature;
use oamsim_core::twophoton::half_spiral_fringe;
use oamsim_core::*;
use std::f64::consts::{FRAC_PI_2, PI};

const TOL: f64 = 1e-8;

#[test]
fn step_examples() {
    let quad = CircleQuadrature::default();
    let plate = PhasePlate::step(2.0 * PI / 3.0, 0.0).unwrap();
    for alpha in [-2.0, -0.4, 0.0, 1.0, 3.0] {
        let r = verify_overlap(&plate, alpha, TOL, &quad);
        assert!(r.pass, "{}", r.json_line());
    }
    // the |α| form: symmetric about zero
    let p = |a| step_overlap_probability(2.0 * PI / 3.0, a);
    assert!((p(-2.0) - p(2.0)).abs() < 1e-15);
    assert!((p(-2.0) - (1.0 - 1.5 * 2.0 / PI).powi(2)).abs() < 1e-14);
}

#[test]
fn spiral_examples() {
    let quad = CircleQuadrature::default();
    for (ell, lambda) in [(0.0, 0.0), (0.25, 0.25), (2.25, 0.25), (-0.5, 0.5), (3.7, 0.7)] {
        let plate = PhasePlate::spiral(ell, 0.0).unwrap();
        for alpha in [0.3, PI, 4.0, 6.0] {
            let r = verify_overlap(&plate, alpha, TOL, &quad);
            assert!(r.pass, "ell={ell}: {}", r.json_line());
            assert!((r.closed_form - spiral_overlap_probability(lambda, alpha)).abs() < 1e-12);
        }
    }
}

#[test]
fn binary_mask_examples() {
    let quad = CircleQuadrature::default();
    let plate = PhasePlate::binary(FRAC_PI_2, &[(0.5, 1.5), (2.5, 5.0)], 0.2).unwrap();
    for alpha in [0.1, 1.0, 2.0, 4.5] {
        let r = verify_overlap(&plate, alpha, TOL, &quad);
        assert!(r.pass, "{}", r.json_line());
    }
}

#[test]
fn coincidence_fringe_from_the_pair_state() {
    let quad = CircleQuadrature::default();
    let plate = PhasePlate::spiral(0.5, 0.0).unwrap();
    let fr = coincidence_fringe(&TwoPhotonState::new(0), &plate, 60, 1.1).unwrap();
    let oracle = QuadratureFringe {
        signal_template: plate,
        quad: &quad,
    };
    for &(d, p) in &fr.samples {
        assert!((p - half_spiral_fringe(d)).abs() < 1e-10);
        assert!((p - oracle.probability(1.1, 1.1 + d)).abs() < TOL);
    }
}

#[test]
fn bell_values_by_quadrature() {
    let quad = CircleQuadrature::default();
    for (plate, settings) in [
        (PhasePlate::spiral(0.5, 0.0).unwrap(), BellSettings::paper()),
        (PhasePlate::step(PI, 0.0).unwrap(), BellSettings::polarization()),
        (PhasePlate::step(FRAC_PI_2, 0.0).unwrap(), BellSettings::paper()),
    ] {
        let r = verify_bell(&plate, &settings, TOL, &quad).unwrap();
        assert!(r.pass, "{}", r.json_line());
        assert!((r.closed_form - 3.2).abs() < 1e-12);
    }
}
