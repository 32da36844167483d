use std::f64::consts::{PI, TAU};

use birkhoff_core::asymptotics::{estimate_helicity, framing_triple, ruelle_invariant, slk_flow_framing};
use birkhoff_core::flows::{periodic_orbit, FlowField, Integrator, PeriodicOrbit};
use birkhoff_core::{SpherePoint, Tolerances};
use num_rational::Ratio;

fn orbit(field: &FlowField, n: usize) -> PeriodicOrbit {
    periodic_orbit(field, &FlowField::generic_point(), n, &Integrator::default(), &Tolerances::default()).unwrap()
}

#[test]
fn seifert_pairs_link_pq_times() {
    let f = FlowField::seifert(2, 3).unwrap();
    let est = estimate_helicity(&f, TAU, 6, 3, &Integrator::default(), &Tolerances::default()).unwrap();
    assert_eq!(est.mean_linking, 6.0);
    assert_eq!(est.stderr, 0.0);
    assert!((est.value - 6.0 / (4.0 * PI * PI)).abs() < 1e-12);
}

#[test]
fn scaling_contract() {
    let tol = Tolerances::default();
    let integ = Integrator::default();
    let c = 3.0;
    let f = FlowField::hopf();
    let slow = FlowField::hopf().scaled(c).unwrap();
    let a = estimate_helicity(&f, TAU, 4, 11, &integ, &tol).unwrap();
    let b = estimate_helicity(&slow, c * TAU, 4, 11, &integ, &tol).unwrap();
    assert_eq!(a.mean_linking, b.mean_linking);
    assert!((b.value - a.value / (c * c)).abs() <= 1e-15 * a.value);
}

#[test]
fn partial_arcs_give_positive_terms() {
    // Arcs shorter than a period close with geodesic segments; the linking
    // of such closures is still non-negative for the Hopf field.
    let est = estimate_helicity(&FlowField::hopf(), 5.0, 12, 5, &Integrator::default(), &Tolerances::default()).unwrap();
    assert!(est.value >= 0.0);
    assert!(est.mean_linking >= 0.0);
}

#[test]
fn framing_equation_on_builtin_fibers() {
    let tol = Tolerances::default();
    let integ = Integrator::default();
    for (p, q, slk) in [(1, 1, -1), (2, 3, 1), (3, 5, 7)] {
        let f = FlowField::seifert(p, q).unwrap();
        let o = orbit(&f, 64 * (p + q) as usize);
        let t = framing_triple(&f, &o, &integ, &tol).unwrap();
        assert!(t.defect() < 1e-3, "{t:?}");
        assert_eq!(t.slk_zeta, Ratio::from_integer(slk));
        assert!((t.ruelle - (p + q) as f64).abs() < 1e-6, "{t:?}");
        assert_eq!(t.slk_dx, (p * q) as f64);
    }
}

#[test]
fn triple_converges_in_step() {
    let tol = Tolerances::default();
    let f = FlowField::hopf();
    let o = orbit(&f, 128);
    let coarse = framing_triple(&f, &o, &Integrator::with_step(1e-2), &tol).unwrap();
    let fine = framing_triple(&f, &o, &Integrator::with_step(2.5e-3), &tol).unwrap();
    assert_eq!(coarse.slk_zeta, fine.slk_zeta);
    assert!((coarse.slk_dx - fine.slk_dx).abs() < 1e-6);
    assert!((coarse.ruelle - fine.ruelle).abs() < 1e-6);
}

#[test]
fn exceptional_fiber_of_seifert_field() {
    // The core circle z2 = 0 of X_{2,3} has period pi and is an unknot.
    let tol = Tolerances::default();
    let integ = Integrator::default();
    let f = FlowField::seifert(2, 3).unwrap();
    let core = SpherePoint::from_complex((1.0, 0.0), (0.0, 0.0)).unwrap();
    let o = periodic_orbit(&f, &core, 128, &integ, &tol).unwrap();
    assert!((o.period() - PI).abs() < 1e-15);
    let t = framing_triple(&f, &o, &integ, &tol).unwrap();
    assert!(t.defect() < 1e-3);
    let r = ruelle_invariant(&f, &o, &integ, &tol).unwrap();
    assert!((r - t.ruelle).abs() < 1e-12);
    let s = slk_flow_framing(&f, &o, &integ, &tol).unwrap();
    assert!((s.value - t.slk_dx).abs() < 1e-3);
}
