//! Fixtures shared by the benchmarks.

use birkhoff_core::flows::{fiber_curves, hopf_fiber_starts, periodic_orbit};
use birkhoff_core::framing::{FramingField, RationalFraming};
use birkhoff_core::{FlowField, Integrator, PeriodicOrbit, PolyCurve, Tolerances, WeightedLink};

/// `m` Hopf fibres with `vertices` vertices each.
pub fn hopf_fibers(m: usize, vertices: usize) -> Vec<PolyCurve> {
    fiber_curves(
        &FlowField::hopf(),
        &hopf_fiber_starts(m),
        vertices,
        &Integrator::default(),
        &Tolerances::default(),
    )
    .expect("Hopf fibres close")
}

pub fn hopf_link(m: usize, vertices: usize) -> WeightedLink {
    WeightedLink::new(hopf_fibers(m, vertices), vec![1; m], &Tolerances::default()).expect("fibres are disjoint")
}

pub fn zeta_framing(field: &FlowField) -> RationalFraming {
    RationalFraming::integral(FramingField::AmbientField(
        field.transverse_fn().expect("built-in field has a transverse field").clone(),
    ))
}

pub fn generic_orbit(field: &FlowField, vertices: usize) -> PeriodicOrbit {
    periodic_orbit(
        field,
        &FlowField::generic_point(),
        vertices,
        &Integrator::default(),
        &Tolerances::default(),
    )
    .expect("generic orbit is periodic")
}
