//! Non-singular vector fields on S^3: RK4 orbit integration, closing arcs into
//! polygons, periodic orbits and the linearized flow along them.

mod field;
mod orbit;
mod variational;

pub use field::{left_j, FieldFn, FlowField, JacobianFn, SeifertParams, VALIDATION_SAMPLES};
pub use orbit::{close_arc, fiber_curves, hopf_fiber_starts, integrate_orbit, periodic_orbit, return_time, Integrator, OrbitArc, PeriodicOrbit};
pub use variational::{linearized_transport, transport, TransportSample};
