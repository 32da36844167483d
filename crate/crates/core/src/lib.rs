//! Topology of surfaces transverse to non-singular flows on the 3-sphere,
//! computed from boundary data: linking numbers of the boundary orbits and
//! their self-linking against a transverse framing determine the Euler
//! characteristic, genus and boundary slopes of the surface.
//!
//! Module map:
//! - [`geom`]: points of S^3, closed polygons, stereographic charts, curve files.
//! - [`linking`]: exact Gauss linking numbers plus a crossing-count oracle.
//! - [`framing`]: push-offs and (rational) self-linking numbers.
//! - [`flows`]: vector fields on S^3, orbit integration and the linearized flow.
//! - [`birkhoff`]: Euler characteristic, boundary slopes and genus formulas.
//! - [`asymptotics`]: helicity estimation, Ruelle invariant and the
//!   genus/helicity experiment.

pub mod asymptotics;
pub mod birkhoff;
pub mod flows;
pub mod framing;
pub mod geom;
pub mod linking;

mod error;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use asymptotics::{FramingTriple, HelicityEstimate};
pub use birkhoff::{BoundarySlope, SectionTopology};
pub use flows::{FlowField, Integrator, OrbitArc, PeriodicOrbit};
pub use framing::{FramingField, RationalFraming, SelfLinking};
pub use geom::{Ambient, CurveFile, PolyCurve, SpherePoint, WeightedLink};
pub use linking::{linking_matrix, linking_number, Linking, LinkingMatrix};
