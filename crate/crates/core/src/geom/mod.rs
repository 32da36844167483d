//! Points on the unit 3-sphere, closed polygonal curves, and the
//! stereographic charts used to measure linking.

mod curve;
mod curve_file;
mod link;
mod projection;
mod sphere;

pub use curve::{curve_resample, curve_separation, reach_proxy, Ambient, PolyCurve};
pub use curve_file::{CurveFile, CurveRecord};
pub use link::WeightedLink;
pub use projection::{choose_pole, pole_candidates, pole_clearance, stereographic_project, POLE_GRID_SIZE};
pub use sphere::{cross4, quat_conj, quat_mul, tangent_part, SpherePoint};
pub(crate) use sphere::{angle_between_units, exp_map};
