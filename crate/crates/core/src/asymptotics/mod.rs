//! Asymptotic invariants of flows: helicity as average asymptotic linking,
//! the Ruelle invariant of a periodic orbit, the relation between the three
//! natural framings of an orbit, and the genus-versus-helicity experiment.

mod framing_equation;
mod genus_family;
mod helicity;

pub use framing_equation::{
    framing_triple, ruelle_invariant, slk_flow_framing, slk_zeta, FlowFramingSlk, FramingTriple, INTEGER_TURN_TOLERANCE,
};
pub use genus_family::{
    asymptotic_genus_experiment, deviation_non_increasing, orbit_genus, seifert_fibonacci_family, seifert_member,
    ExperimentConfig, FamilyMember, GenusRow,
};
pub use helicity::{estimate_helicity, HelicityEstimate};
