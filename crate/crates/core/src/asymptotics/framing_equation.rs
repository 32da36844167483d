use std::f64::consts::TAU;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::flows::{linearized_transport, FlowField, Integrator, PeriodicOrbit, TransportSample};
use crate::framing::{self_linking, FramingField, RationalFraming, SelfLinking};
use crate::{Error, Result, Tolerances};

/// Distance to the nearest integer below which the monodromy counts as a
/// whole number of turns and the push-off check runs.
pub const INTEGER_TURN_TOLERANCE: f64 = 1e-6;

fn transverse_framing(field: &FlowField) -> Result<RationalFraming> {
    let z = field
        .transverse_fn()
        .ok_or_else(|| Error::MissingTransverseField(field.name().to_string()))?;
    Ok(RationalFraming::integral(FramingField::AmbientField(z.clone())))
}

/// Self-linking of the orbit against the field's transverse framing.
pub fn slk_zeta(field: &FlowField, orbit: &PeriodicOrbit, tol: &Tolerances) -> Result<SelfLinking> {
    self_linking(orbit.curve(), &transverse_framing(field)?, tol)
}

/// Transport of the first transverse frame vector once around the orbit.
fn transport_zeta(field: &FlowField, orbit: &PeriodicOrbit, integrator: &Integrator, tol: &Tolerances) -> Result<Vec<TransportSample>> {
    if !field.has_jacobian() {
        return Err(Error::MissingJacobian(field.name().to_string()));
    }
    let start = orbit.start();
    let (e1, _) = field
        .normal_frame(start.coords())
        .ok_or_else(|| Error::MissingTransverseField(field.name().to_string()))?;
    linearized_transport(field, orbit, &e1, integrator, tol)
}

fn turns(samples: &[TransportSample]) -> f64 {
    let first = samples[0].angle.expect("transverse field present");
    let last = samples[samples.len() - 1].angle.expect("transverse field present");
    (last - first) / TAU
}

/// Number of turns the linearized flow makes against the transverse framing
/// over one period.
pub fn ruelle_invariant(field: &FlowField, orbit: &PeriodicOrbit, integrator: &Integrator, tol: &Tolerances) -> Result<f64> {
    if field.transverse_fn().is_none() {
        return Err(Error::MissingTransverseField(field.name().to_string()));
    }
    Ok(turns(&transport_zeta(field, orbit, integrator, tol)?))
}

/// Self-linking against the framing given by the differential of the flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowFramingSlk {
    /// `Slk^zeta + R`.
    pub value: f64,
    /// Linking number with the push-off along the transported vectors, when
    /// the monodromy is a whole number of turns.
    pub geometric: Option<i64>,
}

struct Measured {
    slk_zeta: SelfLinking,
    ruelle: f64,
    geometric: Option<i64>,
}

fn measure(field: &FlowField, orbit: &PeriodicOrbit, integrator: &Integrator, tol: &Tolerances) -> Result<Measured> {
    if field.transverse_fn().is_none() {
        return Err(Error::MissingTransverseField(field.name().to_string()));
    }
    let samples = transport_zeta(field, orbit, integrator, tol)?;
    let ruelle = turns(&samples);
    let slk = slk_zeta(field, orbit, tol)?;
    let geometric = if (ruelle - ruelle.round()).abs() < INTEGER_TURN_TOLERANCE {
        let n = orbit.curve().len();
        let normals = samples[..n].iter().map(|s| s.vector).collect();
        let framing = RationalFraming::integral(FramingField::ExplicitNormals(normals));
        Some(self_linking(orbit.curve(), &framing, tol)?.linking)
    } else {
        None
    };
    Ok(Measured {
        slk_zeta: slk,
        ruelle,
        geometric,
    })
}

pub fn slk_flow_framing(field: &FlowField, orbit: &PeriodicOrbit, integrator: &Integrator, tol: &Tolerances) -> Result<FlowFramingSlk> {
    let m = measure(field, orbit, integrator, tol)?;
    let value = m.slk_zeta.to_f64() + m.ruelle;
    if let Some(g) = m.geometric {
        if (g as f64 - value).abs() >= tol.eps_frame {
            return Err(Error::FramingEquationViolated {
                slk_zeta: m.slk_zeta.to_f64(),
                slk_dx: g as f64,
                ruelle: m.ruelle,
            });
        }
    }
    Ok(FlowFramingSlk {
        value,
        geometric: m.geometric,
    })
}

/// The three framings of a periodic orbit and their pairwise differences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FramingTriple {
    pub orbit: String,
    pub period: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub slk_zeta: Ratio<i64>,
    pub slk_dx: f64,
    pub ruelle: f64,
    /// Whether `slk_dx` was measured by a push-off rather than derived as
    /// `slk_zeta + ruelle`.
    pub geometric: bool,
}

fn serialize_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    if r.is_integer() {
        s.serialize_i64(*r.numer())
    } else {
        s.serialize_str(&r.to_string())
    }
}

impl FramingTriple {
    /// `|slk_zeta - (slk_dx - ruelle)|`.
    pub fn defect(&self) -> f64 {
        let z = *self.slk_zeta.numer() as f64 / *self.slk_zeta.denom() as f64;
        (z - (self.slk_dx - self.ruelle)).abs()
    }
}

/// Assembles `(Slk^zeta, Slk^DX, R)` and checks `Slk^zeta = Slk^DX - R`.
pub fn framing_triple(field: &FlowField, orbit: &PeriodicOrbit, integrator: &Integrator, tol: &Tolerances) -> Result<FramingTriple> {
    let m = measure(field, orbit, integrator, tol)?;
    let slk_dx = match m.geometric {
        Some(g) => g as f64,
        None => m.slk_zeta.to_f64() + m.ruelle,
    };
    let triple = FramingTriple {
        orbit: orbit.curve().name().to_string(),
        period: orbit.period(),
        slk_zeta: m.slk_zeta.value,
        slk_dx,
        ruelle: m.ruelle,
        geometric: m.geometric.is_some(),
    };
    if !(triple.defect() < tol.eps_frame) {
        return Err(Error::FramingEquationViolated {
            slk_zeta: m.slk_zeta.to_f64(),
            slk_dx,
            ruelle: m.ruelle,
        });
    }
    Ok(triple)
}
