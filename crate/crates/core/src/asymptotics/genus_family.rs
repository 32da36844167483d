use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate_helicity, framing_triple};
use crate::flows::{periodic_orbit, FlowField, Integrator};
use crate::geom::SpherePoint;
use crate::{Error, Result, Tolerances};

/// One field of a family together with the periodic orbit followed and its
/// period.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub p: u32,
    pub q: u32,
    pub field: FlowField,
    pub start: SpherePoint,
    pub period: f64,
}

/// `X_{p,q} / sqrt(pq)` with its generic orbit, of period `2 pi sqrt(pq)`.
///
/// The rescaling keeps the helicity at `1 / (4 pi^2)` for every member while
/// the orbit periods grow.
pub fn seifert_member(p: u32, q: u32) -> Result<FamilyMember> {
    let scale = ((p as f64) * (q as f64)).sqrt();
    let field = FlowField::seifert(p, q)?.scaled(scale)?;
    Ok(FamilyMember {
        p,
        q,
        field,
        start: FlowField::generic_point(),
        period: TAU * scale,
    })
}

/// Consecutive Fibonacci pairs `(1,2), (2,3), (3,5), ...`, `depth` of them.
pub fn seifert_fibonacci_family(depth: usize) -> Result<Vec<FamilyMember>> {
    let mut out = Vec::with_capacity(depth);
    let (mut p, mut q) = (1u32, 2u32);
    for _ in 0..depth {
        out.push(seifert_member(p, q)?);
        let next = p.checked_add(q).ok_or_else(|| Error::InvalidInput("family depth overflows".into()))?;
        (p, q) = (q, next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub helicity_pairs: usize,
    pub helicity_step: f64,
    pub seed: u64,
    /// Orbit polygon vertices per unit of `p + q`, with a floor of 256.
    pub vertices_per_winding: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            helicity_pairs: 4,
            helicity_step: 0.02,
            seed: 0,
            vertices_per_winding: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenusRow {
    pub p: u32,
    pub q: u32,
    pub t_n: f64,
    pub slk_zeta: i64,
    pub genus: i64,
    pub g_over_t2: f64,
    pub slk_dx_over_t2: f64,
    pub ruelle_over_t2: f64,
    /// Helicity estimate of the member's field.
    pub helicity: f64,
    /// Half the helicity: the predicted limit of `g / t^2`.
    pub hel_ref: f64,
    /// `|g/t^2 - hel_ref| / hel_ref`.
    pub rel_dev: f64,
    /// `2 g = Slk^zeta + 1` exactly and `g/t^2` equals
    /// `Slk^zeta/(2t^2) + 1/(2t^2)` to rounding.
    pub identity_holds: bool,
}

/// Genus of the surface bounded by a single periodic orbit, `1 + (Slk - 1)/2`.
pub fn orbit_genus(slk_zeta: i64) -> Result<i64> {
    if slk_zeta.rem_euclid(2) != 1 {
        return Err(Error::ParityViolation(slk_zeta + 1));
    }
    Ok(1 + (slk_zeta - 1) / 2)
}

fn row(member: &FamilyMember, cfg: &ExperimentConfig, integrator: &Integrator, tol: &Tolerances) -> Result<GenusRow> {
    let n = (cfg.vertices_per_winding * (member.p + member.q) as usize).max(256);
    let orbit = periodic_orbit(&member.field, &member.start, n, integrator, tol)?;
    let triple = framing_triple(&member.field, &orbit, integrator, tol)?;
    if !triple.slk_zeta.is_integer() {
        return Err(Error::InvalidInput(format!("self-linking {} is not an integer", triple.slk_zeta)));
    }
    let slk = triple.slk_zeta.to_integer();
    let genus = orbit_genus(slk)?;
    let t = orbit.period();
    let t2 = t * t;
    let hel = estimate_helicity(
        &member.field,
        t,
        cfg.helicity_pairs,
        cfg.seed,
        &Integrator::with_step(cfg.helicity_step),
        tol,
    )?;
    let g_over_t2 = genus as f64 / t2;
    let hel_ref = 0.5 * hel.value;
    let symbolic = slk as f64 / (2.0 * t2) + 1.0 / (2.0 * t2);
    Ok(GenusRow {
        p: member.p,
        q: member.q,
        t_n: t,
        slk_zeta: slk,
        genus,
        g_over_t2,
        slk_dx_over_t2: triple.slk_dx / t2,
        ruelle_over_t2: triple.ruelle / t2,
        helicity: hel.value,
        hel_ref,
        rel_dev: (g_over_t2 - hel_ref).abs() / hel_ref,
        identity_holds: 2 * genus == slk + 1 && (g_over_t2 - symbolic).abs() <= 1e-15 * g_over_t2.abs().max(1.0),
    })
}

/// One row per family member, computed independently.
pub fn asymptotic_genus_experiment(
    family: &[FamilyMember],
    cfg: &ExperimentConfig,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<Vec<GenusRow>> {
    family
        .par_iter()
        .enumerate()
        .map(|(i, m)| row(m, cfg, integrator, tol).map_err(|e| e.for_component(i)))
        .collect()
}

/// Whether `rel_dev` never increases down the table.
pub fn deviation_non_increasing(rows: &[GenusRow]) -> bool {
    rows.windows(2).all(|w| w[1].rel_dev <= w[0].rel_dev)
}
