use nalgebra::Vector4;

use super::curve::{Ambient, PolyCurve};
use super::sphere::{angle_between_units, quat_conj, quat_mul, SpherePoint};
use crate::{Error, Result, Tolerances};

/// Number of low-discrepancy candidates examined by [`choose_pole`], on top
/// of the eight signed coordinate axes.
pub const POLE_GRID_SIZE: usize = 256;

/// Stereographic projection from `pole` to R^3.
///
/// The sphere is first rotated by the left quaternion multiplication taking
/// `pole` to `(0, 0, 0, 1)`, then projected by `x -> (x1, x2, x3) / (1 - x4)`.
/// Left multiplication lies in SO(4), so every pole induces the same
/// orientation on the image and linking numbers agree across poles.
pub fn stereographic_project(
    curve: &PolyCurve,
    pole: &SpherePoint,
    tol: &Tolerances,
) -> Result<PolyCurve> {
    if curve.ambient() != Ambient::S3 {
        return Err(Error::InvalidInput(
            "stereographic projection needs a curve on S^3".into(),
        ));
    }
    let pc = pole.coords();
    for (i, v) in curve.vertices().iter().enumerate() {
        let d = angle_between_units(v, pc);
        if d <= tol.delta_pole {
            return Err(Error::PoleTooClose {
                vertex: i,
                distance: d,
                min: tol.delta_pole,
            });
        }
    }
    let rot = rotation_to_north(pole);
    let projected = curve
        .vertices()
        .iter()
        .map(|v| {
            let y = quat_mul(&rot, v);
            let s = 1.0 / (1.0 - y[3]);
            Vector4::new(y[0] * s, y[1] * s, y[2] * s, 0.0)
        })
        .collect();
    PolyCurve::build(curve.name().to_string(), Ambient::R3, projected, Some(*pole))
}

fn rotation_to_north(pole: &SpherePoint) -> Vector4<f64> {
    let k = Vector4::new(0.0, 0.0, 0.0, 1.0);
    quat_mul(&k, &quat_conj(pole.coords()))
}

/// Deterministic pole candidates: the signed axes (north pole first) followed
/// by a Kronecker sequence mapped uniformly onto S^3 through Hopf coordinates.
pub fn pole_candidates() -> Vec<SpherePoint> {
    let mut out = Vec::with_capacity(8 + POLE_GRID_SIZE);
    for axis in [3usize, 2, 1, 0] {
        for sign in [1.0, -1.0] {
            out.push(SpherePoint::normalize(Vector4::ith(axis, sign)).unwrap());
        }
    }
    // Generalized golden ratio for three dimensions: the real root of x^4 = x + 1.
    let g = 1.220_744_084_605_759_5_f64;
    let alpha = [1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)];
    let tau = std::f64::consts::TAU;
    for n in 1..=POLE_GRID_SIZE {
        let u: Vec<f64> = alpha
            .iter()
            .map(|a| (0.5 + a * n as f64).fract())
            .collect();
        let (r1, r2) = (u[0].sqrt(), (1.0 - u[0]).sqrt());
        let p = Vector4::new(
            r1 * (tau * u[1]).cos(),
            r1 * (tau * u[1]).sin(),
            r2 * (tau * u[2]).cos(),
            r2 * (tau * u[2]).sin(),
        );
        out.push(SpherePoint::normalize(p).unwrap());
    }
    out
}

/// Candidate pole farthest (in minimum spherical distance) from every vertex.
/// Ties keep the earlier candidate.
pub fn choose_pole(curves: &[&PolyCurve], tol: &Tolerances) -> Result<SpherePoint> {
    if curves.is_empty() {
        return Err(Error::InvalidInput("choose_pole needs at least one curve".into()));
    }
    if curves.iter().any(|c| c.ambient() != Ambient::S3) {
        return Err(Error::InvalidInput("choose_pole needs curves on S^3".into()));
    }
    let mut best: Option<(f64, SpherePoint)> = None;
    for cand in pole_candidates() {
        let c = cand.coords();
        let max_dot = curves
            .iter()
            .flat_map(|curve| curve.vertices().iter())
            .map(|v| v.dot(c))
            .fold(f64::NEG_INFINITY, f64::max);
        let dist = max_dot.clamp(-1.0, 1.0).acos();
        if best.as_ref().is_none_or(|(d, _)| dist > *d) {
            best = Some((dist, cand));
        }
    }
    let (dist, pole) = best.expect("candidate set is non-empty");
    if dist <= tol.delta_pole {
        return Err(Error::NoValidPole {
            min: tol.delta_pole,
        });
    }
    Ok(pole)
}

/// Minimum spherical distance from `pole` to the vertices of `curves`.
pub fn pole_clearance(curves: &[&PolyCurve], pole: &SpherePoint) -> f64 {
    curves
        .iter()
        .flat_map(|c| c.vertices().iter())
        .map(|v| angle_between_units(v, pole.coords()))
        .fold(f64::INFINITY, f64::min)
}
