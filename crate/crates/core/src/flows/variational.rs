use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::{FlowField, Integrator, PeriodicOrbit};
use crate::geom::SpherePoint;
use crate::{Error, Result, Tolerances};

/// A transported normal vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportSample {
    pub time: f64,
    pub point: Vector4<f64>,
    /// Unit vector normal to the sphere and to the flow.
    pub vector: Vector4<f64>,
    /// Unwrapped angle of `vector` in the positively oriented normal frame
    /// built from the transverse field, when the field has one.
    pub angle: Option<f64>,
}

/// Component of `v` normal to both the sphere and the flow at `x`.
fn normal_part(field: &FlowField, x: &Vector4<f64>, v: &Vector4<f64>) -> Vector4<f64> {
    let mut w = v - x * x.dot(v);
    let f = field.eval(x);
    let f = f - x * x.dot(&f);
    let ff = f.norm_squared();
    if ff > 0.0 {
        w -= f * (f.dot(&w) / ff);
    }
    w
}

fn frame_angle(field: &FlowField, x: &Vector4<f64>, v: &Vector4<f64>) -> Option<f64> {
    let (e1, e2) = field.normal_frame(x)?;
    Some(v.dot(&e2).atan2(v.dot(&e1)))
}

fn wrap(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    a - t * (a / t).round()
}

/// Integrates the variational equation `v' = DX(x) v` along the orbit of
/// `start`, reporting the normalized normal component at every time in
/// `times` (non-decreasing, starting at or after 0).
pub fn transport(
    field: &FlowField,
    start: &SpherePoint,
    times: &[f64],
    v0: &Vector4<f64>,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<Vec<TransportSample>> {
    if !field.has_jacobian() {
        return Err(Error::MissingJacobian(field.name().to_string()));
    }
    integrator.validate()?;
    if times.iter().any(|t| !t.is_finite()) || times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("transport times must be non-decreasing and non-negative".into()));
    }
    let jac = |x: &Vector4<f64>| -> Matrix4<f64> { field.jacobian(x).expect("checked above") };
    let mut x = *start.coords();
    let w = normal_part(field, &x, v0);
    let vnorm = v0.norm();
    if !(vnorm.is_finite() && vnorm > 0.0) || w.norm() <= tol.eps_ang * vnorm {
        return Err(Error::InvalidInput("initial vector is not normal to the flow".into()));
    }
    let mut v = w.normalize();
    let mut raw = frame_angle(field, &x, &v);
    let mut unwrapped = raw;

    let mut out = Vec::with_capacity(times.len());
    let mut now = 0.0;
    for &target in times {
        let span = target - now;
        let steps = integrator.steps_for(span)?;
        if steps > 0 {
            let h = span / steps as f64;
            for _ in 0..steps {
                let k1x = field.eval(&x);
                let k1v = jac(&x) * v;
                let x2 = x + k1x * (0.5 * h);
                let v2 = v + k1v * (0.5 * h);
                let k2x = field.eval(&x2);
                let k2v = jac(&x2) * v2;
                let x3 = x + k2x * (0.5 * h);
                let v3 = v + k2v * (0.5 * h);
                let k3x = field.eval(&x3);
                let k3v = jac(&x3) * v3;
                let x4 = x + k3x * h;
                let v4 = v + k3v * h;
                let k4x = field.eval(&x4);
                let k4v = jac(&x4) * v4;
                x += (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0);
                x /= x.norm();
                v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
                v = normal_part(field, &x, &v);
                let n = v.norm();
                if !(n.is_finite() && n > 0.0) {
                    return Err(Error::InvalidInput("transported vector collapsed onto the flow".into()));
                }
                v /= n;
                if let (Some(prev), Some(acc)) = (raw, unwrapped) {
                    let next = frame_angle(field, &x, &v).ok_or_else(|| Error::MissingTransverseField(field.name().into()))?;
                    unwrapped = Some(acc + wrap(next - prev));
                    raw = Some(next);
                }
            }
        }
        now = target;
        out.push(TransportSample {
            time: target,
            point: x,
            vector: v,
            angle: unwrapped,
        });
    }
    Ok(out)
}

/// Transport of `v0` along a periodic orbit: one sample per orbit vertex plus
/// a final sample after one full period.
pub fn linearized_transport(
    field: &FlowField,
    orbit: &PeriodicOrbit,
    v0: &Vector4<f64>,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<Vec<TransportSample>> {
    let mut times = orbit.times().to_vec();
    times.push(orbit.period());
    transport(field, &orbit.start(), &times, v0, integrator, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::periodic_orbit;
    use crate::geom::quat_mul;
    use std::f64::consts::TAU;

    #[test]
    fn hopf_transport_turns_twice_against_zeta() {
        let f = FlowField::hopf();
        let tol = Tolerances::default();
        let integ = Integrator::default();
        let orbit = periodic_orbit(&f, &FlowField::generic_point(), 64, &integ, &tol).unwrap();
        let x0 = *orbit.start().coords();
        let v0 = quat_mul(&Vector4::new(0.0, 0.0, 1.0, 0.0), &x0);
        let samples = linearized_transport(&f, &orbit, &v0, &integ, &tol).unwrap();
        assert_eq!(samples.len(), 65);
        let last = samples.last().unwrap();
        assert!((last.vector - v0).norm() < 1e-8);
        let turn = (last.angle.unwrap() - samples[0].angle.unwrap()) / TAU;
        assert!((turn - 2.0).abs() < 1e-8, "{turn}");
        // The exact variational solution is left multiplication by e^{it}.
        for s in &samples {
            let rot = Vector4::new(s.time.cos(), s.time.sin(), 0.0, 0.0);
            assert!((s.vector - quat_mul(&rot, &v0)).norm() < 1e-8);
        }
    }

    #[test]
    fn rejects_tangent_initial_vector() {
        let f = FlowField::hopf();
        let p = FlowField::generic_point();
        let tangent = f.eval(p.coords());
        let r = transport(&f, &p, &[1.0], &tangent, &Integrator::default(), &Tolerances::default());
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_duration_keeps_vector() {
        let f = FlowField::hopf();
        let p = FlowField::generic_point();
        let v0 = quat_mul(&Vector4::new(0.0, 0.0, 0.0, 1.0), p.coords());
        let s = transport(&f, &p, &[0.0], &v0, &Integrator::default(), &Tolerances::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].vector - v0).norm() < 1e-15);
    }

    #[test]
    fn needs_jacobian() {
        let hopf = FlowField::hopf();
        let f = FlowField::new("plain", move |x| hopf.eval(x));
        let p = FlowField::generic_point();
        let v0 = quat_mul(&Vector4::new(0.0, 0.0, 1.0, 0.0), p.coords());
        let r = transport(&f, &p, &[1.0], &v0, &Integrator::default(), &Tolerances::default());
        assert!(matches!(r, Err(Error::MissingJacobian(_))));
    }
}
