//! Framings of closed curves, push-offs and self-linking numbers.
//!
//! A framing is sampled at the vertices and projected onto the normal plane of
//! the polygon. The push-off moves every vertex a distance `epsilon` along the
//! unit normal (geodesically on S^3). Self-linking is the linking number of the
//! curve with its push-off, divided by the longitudinal winding `k_f` of a
//! rational framing. No spanning surface is ever built.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector4;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::geom::{curve_separation, exp_map, reach_proxy, Ambient, PolyCurve};
use crate::linking::linking_number;
use crate::{Error, Result, Tolerances};

pub type AmbientFieldFn = Arc<dyn Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync>;

#[derive(Clone)]
pub enum FramingField {
    /// Restriction of a vector field on the ambient space (for S^3 curves,
    /// typically the transverse field of a flow).
    AmbientField(AmbientFieldFn),
    /// User-supplied vectors, one per vertex, or one per vertex and traversal
    /// (`k_f * n` entries) for rational framings.
    ExplicitNormals(Vec<Vector4<f64>>),
}

impl fmt::Debug for FramingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FramingField::AmbientField(_) => f.write_str("AmbientField(..)"),
            FramingField::ExplicitNormals(v) => write!(f, "ExplicitNormals({} vectors)", v.len()),
        }
    }
}

impl FramingField {
    pub fn ambient(field: impl Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync + 'static) -> Self {
        FramingField::AmbientField(Arc::new(field))
    }
}

/// A framing winding `k_f` times longitudinally.
#[derive(Debug, Clone)]
pub struct RationalFraming {
    base: FramingField,
    k_f: u32,
}

impl RationalFraming {
    pub fn new(base: FramingField, k_f: u32) -> Result<Self> {
        if k_f == 0 {
            return Err(Error::InvalidInput("k_f must be at least 1".into()));
        }
        Ok(RationalFraming { base, k_f })
    }

    /// Ordinary framing (`k_f = 1`).
    pub fn integral(base: FramingField) -> Self {
        RationalFraming { base, k_f: 1 }
    }

    pub fn base(&self) -> &FramingField {
        &self.base
    }

    pub fn k_f(&self) -> u32 {
        self.k_f
    }
}

/// Unit normal framing vectors along the `k_f`-fold traversal of `curve`.
pub fn framing_normals(curve: &PolyCurve, framing: &RationalFraming, tol: &Tolerances) -> Result<Vec<Vector4<f64>>> {
    let n = curve.len();
    let k = framing.k_f as usize;
    let raw: Vec<Vector4<f64>> = match &framing.base {
        FramingField::AmbientField(f) => {
            let once: Vec<_> = curve.vertices().iter().map(|v| f(v)).collect();
            once.iter().cycle().take(k * n).cloned().collect()
        }
        FramingField::ExplicitNormals(v) if v.len() == n => v.iter().cycle().take(k * n).cloned().collect(),
        FramingField::ExplicitNormals(v) if v.len() == k * n => v.clone(),
        FramingField::ExplicitNormals(v) => {
            return Err(Error::InvalidInput(format!(
                "{} framing vectors for {} vertices and k_f = {}",
                v.len(),
                n,
                k
            )))
        }
    };
    let min_sin = tol.eps_ang.sin();
    raw.into_iter()
        .enumerate()
        .map(|(idx, f)| {
            let i = idx % n;
            let p = curve.vertices()[i];
            let t = curve.vertex_tangent(i).normalize();
            let mut f = f;
            if curve.ambient() == Ambient::S3 {
                f -= p * p.dot(&f);
            }
            let fnorm = f.norm();
            let normal = f - t * t.dot(&f);
            let nn = normal.norm();
            if !(fnorm.is_finite() && nn.is_finite()) || nn <= tol.eps_ang || nn <= min_sin * fnorm {
                return Err(Error::DegenerateFraming { vertex: i });
            }
            Ok(normal / nn)
        })
        .collect()
}

/// The curve traversed `k_f` times, each vertex moved `epsilon` along the
/// framing.
pub fn pushoff(curve: &PolyCurve, framing: &RationalFraming, epsilon: f64, tol: &Tolerances) -> Result<PolyCurve> {
    let bound = reach_proxy(curve);
    if !(epsilon > 0.0 && epsilon < bound) {
        return Err(Error::EpsilonTooLarge { epsilon, bound });
    }
    let normals = framing_normals(curve, framing, tol)?;
    let n = curve.len();
    let vertices = normals
        .iter()
        .enumerate()
        .map(|(idx, nrm)| {
            let p = curve.vertices()[idx % n];
            match curve.ambient() {
                Ambient::R3 => p + nrm * epsilon,
                Ambient::S3 => exp_map(&p, nrm, epsilon),
            }
        })
        .collect();
    let name = format!("{}^f", curve.name());
    let pushed = PolyCurve::build(name, curve.ambient(), vertices, None)?;
    let sep = curve_separation(curve, &pushed);
    if sep <= tol.eps_sep {
        return Err(Error::EpsilonTooLarge { epsilon, bound: sep });
    }
    Ok(pushed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfLinking {
    /// `Lk(curve, pushoff) / k_f`.
    pub value: Ratio<i64>,
    /// `Lk(curve, pushoff)`.
    pub linking: i64,
    pub k_f: u32,
}

impl SelfLinking {
    pub fn to_f64(&self) -> f64 {
        *self.value.numer() as f64 / *self.value.denom() as f64
    }
}

/// Self-linking at one explicit push-off distance.
pub fn self_linking_at(curve: &PolyCurve, framing: &RationalFraming, epsilon: f64, tol: &Tolerances) -> Result<SelfLinking> {
    let pushed = pushoff(curve, framing, epsilon, tol)?;
    let lk = linking_number(curve, &pushed, tol)?.value;
    Ok(SelfLinking {
        value: Ratio::new(lk, framing.k_f as i64),
        linking: lk,
        k_f: framing.k_f,
    })
}

/// Default push-off distance: half the reach proxy.
pub fn default_epsilon(curve: &PolyCurve) -> f64 {
    0.5 * reach_proxy(curve)
}

/// Self-linking with the default push-off distance, confirmed at half that
/// distance.
pub fn self_linking(curve: &PolyCurve, framing: &RationalFraming, tol: &Tolerances) -> Result<SelfLinking> {
    let eps = default_epsilon(curve);
    let first = self_linking_at(curve, framing, eps, tol)?;
    let second = self_linking_at(curve, framing, 0.5 * eps, tol)?;
    if first != second {
        return Err(Error::UnstableSelfLinking {
            first: first.value.to_string(),
            second: second.value.to_string(),
        });
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;
    use std::f64::consts::TAU;

    fn planar_circle(n: usize) -> PolyCurve {
        let pts = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                Vector3::new(t.cos(), t.sin(), 0.0)
            })
            .collect();
        PolyCurve::r3("circle", pts).unwrap()
    }

    fn outward() -> RationalFraming {
        RationalFraming::integral(FramingField::ambient(|p| Vector4::new(p[0], p[1], 0.0, 0.0)))
    }

    /// Outward normal rotated `twists` right-handed turns about the tangent while
    /// going once around the circle, sampled at `n` vertices.
    fn twisted(n: usize, twists: f64) -> RationalFraming {
        let normals = (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                let radial = Vector4::new(t.cos(), t.sin(), 0.0, 0.0);
                let up = Vector4::new(0.0, 0.0, 1.0, 0.0);
                let a = twists * t;
                radial * a.cos() - up * a.sin()
            })
            .collect();
        RationalFraming::integral(FramingField::ExplicitNormals(normals))
    }

    #[test]
    fn outward_pushoff_is_concentric() {
        let tol = Tolerances::default();
        let c = planar_circle(64);
        let p = pushoff(&c, &outward(), 0.01, &tol).unwrap();
        assert_eq!(p.len(), 64);
        for v in p.vertices() {
            assert!((v.norm() - 1.01).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_circle_surface_framing_has_zero_self_linking() {
        let tol = Tolerances::default();
        let s = self_linking(&planar_circle(64), &outward(), &tol).unwrap();
        assert_eq!(s.value, Ratio::from_integer(0));
    }

    #[test]
    fn full_twists_shift_self_linking() {
        let tol = Tolerances::default();
        let c = planar_circle(128);
        for t in -3..=3 {
            let s = self_linking(&c, &twisted(128, t as f64), &tol).unwrap();
            assert_eq!(s.value, Ratio::from_integer(t), "twists {t}");
        }
    }

    #[test]
    fn half_twist_rational_framing() {
        // One half turn per traversal closes up after two traversals.
        let tol = Tolerances::default();
        let n = 128;
        let normals: Vec<_> = (0..2 * n)
            .map(|k| {
                let s = TAU * k as f64 / n as f64;
                let radial = Vector4::new(s.cos(), s.sin(), 0.0, 0.0);
                let up = Vector4::new(0.0, 0.0, 1.0, 0.0);
                radial * (0.5 * s).cos() - up * (0.5 * s).sin()
            })
            .collect();
        let f = RationalFraming::new(FramingField::ExplicitNormals(normals), 2).unwrap();
        let s = self_linking(&planar_circle(n), &f, &tol).unwrap();
        assert_eq!(s.value, Ratio::new(1, 2));
        assert_eq!(s.linking, 1);
    }

    #[test]
    fn doubled_integral_framing_keeps_self_linking() {
        let tol = Tolerances::default();
        let c = planar_circle(96);
        let base = twisted(96, 2.0).base().clone();
        let once = self_linking(&c, &RationalFraming::new(base.clone(), 1).unwrap(), &tol).unwrap();
        let twice = self_linking(&c, &RationalFraming::new(base, 2).unwrap(), &tol).unwrap();
        assert_eq!(twice.linking, 2 * once.linking);
        assert_eq!(twice.value, once.value);
    }

    #[test]
    fn error_paths() {
        let tol = Tolerances::default();
        let c = planar_circle(32);
        assert!(matches!(pushoff(&c, &outward(), 10.0, &tol), Err(Error::EpsilonTooLarge { .. })));
        let tangent = RationalFraming::integral(FramingField::ambient(|p| Vector4::new(-p[1], p[0], 0.0, 0.0)));
        assert!(matches!(pushoff(&c, &tangent, 0.01, &tol), Err(Error::DegenerateFraming { .. })));
        assert!(RationalFraming::new(FramingField::ExplicitNormals(vec![]), 0).is_err());
        let short = RationalFraming::integral(FramingField::ExplicitNormals(vec![Vector4::z(); 5]));
        assert!(pushoff(&c, &short, 0.01, &tol).is_err());
    }
}
