use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point of the unit 3-sphere in R^4.
///
/// Coordinates are read as the quaternion `x1 + x2 i + x3 j + x4 k`, or as the
/// pair `(z1, z2) = (x1 + i x2, x3 + i x4)` in C^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct SpherePoint(Vector4<f64>);

impl SpherePoint {
    /// Accepts `coords` if its norm is within `tol` of 1, then renormalizes.
    pub fn new(coords: Vector4<f64>, tol: f64) -> Result<Self> {
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sphere coordinates {:?}",
                coords.as_slice()
            )));
        }
        let norm = coords.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "point has norm {norm}, expected 1 within {tol:e}"
            )));
        }
        Ok(SpherePoint(coords / norm))
    }

    /// Radial projection of any non-zero vector.
    pub fn normalize(coords: Vector4<f64>) -> Result<Self> {
        let norm = coords.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidInput(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(SpherePoint(coords / norm))
    }

    pub fn from_complex(z1: (f64, f64), z2: (f64, f64)) -> Result<Self> {
        Self::normalize(Vector4::new(z1.0, z1.1, z2.0, z2.1))
    }

    pub fn coords(&self) -> &Vector4<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Vector4<f64> {
        self.0
    }

    /// Great-circle distance in radians.
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        angle_between_units(&self.0, &other.0)
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(-self.0)
    }

    /// A point drawn from the normalized round volume.
    pub fn sample_uniform<R: rand::Rng + ?Sized>(rng: &mut R) -> SpherePoint {
        loop {
            let v = Vector4::from_fn(|_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
            let n = v.norm();
            if n > 1e-6 {
                return SpherePoint(v / n);
            }
        }
    }
}

impl From<SpherePoint> for [f64; 4] {
    fn from(p: SpherePoint) -> Self {
        [p.0[0], p.0[1], p.0[2], p.0[3]]
    }
}

impl TryFrom<[f64; 4]> for SpherePoint {
    type Error = Error;

    fn try_from(c: [f64; 4]) -> Result<Self> {
        SpherePoint::new(Vector4::from(c), 1e-6)
    }
}

/// Angle between two unit vectors, accurate for nearly (anti)parallel inputs.
pub(crate) fn angle_between_units(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    let sum = (a + b).norm();
    let diff = (a - b).norm();
    2.0 * diff.atan2(sum)
}

/// Hamilton product with components ordered `(1, i, j, k)`.
pub fn quat_mul(a: &Vector4<f64>, b: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    )
}

pub fn quat_conj(a: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(a[0], -a[1], -a[2], -a[3])
}

/// The vector `n` orthogonal to `a`, `b`, `c` with `det[a, b, c, n] = |n|^2`.
pub fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    let mut n = Vector4::zeros();
    for l in 0..4 {
        let m = Matrix4::from_columns(&[*a, *b, *c, Vector4::ith(l, 1.0)]);
        n[l] = m.determinant();
    }
    n
}

/// Projects `v` onto the tangent space of the sphere at `p`.
pub fn tangent_part(p: &Vector4<f64>, v: &Vector4<f64>) -> Vector4<f64> {
    v - p * p.dot(v)
}

/// Moves `p` a geodesic distance `angle` along the unit tangent `dir`.
pub(crate) fn exp_map(p: &Vector4<f64>, dir: &Vector4<f64>, angle: f64) -> Vector4<f64> {
    let q = p * angle.cos() + dir * angle.sin();
    q / q.norm()
}
