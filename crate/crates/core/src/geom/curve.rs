use nalgebra::{Vector3, Vector4};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sphere::SpherePoint;
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// Euclidean 3-space.
    R3,
    /// The unit 3-sphere in R^4.
    S3,
}

/// A closed polygon: the last vertex connects back to the first, and
/// traversal order is the orientation.
///
/// Vertices are stored as 4-vectors. Curves in R^3 keep the fourth coordinate
/// at zero, so distances and interpolation are shared between both ambients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    name: String,
    ambient: Ambient,
    vertices: Vec<Vector4<f64>>,
    pole: Option<SpherePoint>,
}

impl PolyCurve {
    pub fn r3(name: impl Into<String>, points: Vec<Vector3<f64>>) -> Result<Self> {
        let vertices = points
            .into_iter()
            .map(|p| Vector4::new(p.x, p.y, p.z, 0.0))
            .collect();
        Self::build(name.into(), Ambient::R3, vertices, None)
    }

    pub fn s3(name: impl Into<String>, points: Vec<SpherePoint>) -> Result<Self> {
        let vertices = points.into_iter().map(SpherePoint::into_inner).collect();
        Self::build(name.into(), Ambient::S3, vertices, None)
    }

    pub(crate) fn build(
        name: String,
        ambient: Ambient,
        mut vertices: Vec<Vector4<f64>>,
        pole: Option<SpherePoint>,
    ) -> Result<Self> {
        if ambient == Ambient::S3 {
            for v in vertices.iter_mut() {
                let n = v.norm();
                if n > 0.0 {
                    *v /= n;
                }
            }
        }
        let curve = PolyCurve {
            name,
            ambient,
            vertices,
            pole,
        };
        curve.validate(&Tolerances::default())?;
        Ok(curve)
    }

    /// Re-checks the structural invariants under custom tolerances.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let n = self.vertices.len();
        let bad = |msg: String| Err(Error::InvalidCurve(format!("{}: {msg}", self.name)));
        if n < 3 {
            return bad(format!("needs at least 3 vertices, got {n}"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return bad(format!("vertex {i} is not finite"));
            }
            match self.ambient {
                Ambient::R3 if v[3] != 0.0 => return bad(format!("vertex {i} leaves R^3")),
                Ambient::S3 if (v.norm() - 1.0).abs() > tol.eps_norm => {
                    return bad(format!("vertex {i} is off the unit sphere"))
                }
                _ => {}
            }
        }
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            if (b - a).norm() < tol.eps_edge {
                return bad(format!("edge {i} is shorter than {:e}", tol.eps_edge));
            }
            if n > 3 && *a == self.vertices[(i + 2) % n] {
                return bad(format!("vertex {i} repeats at {}", (i + 2) % n));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vector4<f64>] {
        &self.vertices
    }

    /// Pole used when this curve was produced by stereographic projection.
    pub fn pole(&self) -> Option<&SpherePoint> {
        self.pole.as_ref()
    }

    /// Vertices as points of 3-space. Only meaningful for R^3 curves.
    pub fn points3(&self) -> Vec<Vector3<f64>> {
        debug_assert_eq!(self.ambient, Ambient::R3);
        self.vertices.iter().map(|v| v.xyz()).collect()
    }

    pub fn sphere_points(&self) -> Vec<SpherePoint> {
        debug_assert_eq!(self.ambient, Ambient::S3);
        self.vertices
            .iter()
            .map(|v| SpherePoint::normalize(*v).expect("validated vertex"))
            .collect()
    }

    /// Same vertex set traversed backwards, starting at the same vertex.
    pub fn reversed(&self) -> PolyCurve {
        let mut vertices = self.vertices.clone();
        vertices[1..].reverse();
        PolyCurve {
            vertices,
            ..self.clone()
        }
    }

    /// Applies `f` to every vertex; used for rigid motions in tests and tools.
    pub fn map_r3(&self, f: impl Fn(Vector3<f64>) -> Vector3<f64>) -> Result<PolyCurve> {
        if self.ambient != Ambient::R3 {
            return Err(Error::InvalidInput("map_r3 needs an R^3 curve".into()));
        }
        PolyCurve::r3(self.name.clone(), self.points3().into_iter().map(f).collect())
    }

    pub fn length(&self) -> f64 {
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Vector4<f64>, &Vector4<f64>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Tangent direction at vertex `i` from the neighbouring vertices.
    pub(crate) fn vertex_tangent(&self, i: usize) -> Vector4<f64> {
        let n = self.vertices.len();
        let t = self.vertices[(i + 1) % n] - self.vertices[(i + n - 1) % n];
        match self.ambient {
            Ambient::R3 => t,
            Ambient::S3 => super::sphere::tangent_part(&self.vertices[i], &t),
        }
    }
}

/// Arclength-uniform resampling to `n` vertices, keeping vertex 0 in place.
pub fn curve_resample(curve: &PolyCurve, n: usize) -> Result<PolyCurve> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    let verts = curve.vertices();
    let m = verts.len();
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for (a, b) in curve.edges() {
        let last = *cumulative.last().unwrap();
        cumulative.push(last + (b - a).norm());
    }
    let total = cumulative[m];
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    for k in 0..n {
        let s = total * k as f64 / n as f64;
        while seg + 1 < m && cumulative[seg + 1] <= s {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let t = if len > 0.0 { (s - cumulative[seg]) / len } else { 0.0 };
        let a = verts[seg];
        let b = verts[(seg + 1) % m];
        let mut p = a + (b - a) * t;
        if curve.ambient() == Ambient::S3 {
            p /= p.norm();
        }
        out.push(p);
    }
    PolyCurve::build(curve.name().to_string(), curve.ambient(), out, curve.pole)
}

/// Squared distance between segments `[p1, q1]` and `[p2, q2]` in R^4.
pub(crate) fn segment_distance_sq(
    p1: &Vector4<f64>,
    q1: &Vector4<f64>,
    p2: &Vector4<f64>,
    q2: &Vector4<f64>,
) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return r.norm_squared();
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    (p1 + d1 * s - (p2 + d2 * t)).norm_squared()
}

pub(crate) fn point_segment_distance_sq(
    p: &Vector4<f64>,
    a: &Vector4<f64>,
    b: &Vector4<f64>,
) -> f64 {
    let d = b - a;
    let len = d.norm_squared();
    let t = if len > 0.0 {
        ((p - a).dot(&d) / len).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a + d * t - p).norm_squared()
}

/// Minimum distance between two polygons (ambient chord distance).
pub fn curve_separation(a: &PolyCurve, b: &PolyCurve) -> f64 {
    let va = a.vertices();
    let vb = b.vertices();
    let (na, nb) = (va.len(), vb.len());
    (0..na)
        .into_par_iter()
        .map(|i| {
            let (p1, q1) = (&va[i], &va[(i + 1) % na]);
            let mut best = f64::INFINITY;
            for j in 0..nb {
                let d = segment_distance_sq(p1, q1, &vb[j], &vb[(j + 1) % nb]);
                if d < best {
                    best = d;
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}

/// Half the minimum over vertices of the distance to the edges not adjacent
/// to that vertex.
pub fn reach_proxy(curve: &PolyCurve) -> f64 {
    let v = curve.vertices();
    let n = v.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = f64::INFINITY;
            for e in 0..n {
                if e == i || (e + 1) % n == i {
                    continue;
                }
                let d = point_segment_distance_sq(&v[i], &v[e], &v[(e + 1) % n]);
                if d < best {
                    best = d;
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
        * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn circle(n: usize, r: f64) -> PolyCurve {
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Vector3::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect();
        PolyCurve::r3("circle", pts).unwrap()
    }

    #[test]
    fn rejects_short_or_degenerate_curves() {
        let two = vec![Vector3::zeros(), Vector3::x()];
        assert!(PolyCurve::r3("c", two).is_err());
        let dup = vec![Vector3::zeros(), Vector3::zeros(), Vector3::x()];
        assert!(PolyCurve::r3("c", dup).is_err());
        let hairpin = vec![Vector3::zeros(), Vector3::x(), Vector3::zeros(), Vector3::y()];
        assert!(PolyCurve::r3("c", hairpin).is_err());
    }

    #[test]
    fn resample_circle_to_square() {
        let c = circle(100, 1.0);
        let sq = curve_resample(&c, 4).unwrap();
        assert_eq!(sq.len(), 4);
        let expected = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (v, (x, y)) in sq.vertices().iter().zip(expected) {
            assert_relative_eq!(v[0], x, epsilon = 1e-12);
            assert_relative_eq!(v[1], y, epsilon = 1e-12);
        }
    }

    #[test]
    fn resample_uniform_curve_is_identity() {
        let c = circle(24, 2.0);
        let r = curve_resample(&c, 24).unwrap();
        for (a, b) in c.vertices().iter().zip(r.vertices()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(curve_resample(&c, 2), Err(Error::TooFewVertices(2))));
    }

    #[test]
    fn reversal_keeps_start() {
        let c = circle(5, 1.0);
        let r = c.reversed();
        assert_eq!(r.vertices()[0], c.vertices()[0]);
        assert_eq!(r.vertices()[1], c.vertices()[4]);
        assert_eq!(r.reversed(), c);
    }

    #[test]
    fn segment_distance_cases() {
        let v = |x: f64, y: f64, z: f64| Vector4::new(x, y, z, 0.0);
        // skew perpendicular segments one unit apart
        let d = segment_distance_sq(&v(-1., 0., 0.), &v(1., 0., 0.), &v(0., -1., 1.), &v(0., 1., 1.));
        assert_relative_eq!(d, 1.0);
        // parallel, offset along their direction
        let d = segment_distance_sq(&v(0., 0., 0.), &v(1., 0., 0.), &v(2., 1., 0.), &v(3., 1., 0.));
        assert_relative_eq!(d, 2.0);
        // endpoint-to-interior
        let d = segment_distance_sq(&v(0., 0., 0.), &v(1., 0., 0.), &v(0.5, 2., 0.), &v(0.5, 3., 0.));
        assert_relative_eq!(d, 4.0);
    }

    #[test]
    fn separation_of_concentric_circles() {
        let a = circle(64, 1.0);
        let b = circle(64, 2.0);
        let s = curve_separation(&a, &b);
        assert!(s > 0.99 && s <= 1.0 + 1e-12, "{s}");
    }

    #[test]
    fn reach_proxy_of_square() {
        let sq = PolyCurve::r3(
            "sq",
            vec![
                Vector3::new(0., 0., 0.),
                Vector3::new(1., 0., 0.),
                Vector3::new(1., 1., 0.),
                Vector3::new(0., 1., 0.),
            ],
        )
        .unwrap();
        assert_relative_eq!(reach_proxy(&sq), 0.5);
    }
}
