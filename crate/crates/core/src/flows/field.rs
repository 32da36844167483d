use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{cross4, quat_mul, SpherePoint};
use crate::{Error, Result};

pub type FieldFn = Arc<dyn Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(&Vector4<f64>) -> Matrix4<f64> + Send + Sync>;

/// Number of sample points used by [`FlowField::validate`].
pub const VALIDATION_SAMPLES: usize = 1000;

/// Parameters of the linear field `(i p z1, i q z2) / scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeifertParams {
    pub p: u32,
    pub q: u32,
    pub scale: f64,
}

impl SeifertParams {
    /// Period of the orbit through `point`: `2 pi scale` for generic points,
    /// shorter on the two exceptional fibers.
    pub fn period_at(&self, point: &Vector4<f64>) -> f64 {
        let r1 = point[0].hypot(point[1]);
        let r2 = point[2].hypot(point[3]);
        let tau = std::f64::consts::TAU * self.scale;
        if r2 < 1e-14 {
            tau / self.p as f64
        } else if r1 < 1e-14 {
            tau / self.q as f64
        } else {
            tau
        }
    }

    /// Exact time-`t` map.
    pub fn flow(&self, point: &Vector4<f64>, t: f64) -> Vector4<f64> {
        let a = self.p as f64 * t / self.scale;
        let b = self.q as f64 * t / self.scale;
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        Vector4::new(
            ca * point[0] - sa * point[1],
            sa * point[0] + ca * point[1],
            cb * point[2] - sb * point[3],
            sb * point[2] + cb * point[3],
        )
    }

    pub fn matrix(&self) -> Matrix4<f64> {
        let (p, q) = (self.p as f64 / self.scale, self.q as f64 / self.scale);
        #[rustfmt::skip]
        let m = Matrix4::new(
            0.0, -p, 0.0, 0.0,
            p, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, -q,
            0.0, 0.0, q, 0.0,
        );
        m
    }
}

/// A smooth vector field on S^3, extended to R^4 so that Runge-Kutta stages
/// may be evaluated slightly off the sphere.
#[derive(Clone)]
pub struct FlowField {
    name: String,
    value: FieldFn,
    transverse: Option<FieldFn>,
    jacobian: Option<JacobianFn>,
    linear: Option<SeifertParams>,
}

impl fmt::Debug for FlowField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FlowField")
            .field("name", &self.name)
            .field("transverse", &self.transverse.is_some())
            .field("jacobian", &self.jacobian.is_some())
            .field("linear", &self.linear)
            .finish()
    }
}

/// Left multiplication by the quaternion `j`: `(x1, x2, x3, x4) -> (-x3, x4, x1, -x2)`.
///
/// Together with the Hopf field `i q` and `k q` it forms an orthonormal,
/// positively oriented frame of the tangent space at `q`; it is the built-in
/// transverse field of every linear Seifert field.
pub fn left_j(q: &Vector4<f64>) -> Vector4<f64> {
    quat_mul(&Vector4::new(0.0, 0.0, 1.0, 0.0), q)
}

impl FlowField {
    pub fn new(name: impl Into<String>, value: impl Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync + 'static) -> Self {
        FlowField {
            name: name.into(),
            value: Arc::new(value),
            transverse: None,
            jacobian: None,
            linear: None,
        }
    }

    pub fn with_transverse(mut self, field: impl Fn(&Vector4<f64>) -> Vector4<f64> + Send + Sync + 'static) -> Self {
        self.transverse = Some(Arc::new(field));
        self
    }

    pub fn with_jacobian(mut self, jac: impl Fn(&Vector4<f64>) -> Matrix4<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    /// The Hopf field `(i z1, i z2)`, whose orbits are the great circles of
    /// the Hopf fibration, all of period `2 pi`.
    pub fn hopf() -> Self {
        Self::linear(SeifertParams { p: 1, q: 1, scale: 1.0 }, "hopf".into())
    }

    /// The Seifert field `(i p z1, i q z2)` for coprime positive `p`, `q`.
    /// Generic orbits are `(p, q)` torus knots of period `2 pi`.
    pub fn seifert(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 || p.gcd(&q) != 1 {
            return Err(Error::InvalidInput(format!(
                "Seifert field needs coprime positive (p, q), got ({p}, {q})"
            )));
        }
        let name = if (p, q) == (1, 1) { "hopf".to_string() } else { format!("seifert:{p},{q}") };
        Ok(Self::linear(SeifertParams { p, q, scale: 1.0 }, name))
    }

    fn linear(params: SeifertParams, name: String) -> Self {
        let a = params.matrix();
        FlowField {
            name,
            value: Arc::new(move |x| a * x),
            transverse: Some(Arc::new(left_j)),
            jacobian: Some(Arc::new(move |_| a)),
            linear: Some(params),
        }
    }

    /// Parses `hopf` or `seifert:p,q`.
    pub fn from_selector(selector: &str) -> Result<Self> {
        let s = selector.trim();
        if s == "hopf" {
            return Ok(Self::hopf());
        }
        if let Some(rest) = s.strip_prefix("seifert:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if let [p, q] = parts.as_slice() {
                let p = p.trim().parse::<u32>();
                let q = q.trim().parse::<u32>();
                if let (Ok(p), Ok(q)) = (p, q) {
                    return Self::seifert(p, q);
                }
            }
            return Err(Error::InvalidInput(format!("bad Seifert selector `{s}`")));
        }
        if s.starts_with("file:") {
            return Err(Error::InvalidInput("file-defined fields are not supported".into()));
        }
        Err(Error::InvalidInput(format!("unknown field `{s}`")))
    }

    /// The field divided by `c`: same orbits, traversed `c` times slower.
    pub fn scaled(self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidInput(format!("scale must be positive, got {c}")));
        }
        if c == 1.0 {
            return Ok(self);
        }
        if let Some(params) = self.linear {
            let params = SeifertParams {
                scale: params.scale * c,
                ..params
            };
            let name = format!("{}/{}", self.name, c);
            return Ok(Self::linear(params, name));
        }
        let value = self.value.clone();
        let jacobian = self.jacobian.clone();
        Ok(FlowField {
            name: format!("{}/{}", self.name, c),
            value: Arc::new(move |x| value(x) / c),
            transverse: self.transverse,
            jacobian: jacobian.map(|j| Arc::new(move |x: &Vector4<f64>| j(x) / c) as JacobianFn),
            linear: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: &Vector4<f64>) -> Vector4<f64> {
        (self.value)(x)
    }

    pub fn transverse(&self, x: &Vector4<f64>) -> Option<Vector4<f64>> {
        self.transverse.as_ref().map(|f| f(x))
    }

    pub fn transverse_fn(&self) -> Option<&FieldFn> {
        self.transverse.as_ref()
    }

    pub fn jacobian(&self, x: &Vector4<f64>) -> Option<Matrix4<f64>> {
        self.jacobian.as_ref().map(|j| j(x))
    }

    pub fn has_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Analytic description when the field is a (rescaled) linear Seifert field.
    pub fn seifert_params(&self) -> Option<&SeifertParams> {
        self.linear.as_ref()
    }

    /// Positively oriented orthonormal frame `(e1, e2)` of the plane normal to
    /// the field at `x`, with `e1` along the transverse field:
    /// `det[x, X, e1, e2] > 0`. `None` without a transverse field or where it
    /// is parallel to the flow.
    pub fn normal_frame(&self, x: &Vector4<f64>) -> Option<(Vector4<f64>, Vector4<f64>)> {
        let z = self.transverse(x)?;
        let xv = self.eval(x);
        let xh = (xv - x * x.dot(&xv)).try_normalize(0.0)?;
        let mut e1 = z - x * x.dot(&z);
        e1 -= xh * xh.dot(&e1);
        let e1 = e1.try_normalize(1e-300)?;
        let e2 = cross4(x, &xh, &e1).try_normalize(1e-300)?;
        Some((e1, e2))
    }

    /// Checks tangency, non-vanishing and transversality on a fixed sample of
    /// points.
    pub fn validate(&self) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1e1d);
        for _ in 0..VALIDATION_SAMPLES {
            let p = SpherePoint::sample_uniform(&mut rng);
            let x = p.coords();
            let v = self.eval(x);
            if x.dot(&v).abs() > 1e-10 {
                return Err(Error::InvalidInput(format!(
                    "field `{}` is not tangent to the sphere at {:?}",
                    self.name,
                    x.as_slice()
                )));
            }
            let speed = v.norm();
            if !(speed > 1e-12) {
                return Err(Error::InvalidInput(format!("field `{}` vanishes at {:?}", self.name, x.as_slice())));
            }
            if let Some(z) = self.transverse(x) {
                let zn = z.norm();
                let along = (v / speed).dot(&z);
                let sin_angle = ((zn * zn - along * along).max(0.0)).sqrt() / zn;
                if !(zn > 0.0) || sin_angle < (1e-3f64).sin() {
                    return Err(Error::InvalidInput(format!(
                        "transverse field of `{}` is nearly parallel at {:?}",
                        self.name,
                        x.as_slice()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Start point of a generic orbit used by the built-in experiments.
    pub fn generic_point() -> SpherePoint {
        SpherePoint::from_complex((0.8, 0.0), (0.36, 0.48)).expect("non-zero point")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        FlowField::hopf().validate().unwrap();
        FlowField::seifert(2, 3).unwrap().validate().unwrap();
        FlowField::seifert(3, 5).unwrap().scaled(15f64.sqrt()).unwrap().validate().unwrap();
    }

    #[test]
    fn hopf_and_transverse_are_orthogonal() {
        let f = FlowField::hopf();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let p = SpherePoint::sample_uniform(&mut rng);
            let x = p.coords();
            assert!(f.eval(x).dot(&f.transverse(x).unwrap()).abs() < 1e-10);
            let (e1, e2) = f.normal_frame(x).unwrap();
            assert!((e1 - left_j(x)).norm() < 1e-12);
            let k = quat_mul(&Vector4::new(0.0, 0.0, 0.0, 1.0), x);
            assert!((e2 - k).norm() < 1e-12);
        }
    }

    #[test]
    fn selectors() {
        assert_eq!(FlowField::from_selector("hopf").unwrap().name(), "hopf");
        assert_eq!(FlowField::from_selector("seifert:2,3").unwrap().name(), "seifert:2,3");
        assert!(FlowField::from_selector("seifert:2,4").is_err());
        assert!(FlowField::from_selector("seifert:2").is_err());
        assert!(FlowField::from_selector("file:x.json").is_err());
        assert!(FlowField::from_selector("lorenz").is_err());
    }

    #[test]
    fn non_tangent_field_fails_validation() {
        let radial = FlowField::new("radial", |x| *x);
        assert!(radial.validate().is_err());
        let parallel = FlowField::new("h", |x| FlowField::hopf().eval(x)).with_transverse(|x| FlowField::hopf().eval(x));
        assert!(parallel.validate().is_err());
    }

    #[test]
    fn exceptional_periods() {
        let s = SeifertParams { p: 2, q: 3, scale: 1.0 };
        let tau = std::f64::consts::TAU;
        assert_eq!(s.period_at(&Vector4::new(1.0, 0.0, 0.0, 0.0)), tau / 2.0);
        assert_eq!(s.period_at(&Vector4::new(0.0, 0.0, 0.0, 1.0)), tau / 3.0);
        let x = FlowField::generic_point().into_inner();
        assert_eq!(s.period_at(&x), tau);
        assert!((s.flow(&x, tau) - x).norm() < 1e-14);
    }
}
