use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use super::FlowField;
use crate::geom::{angle_between_units, exp_map, Ambient, PolyCurve, SpherePoint};
use crate::{Error, Result, Tolerances};

/// Fixed-step RK4 settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Integrator {
    /// Upper bound on the step size; the actual step divides the duration evenly.
    pub step: f64,
    pub max_steps: u64,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            step: 1e-2,
            max_steps: 10_000_000,
        }
    }
}

impl Integrator {
    pub fn with_step(step: f64) -> Self {
        Integrator {
            step,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidInput(format!("integrator step must be positive, got {}", self.step)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("step cap must be positive".into()));
        }
        Ok(())
    }

    /// Number of equal steps covering `duration`.
    pub(crate) fn steps_for(&self, duration: f64) -> Result<u64> {
        self.validate()?;
        let steps = (duration / self.step).ceil();
        if steps > self.max_steps as f64 {
            return Err(Error::StepCapExceeded {
                steps: if steps >= u64::MAX as f64 { u64::MAX } else { steps as u64 },
                cap: self.max_steps,
            });
        }
        Ok(steps as u64)
    }
}

/// Time-ordered samples of one orbit segment, starting at time 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitArc {
    field: String,
    samples: Vec<(f64, SpherePoint)>,
}

impl OrbitArc {
    pub fn field_name(&self) -> &str {
        &self.field
    }

    pub fn samples(&self) -> &[(f64, SpherePoint)] {
        &self.samples
    }

    pub fn start(&self) -> &SpherePoint {
        &self.samples[0].1
    }

    pub fn end(&self) -> &SpherePoint {
        &self.samples[self.samples.len() - 1].1
    }

    pub fn duration(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }
}

/// One classical RK4 step followed by radial projection back to S^3.
pub(crate) fn rk4_step(field: &FlowField, x: &Vector4<f64>, h: f64) -> Vector4<f64> {
    let k1 = field.eval(x);
    let k2 = field.eval(&(x + k1 * (0.5 * h)));
    let k3 = field.eval(&(x + k2 * (0.5 * h)));
    let k4 = field.eval(&(x + k3 * h));
    let y = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    y / y.norm()
}

/// Integrates the flow from `p` for time `duration`.
pub fn integrate_orbit(field: &FlowField, p: &SpherePoint, duration: f64, integrator: &Integrator) -> Result<OrbitArc> {
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(Error::InvalidInput(format!("orbit duration must be non-negative, got {duration}")));
    }
    let steps = integrator.steps_for(duration)?;
    let mut samples = Vec::with_capacity(steps as usize + 1);
    samples.push((0.0, *p));
    if steps > 0 {
        let h = duration / steps as f64;
        let mut x = *p.coords();
        for k in 1..=steps {
            x = rk4_step(field, &x, h);
            let t = if k == steps { duration } else { h * k as f64 };
            samples.push((t, SpherePoint::normalize(x)?));
        }
    }
    Ok(OrbitArc {
        field: field.name().to_string(),
        samples,
    })
}

/// Closes an orbit arc into a polygon.
///
/// If the endpoint lies within `eps_close` of the start the two are
/// identified. Otherwise a great-circle segment leads back to the start,
/// subdivided at the arc's mean sample spacing. For antipodal endpoints the
/// great circle continuing the direction of travel is used.
pub fn close_arc(arc: &OrbitArc, tol: &Tolerances) -> Result<PolyCurve> {
    let pts: Vec<Vector4<f64>> = arc.samples.iter().map(|(_, p)| *p.coords()).collect();
    let n = pts.len();
    if n < 2 {
        return Err(Error::InvalidCurve("cannot close an arc with a single sample".into()));
    }
    let start = pts[0];
    let end = pts[n - 1];
    let name = format!("{}-arc", arc.field);
    if (end - start).norm() <= tol.eps_close {
        return PolyCurve::build(name, Ambient::S3, pts[..n - 1].to_vec(), None);
    }
    let spacing = pts.windows(2).map(|w| angle_between_units(&w[0], &w[1])).sum::<f64>() / (n - 1) as f64;
    let theta = angle_between_units(&end, &start);
    let toward = start - end * end.dot(&start);
    let dir = if toward.norm() > 1e-9 {
        toward.normalize()
    } else {
        let travel = pts[n - 1] - pts[n - 2];
        let travel = travel - end * end.dot(&travel);
        match travel.try_normalize(1e-300) {
            Some(d) => d,
            None => fallback_tangent(&end),
        }
    };
    let pieces = if spacing > 0.0 { (theta / spacing).ceil().max(1.0) as usize } else { 1 };
    let mut vertices = pts;
    for k in 1..pieces {
        vertices.push(exp_map(&end, &dir, theta * k as f64 / pieces as f64));
    }
    PolyCurve::build(name, Ambient::S3, vertices, None)
}

fn fallback_tangent(p: &Vector4<f64>) -> Vector4<f64> {
    let axes = [Vector4::x(), Vector4::y(), Vector4::z(), Vector4::w()];
    let mut best = axes[0] - p * p[0];
    for a in &axes[1..] {
        let c = a - p * p.dot(a);
        if c.norm() > best.norm() {
            best = c;
        }
    }
    best.normalize()
}

/// A closed orbit sampled at `curve.vertices()[k]` = flow of the start point
/// at `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicOrbit {
    curve: PolyCurve,
    times: Vec<f64>,
    period: f64,
}

impl PeriodicOrbit {
    pub fn new(curve: PolyCurve, times: Vec<f64>, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::NotPeriodic { steps: 0 });
        }
        if curve.ambient() != Ambient::S3 {
            return Err(Error::InvalidCurve("periodic orbits live on S^3".into()));
        }
        if times.len() != curve.len() {
            return Err(Error::InvalidInput(format!(
                "{} sample times for {} vertices",
                times.len(),
                curve.len()
            )));
        }
        let increasing = times.windows(2).all(|w| w[0] < w[1]);
        if !increasing || times[0] < 0.0 || times[times.len() - 1] >= period {
            return Err(Error::InvalidInput("orbit sample times must increase within [0, period)".into()));
        }
        Ok(PeriodicOrbit {
            curve,
            times,
            period,
        })
    }

    pub fn curve(&self) -> &PolyCurve {
        &self.curve
    }

    pub fn into_curve(self) -> PolyCurve {
        self.curve
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn start(&self) -> SpherePoint {
        SpherePoint::normalize(self.curve().vertices()[0]).expect("unit vertex")
    }
}

/// The closed orbit through `p` with `n_vertices` arclength-uniform samples.
///
/// Linear Seifert fields are sampled from their exact solution. Any other
/// field is integrated until it returns to `p` within `eps_close`.
pub fn periodic_orbit(
    field: &FlowField,
    p: &SpherePoint,
    n_vertices: usize,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<PeriodicOrbit> {
    if n_vertices < 3 {
        return Err(Error::InvalidCurve(format!(
            "an orbit polygon needs at least 3 vertices, got {n_vertices}"
        )));
    }
    let name = format!("{}-orbit", field.name());
    if let Some(params) = field.seifert_params() {
        let period = params.period_at(p.coords());
        let times: Vec<f64> = (0..n_vertices).map(|k| period * k as f64 / n_vertices as f64).collect();
        let vertices = times.iter().map(|&t| params.flow(p.coords(), t)).collect();
        let curve = PolyCurve::build(name, Ambient::S3, vertices, None)?;
        return PeriodicOrbit::new(curve, times, period);
    }
    let period = return_time(field, p, integrator, tol)?;
    let arc = integrate_orbit(field, p, period, integrator)?;
    let (vertices, times) = resample_closed(&arc, n_vertices);
    let curve = PolyCurve::build(name, Ambient::S3, vertices, None)?;
    PeriodicOrbit::new(curve, times, period)
}

/// First return time to `p`, located by sign changes of the displacement
/// along the flow direction at `p` and refined by bisection.
pub fn return_time(field: &FlowField, p: &SpherePoint, integrator: &Integrator, tol: &Tolerances) -> Result<f64> {
    integrator.validate()?;
    let h = integrator.step;
    let x0 = *p.coords();
    let v0 = field.eval(&x0);
    let speed = v0.norm();
    if !(speed > 0.0) {
        return Err(Error::NotPeriodic { steps: 0 });
    }
    let dir = v0 / speed;
    let section = |x: &Vector4<f64>| (x - x0).dot(&dir);
    let mut x = x0;
    let mut left = false;
    for k in 0..integrator.max_steps {
        let next = rk4_step(field, &x, h);
        if !left && (next - x0).norm() > 0.1 {
            left = true;
        }
        if left && section(&x) < 0.0 && section(&next) >= 0.0 && (next - x0).norm() < 0.1 {
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if section(&rk4_step(field, &x, mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let tau = 0.5 * (lo + hi);
            let hit = rk4_step(field, &x, tau);
            if (hit - x0).norm() <= tol.eps_close {
                return Ok(k as f64 * h + tau);
            }
        }
        x = next;
    }
    Err(Error::NotPeriodic {
        steps: integrator.max_steps,
    })
}

/// Start points of `m` distinct Hopf fibers, spread over the base 2-sphere
/// by a Fibonacci lattice and lifted to S^3.
pub fn hopf_fiber_starts(m: usize) -> Vec<SpherePoint> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|k| {
            // Polar angle on the base sphere, kept away from both poles.
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / m as f64;
            let theta = z.clamp(-1.0, 1.0).acos();
            let phi = golden * k as f64;
            let (s, c) = (0.5 * theta).sin_cos();
            SpherePoint::from_complex((c, 0.0), (s * phi.cos(), s * phi.sin())).expect("unit point")
        })
        .collect()
}

/// Closed orbits through each start point, named `fiber0`, `fiber1`, ...
pub fn fiber_curves(
    field: &FlowField,
    starts: &[SpherePoint],
    n_vertices: usize,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<Vec<PolyCurve>> {
    use rayon::prelude::*;
    starts
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            periodic_orbit(field, p, n_vertices, integrator, tol)
                .map(|o| o.into_curve().with_name(format!("fiber{k}")))
                .map_err(|e| e.for_component(k))
        })
        .collect()
}

/// Arclength-uniform vertices of the closed polygon through the arc samples
/// (the last sample is identified with the first), with interpolated times.
fn resample_closed(arc: &OrbitArc, n: usize) -> (Vec<Vector4<f64>>, Vec<f64>) {
    let s = arc.samples();
    let m = s.len() - 1;
    let pts: Vec<Vector4<f64>> = s[..m].iter().map(|(_, p)| *p.coords()).collect();
    let period = arc.duration();
    let mut cumulative = Vec::with_capacity(m + 1);
    cumulative.push(0.0);
    for i in 0..m {
        let b = if i + 1 == m { pts[0] } else { pts[i + 1] };
        cumulative.push(cumulative[i] + (b - pts[i]).norm());
    }
    let total = cumulative[m];
    let mut vertices = Vec::with_capacity(n);
    let mut times = Vec::with_capacity(n);
    let mut seg = 0;
    for k in 0..n {
        let target = total * k as f64 / n as f64;
        while seg + 1 < m && cumulative[seg + 1] <= target {
            seg += 1;
        }
        let len = cumulative[seg + 1] - cumulative[seg];
        let u = if len > 0.0 { (target - cumulative[seg]) / len } else { 0.0 };
        let (a, b) = (pts[seg], if seg + 1 == m { pts[0] } else { pts[seg + 1] });
        let (ta, tb) = (s[seg].0, if seg + 1 == m { period } else { s[seg + 1].0 });
        let v = a + (b - a) * u;
        vertices.push(v / v.norm());
        times.push(ta + (tb - ta) * u);
    }
    (vertices, times)
}
