//! Linking numbers of disjoint closed polygons.
//!
//! The main path evaluates the Gauss double integral exactly: for a pair of
//! straight segments the integrand integrates to the signed solid angle of the
//! parallelogram `{b - a : a in seg1, b in seg2}` seen from the origin, which
//! is split into two triangles and measured with the arctangent formula of
//! Van Oosterom and Strackee. The crossing count in a planar projection is an
//! independent route used as an oracle.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geom::{
    choose_pole, curve_resample, curve_separation, stereographic_project, Ambient, PolyCurve,
    WeightedLink,
};
use crate::{Error, Result, Tolerances};

/// Resampling rounds attempted when the Gauss sum is not close to an integer.
pub const MAX_RESAMPLE_ROUNDS: u32 = 4;
/// Perturbed directions tried by [`linking_number_crossings_auto`].
pub const MAX_DIRECTION_RETRIES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Linking {
    pub value: i64,
    /// Raw Gauss sum (already divided by 4 pi).
    pub gauss_sum: f64,
    /// `|gauss_sum - value|`.
    pub residual: f64,
    /// Number of 2x resampling rounds that were needed.
    pub resamples: u32,
}

/// Signed solid angle of the triangle `(a, b, c)` seen from the origin.
#[inline]
fn triangle_solid_angle(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>, la: f64, lb: f64, lc: f64) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    2.0 * num.atan2(den)
}

/// Gauss linking sum of two closed polygons in R^3, divided by 4 pi.
///
/// Each row of the double sum is accumulated sequentially and the rows are
/// added in index order, so the result is bitwise reproducible regardless of
/// the thread count.
pub fn gauss_sum(a: &[Vector3<f64>], b: &[Vector3<f64>]) -> f64 {
    let (na, nb) = (a.len(), b.len());
    let rows: Vec<f64> = (0..na)
        .into_par_iter()
        .map(|i| {
            let p1 = a[i];
            let p2 = a[(i + 1) % na];
            let mut row = 0.0;
            // r_k1 = b_k - p1, r_k2 = b_k - p2 for the current segment start.
            let mut r31 = b[0] - p1;
            let mut r32 = b[0] - p2;
            let mut l31 = r31.norm();
            let mut l32 = r32.norm();
            for j in 0..nb {
                let q = b[(j + 1) % nb];
                let r41 = q - p1;
                let r42 = q - p2;
                let l41 = r41.norm();
                let l42 = r42.norm();
                // corners in (s, t) order: r31 -> r32 -> r42 -> r41
                row += triangle_solid_angle(&r31, &r32, &r42, l31, l32, l42)
                    + triangle_solid_angle(&r31, &r42, &r41, l31, l42, l41);
                r31 = r41;
                r32 = r42;
                l31 = l41;
                l32 = l42;
            }
            row
        })
        .collect();
    rows.iter().sum::<f64>() / (4.0 * PI)
}

/// Brings a pair of curves into a common chart of R^3.
pub(crate) fn common_chart(c1: &PolyCurve, c2: &PolyCurve, tol: &Tolerances) -> Result<(PolyCurve, PolyCurve)> {
    match (c1.ambient(), c2.ambient()) {
        (Ambient::R3, Ambient::R3) => Ok((c1.clone(), c2.clone())),
        (Ambient::S3, Ambient::S3) => {
            let pole = choose_pole(&[c1, c2], tol)?;
            Ok((
                stereographic_project(c1, &pole, tol)?,
                stereographic_project(c2, &pole, tol)?,
            ))
        }
        _ => Err(Error::InvalidInput("cannot link curves from different ambients".into())),
    }
}

fn check_separation(c1: &PolyCurve, c2: &PolyCurve, tol: &Tolerances) -> Result<()> {
    let separation = curve_separation(c1, c2);
    if separation <= tol.eps_sep {
        return Err(Error::CurvesTooClose {
            separation,
            min: tol.eps_sep,
        });
    }
    Ok(())
}

/// Linking number through the Gauss sum. Curves on S^3 are projected from a
/// pole chosen away from both.
///
/// A sum farther than `eps_int` from an integer triggers up to
/// [`MAX_RESAMPLE_ROUNDS`] rounds of 2x resampling before failing.
pub fn linking_number(c1: &PolyCurve, c2: &PolyCurve, tol: &Tolerances) -> Result<Linking> {
    check_separation(c1, c2, tol)?;
    let mut a = c1.clone();
    let mut b = c2.clone();
    let mut rounds = 0;
    loop {
        let (pa, pb) = common_chart(&a, &b, tol)?;
        let sum = gauss_sum(&pa.points3(), &pb.points3());
        let value = sum.round();
        let residual = (sum - value).abs();
        if residual < tol.eps_int {
            return Ok(Linking {
                value: value as i64,
                gauss_sum: sum,
                residual,
                resamples: rounds,
            });
        }
        if rounds == MAX_RESAMPLE_ROUNDS {
            return Err(Error::NonIntegerResult { sum, residual });
        }
        rounds += 1;
        a = curve_resample(&a, 2 * a.len())?;
        b = curve_resample(&b, 2 * b.len())?;
    }
}

#[inline]
fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Fraction of a segment treated as "at a vertex" by the crossing count.
const VERTEX_MARGIN: f64 = 1e-9;

/// Linking number as half the signed crossing count of the projection along
/// `direction`. Crossings are counted positive when the over-strand turns
/// counterclockwise onto the under-strand, seen from the tip of `direction`.
pub fn linking_number_crossings(
    c1: &PolyCurve,
    c2: &PolyCurve,
    direction: &Vector3<f64>,
    tol: &Tolerances,
) -> Result<i64> {
    check_separation(c1, c2, tol)?;
    let dn = direction.norm();
    if !(dn.is_finite() && dn > 0.0) {
        return Err(Error::InvalidInput("projection direction must be non-zero".into()));
    }
    let d = direction / dn;
    let helper = if d.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (helper - d * d.dot(&helper)).normalize();
    let e2 = d.cross(&e1);
    let (pa, pb) = common_chart(c1, c2, tol)?;
    let flat = |pts: Vec<Vector3<f64>>| -> Vec<(Vector2<f64>, f64)> {
        pts.iter()
            .map(|p| (Vector2::new(p.dot(&e1), p.dot(&e2)), p.dot(&d)))
            .collect()
    };
    let a = flat(pa.points3());
    let b = flat(pb.points3());
    let (na, nb) = (a.len(), b.len());

    let mut total = 0i64;
    for i in 0..na {
        let (a0, ha0) = a[i];
        let (a1, ha1) = a[(i + 1) % na];
        let r = a1 - a0;
        for j in 0..nb {
            let (b0, hb0) = b[j];
            let (b1, hb1) = b[(j + 1) % nb];
            let s = b1 - b0;
            if (a0 - b0).norm() <= tol.eps_par * (1.0 + a0.norm()) {
                return Err(Error::DegenerateProjection(format!("vertices {i} and {j} coincide")));
            }
            let denom = cross2(&r, &s);
            let w = b0 - a0;
            if denom.abs() <= tol.eps_par * r.norm() * s.norm() {
                // Parallel edges only matter when they overlap on a common line.
                let offset = cross2(&w, &r).abs() / r.norm();
                if offset <= tol.eps_par * (1.0 + w.norm()) {
                    let rr = r.norm_squared();
                    let t0 = w.dot(&r) / rr;
                    let t1 = (b1 - a0).dot(&r) / rr;
                    if t0.max(t1) >= 0.0 && t0.min(t1) <= 1.0 {
                        return Err(Error::DegenerateProjection(format!(
                            "edges {i} and {j} overlap in projection"
                        )));
                    }
                }
                continue;
            }
            let t = cross2(&w, &s) / denom;
            let u = cross2(&w, &r) / denom;
            if t < -VERTEX_MARGIN || t > 1.0 + VERTEX_MARGIN || u < -VERTEX_MARGIN || u > 1.0 + VERTEX_MARGIN {
                continue;
            }
            if t < VERTEX_MARGIN || t > 1.0 - VERTEX_MARGIN || u < VERTEX_MARGIN || u > 1.0 - VERTEX_MARGIN {
                return Err(Error::DegenerateProjection(format!(
                    "edges {i} and {j} cross at a vertex"
                )));
            }
            let h1 = ha0 + t * (ha1 - ha0);
            let h2 = hb0 + u * (hb1 - hb0);
            let orient = if h1 > h2 { cross2(&r, &s) } else { cross2(&s, &r) };
            total += if orient > 0.0 { 1 } else { -1 };
        }
    }
    if total % 2 != 0 {
        return Err(Error::DegenerateProjection(format!("odd crossing sum {total}")));
    }
    Ok(total / 2)
}

/// Base direction `(0, 0, 1)` followed by [`MAX_DIRECTION_RETRIES`] seeded
/// perturbations of it.
pub fn crossing_directions(seed: u64) -> Vec<Vector3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = Vector3::z();
    let mut out = vec![base];
    for _ in 0..MAX_DIRECTION_RETRIES {
        let jitter = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        out.push((base + jitter * 0.3).normalize());
    }
    out
}

/// Crossing count with deterministic direction retries on degenerate
/// projections.
pub fn linking_number_crossings_auto(c1: &PolyCurve, c2: &PolyCurve, seed: u64, tol: &Tolerances) -> Result<i64> {
    let mut last = None;
    for d in crossing_directions(seed) {
        match linking_number_crossings(c1, c2, &d, tol) {
            Err(e @ Error::DegenerateProjection(_)) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one direction was tried"))
}

/// Symmetric matrix of pairwise linking numbers; the diagonal is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    names: Vec<String>,
    entries: Vec<Vec<Option<i64>>>,
}

impl LinkingMatrix {
    /// Builds a matrix from full rows; diagonal values are ignored.
    pub fn from_entries(names: Vec<String>, rows: Vec<Vec<i64>>) -> Result<Self> {
        let m = rows.len();
        if names.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("linking matrix must be square and named".into()));
        }
        let mut entries = vec![vec![None; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "linking matrix is not symmetric at ({i}, {j})"
                    )));
                }
                entries[i][j] = Some(rows[i][j]);
            }
        }
        Ok(LinkingMatrix { names, entries })
    }

    /// Every off-diagonal entry equal to `value`.
    pub fn constant(m: usize, value: i64) -> Self {
        let rows = vec![vec![value; m]; m];
        let names = (0..m).map(|i| format!("c{i}")).collect();
        Self::from_entries(names, rows).expect("constant matrix is symmetric")
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        self.entries[i][j]
    }

    /// Off-diagonal entry, panicking on the diagonal.
    pub fn lk(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j].expect("diagonal linking number is undefined")
    }

    pub fn entries(&self) -> &[Vec<Option<i64>>] {
        &self.entries
    }

    /// Reorders components: row `k` of the result is row `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let names = perm.iter().map(|&p| self.names[p].clone()).collect();
        let entries = perm
            .iter()
            .map(|&p| perm.iter().map(|&q| self.entries[p][q]).collect())
            .collect();
        LinkingMatrix { names, entries }
    }
}

/// All pairwise linking numbers of a link.
pub fn linking_matrix(link: &WeightedLink, tol: &Tolerances) -> Result<LinkingMatrix> {
    let comps = link.components();
    let m = comps.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            linking_number(&comps[i], &comps[j], tol)
                .map(|l| l.value)
                .map_err(|e| e.for_pair(i, j))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut entries = vec![vec![None; m]; m];
    for (&(i, j), v) in pairs.iter().zip(values) {
        entries[i][j] = Some(v);
        entries[j][i] = Some(v);
    }
    Ok(LinkingMatrix {
        names: link.names(),
        entries,
    })
}
