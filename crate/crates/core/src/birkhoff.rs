//! Topology of a surface transverse to a flow, read off from its boundary:
//! Euler characteristic, boundary slopes, number of boundary circles and
//! genus. All arithmetic is exact.

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::framing::{self_linking, RationalFraming};
use crate::geom::WeightedLink;
use crate::linking::{linking_matrix, LinkingMatrix};
use crate::{Error, Result, Tolerances};

/// Coordinates of the boundary along one component in the (meridian,
/// zero-framing longitude) basis of its boundary torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundarySlope {
    pub meridian: i64,
    pub longitude: i64,
}

impl Serialize for BoundarySlope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.meridian, self.longitude].serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionTopology {
    pub chi: i64,
    /// Present only when the formula is consistent with a connected surface.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    pub slopes: Vec<BoundarySlope>,
    pub circles: Vec<u64>,
    pub multiplicities: Vec<i64>,
    #[serde(serialize_with = "serialize_matrix")]
    pub lk: LinkingMatrix,
    #[serde(serialize_with = "serialize_ratios")]
    pub slk: Vec<Ratio<i64>>,
    pub connected_assumed: bool,
}

fn serialize_matrix<S: Serializer>(lk: &LinkingMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    lk.entries().serialize(s)
}

fn serialize_ratios<S: Serializer>(v: &[Ratio<i64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        if r.is_integer() {
            seq.serialize_element(r.numer())?;
        } else {
            seq.serialize_element(&r.to_string())?;
        }
    }
    seq.end()
}

fn check_shapes(multiplicities: &[i64], lk: &LinkingMatrix, slk: Option<&[Ratio<i64>]>) -> Result<()> {
    let m = multiplicities.len();
    if m == 0 {
        return Err(Error::InvalidInput("no boundary components".into()));
    }
    if lk.size() != m || slk.is_some_and(|s| s.len() != m) {
        return Err(Error::InvalidInput(format!(
            "{} multiplicities, {}x{} linking matrix{}",
            m,
            lk.size(),
            lk.size(),
            slk.map(|s| format!(", {} self-linking numbers", s.len())).unwrap_or_default()
        )));
    }
    Ok(())
}

/// `sum_{j != i} n_j Lk(K_i, K_j)`.
fn weighted_linking(i: usize, multiplicities: &[i64], lk: &LinkingMatrix) -> i64 {
    (0..multiplicities.len())
        .filter(|&j| j != i)
        .map(|j| multiplicities[j] * lk.lk(i, j))
        .sum()
}

/// `chi = -sum_{i<j} (n_i + n_j) Lk(K_i, K_j) - sum_i n_i Slk(K_i)`.
pub fn euler_characteristic(multiplicities: &[i64], lk: &LinkingMatrix, slk: &[Ratio<i64>]) -> Result<i64> {
    check_shapes(multiplicities, lk, Some(slk))?;
    let m = multiplicities.len();
    let mut total = Ratio::from_integer(0i64);
    for i in 0..m {
        for j in (i + 1)..m {
            total -= Ratio::from_integer((multiplicities[i] + multiplicities[j]) * lk.lk(i, j));
        }
        total -= slk[i] * multiplicities[i];
    }
    if !total.is_integer() {
        return Err(Error::NonIntegerChi(total.to_string()));
    }
    Ok(total.to_integer())
}

pub fn boundary_slope(i: usize, multiplicities: &[i64], lk: &LinkingMatrix) -> Result<BoundarySlope> {
    check_shapes(multiplicities, lk, None)?;
    if i >= multiplicities.len() {
        return Err(Error::InvalidInput(format!("component {i} out of range")));
    }
    Ok(BoundarySlope {
        meridian: -weighted_linking(i, multiplicities, lk),
        longitude: multiplicities[i],
    })
}

/// Number of boundary circles running along component `i`: the gcd of its
/// two slope coordinates.
pub fn boundary_circles(i: usize, multiplicities: &[i64], lk: &LinkingMatrix) -> Result<u64> {
    let slope = boundary_slope(i, multiplicities, lk)?;
    if slope.meridian == 0 && slope.longitude == 0 {
        return Err(Error::ZeroBoundary(i));
    }
    Ok(slope.meridian.gcd(&slope.longitude).unsigned_abs())
}

/// Full topology from boundary data. The genus is `(2 - chi - b) / 2` with `b`
/// the total number of boundary circles; a negative value means the surface
/// cannot be connected and only `chi` is reported.
pub fn genus(multiplicities: &[i64], lk: &LinkingMatrix, slk: &[Ratio<i64>]) -> Result<SectionTopology> {
    let chi = euler_characteristic(multiplicities, lk, slk)?;
    let m = multiplicities.len();
    let slopes = (0..m)
        .map(|i| boundary_slope(i, multiplicities, lk))
        .collect::<Result<Vec<_>>>()?;
    let circles = (0..m)
        .map(|i| boundary_circles(i, multiplicities, lk))
        .collect::<Result<Vec<_>>>()?;
    let b: i64 = circles.iter().map(|&c| c as i64).sum();
    let twice_genus = 2 - chi - b;
    if twice_genus % 2 != 0 {
        return Err(Error::ParityViolation(chi + b));
    }
    let g = twice_genus / 2;
    Ok(SectionTopology {
        chi,
        genus: (g >= 0).then_some(g),
        slopes,
        circles,
        multiplicities: multiplicities.to_vec(),
        lk: lk.clone(),
        slk: slk.to_vec(),
        connected_assumed: g >= 0,
    })
}

/// Linking matrix and self-linking numbers measured on the curves, then
/// [`genus`].
pub fn section_topology(link: &WeightedLink, framings: &[RationalFraming], tol: &Tolerances) -> Result<SectionTopology> {
    if framings.len() != link.len() {
        return Err(Error::InvalidInput(format!(
            "{} framings for {} components",
            framings.len(),
            link.len()
        )));
    }
    let lk = linking_matrix(link, tol)?;
    let slk = link
        .components()
        .par_iter()
        .zip(framings.par_iter())
        .enumerate()
        .map(|(i, (c, f))| self_linking(c, f, tol).map(|s| s.value).map_err(|e| e.for_component(i)))
        .collect::<Result<Vec<_>>>()?;
    genus(link.multiplicities(), &lk, &slk)
}
