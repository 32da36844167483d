use super::curve::{curve_separation, PolyCurve};
use crate::{Error, Result, Tolerances};

/// Pairwise-disjoint closed curves with integer multiplicities: the boundary
/// `sum n_i gamma_i` of a transverse surface.
#[derive(Debug, Clone)]
pub struct WeightedLink {
    components: Vec<PolyCurve>,
    multiplicities: Vec<i64>,
    separation: f64,
}

impl WeightedLink {
    pub fn new(components: Vec<PolyCurve>, multiplicities: Vec<i64>, tol: &Tolerances) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidLink("no components".into()));
        }
        if components.len() != multiplicities.len() {
            return Err(Error::InvalidLink(format!(
                "{} components but {} multiplicities",
                components.len(),
                multiplicities.len()
            )));
        }
        if multiplicities.iter().all(|&n| n == 0) {
            return Err(Error::InvalidLink("all multiplicities are zero".into()));
        }
        let ambient = components[0].ambient();
        if components.iter().any(|c| c.ambient() != ambient) {
            return Err(Error::InvalidLink("components live in different ambients".into()));
        }
        let mut separation = f64::INFINITY;
        for i in 0..components.len() {
            for j in (i + 1)..components.len() {
                let d = curve_separation(&components[i], &components[j]);
                if d <= tol.eps_sep {
                    return Err(Error::CurvesTooClose {
                        separation: d,
                        min: tol.eps_sep,
                    }
                    .for_pair(i, j));
                }
                separation = separation.min(d);
            }
        }
        Ok(WeightedLink {
            components,
            multiplicities,
            separation,
        })
    }

    pub fn components(&self) -> &[PolyCurve] {
        &self.components
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    /// Minimum distance between distinct components (infinite for a knot).
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.components.iter().map(|c| c.name().to_string()).collect()
    }
}
