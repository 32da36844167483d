use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::flows::{close_arc, integrate_orbit, FlowField, Integrator};
use crate::geom::SpherePoint;
use crate::linking::linking_number;
use crate::{Error, Result, Tolerances};

/// Monte-Carlo estimate of the average asymptotic linking number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelicityEstimate {
    pub field: String,
    /// Mean of `Lk / T^2` over the accepted pairs.
    pub value: f64,
    pub stderr: f64,
    pub num_pairs: usize,
    /// Pairs redrawn because the closed curves came too close.
    pub rejected: usize,
    pub arc_duration: f64,
    pub seed: u64,
    pub mean_linking: f64,
}

/// Draws `num_pairs` pairs of start points from the round measure, closes
/// their orbit arcs of duration `arc_duration` and averages the linking
/// numbers divided by `arc_duration^2`.
///
/// Pair `k` uses its own ChaCha stream, so the result does not depend on how
/// pairs are scheduled across threads.
pub fn estimate_helicity(
    field: &FlowField,
    arc_duration: f64,
    num_pairs: usize,
    seed: u64,
    integrator: &Integrator,
    tol: &Tolerances,
) -> Result<HelicityEstimate> {
    if !(arc_duration.is_finite() && arc_duration > 0.0) {
        return Err(Error::InvalidInput(format!("arc duration must be positive, got {arc_duration}")));
    }
    if num_pairs == 0 {
        return Err(Error::InvalidInput("at least one pair is required".into()));
    }
    integrator.validate()?;
    let max_rejected = num_pairs / 2;
    let results = (0..num_pairs)
        .into_par_iter()
        .map(|k| sample_pair(field, k as u64, seed, arc_duration, integrator, tol, max_rejected, num_pairs))
        .collect::<Result<Vec<(i64, usize)>>>()?;
    let rejected: usize = results.iter().map(|r| r.1).sum();
    if rejected > max_rejected {
        return Err(Error::TooManyRejections {
            rejected,
            requested: num_pairs,
        });
    }
    let n = num_pairs as i128;
    let sum: i128 = results.iter().map(|r| r.0 as i128).sum();
    let sum_sq: i128 = results.iter().map(|r| (r.0 as i128).pow(2)).sum();
    let mean_linking = sum as f64 / num_pairs as f64;
    let stderr = if num_pairs > 1 {
        // Sample variance from exact integer moments.
        let var = (n * sum_sq - sum * sum) as f64 / (n * (n - 1)) as f64;
        (var / num_pairs as f64).sqrt() / (arc_duration * arc_duration)
    } else {
        0.0
    };
    Ok(HelicityEstimate {
        field: field.name().to_string(),
        value: mean_linking / (arc_duration * arc_duration),
        stderr,
        num_pairs,
        rejected,
        arc_duration,
        seed,
        mean_linking,
    })
}

#[allow(clippy::too_many_arguments)]
fn sample_pair(
    field: &FlowField,
    index: u64,
    seed: u64,
    duration: f64,
    integrator: &Integrator,
    tol: &Tolerances,
    max_rejected: usize,
    requested: usize,
) -> Result<(i64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut rejected = 0;
    loop {
        let p1 = SpherePoint::sample_uniform(&mut rng);
        let p2 = SpherePoint::sample_uniform(&mut rng);
        let a = close_arc(&integrate_orbit(field, &p1, duration, integrator)?, tol)?;
        let b = close_arc(&integrate_orbit(field, &p2, duration, integrator)?, tol)?;
        match linking_number(&a, &b, tol) {
            Ok(l) => return Ok((l.value, rejected)),
            Err(Error::CurvesTooClose { .. }) => {
                rejected += 1;
                if rejected > max_rejected {
                    return Err(Error::TooManyRejections { rejected, requested });
                }
            }
            Err(e) => return Err(e),
        }
    }
}
