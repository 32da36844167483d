use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Maximum distance of a Gauss sum from the nearest integer.
    pub eps_int: f64,
    /// Allowed slack in `slk_zeta = slk_dx - ruelle`.
    pub eps_frame: f64,
    /// Minimum distance between distinct curves.
    pub eps_sep: f64,
    /// Minimum spherical distance (radians) from a projection pole to any vertex.
    pub delta_pole: f64,
    /// Minimum edge length.
    pub eps_edge: f64,
    /// Norm tolerance for points on the unit 3-sphere after renormalization.
    pub eps_norm: f64,
    /// Norm tolerance accepted when reading spherical points from files.
    pub eps_norm_input: f64,
    /// Minimum angle (radians) between a framing vector and the curve tangent.
    pub eps_ang: f64,
    /// Endpoint distance under which an orbit arc closes by identification.
    pub eps_close: f64,
    /// Parallelism threshold for projected edges in the crossing count.
    pub eps_par: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_int: 1e-6,
            eps_frame: 1e-3,
            eps_sep: 1e-6,
            delta_pole: 0.05,
            eps_edge: 1e-9,
            eps_norm: 1e-12,
            eps_norm_input: 1e-6,
            eps_ang: 1e-6,
            eps_close: 1e-8,
            eps_par: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("eps_int", self.eps_int),
            ("eps_frame", self.eps_frame),
            ("eps_sep", self.eps_sep),
            ("delta_pole", self.delta_pole),
            ("eps_edge", self.eps_edge),
            ("eps_norm", self.eps_norm),
            ("eps_norm_input", self.eps_norm_input),
            ("eps_ang", self.eps_ang),
            ("eps_close", self.eps_close),
            ("eps_par", self.eps_par),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(crate::Error::InvalidInput(format!(
                    "tolerance {name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}
