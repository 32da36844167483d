use std::path::{Path, PathBuf};

use birkhoff_core::{Integrator, Tolerances};
use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Tolerance overrides accepted in the config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub eps_int: Option<f64>,
    pub eps_frame: Option<f64>,
    pub eps_sep: Option<f64>,
    pub delta_pole: Option<f64>,
    pub eps_edge: Option<f64>,
    pub eps_norm: Option<f64>,
    pub eps_norm_input: Option<f64>,
    pub eps_ang: Option<f64>,
    pub eps_close: Option<f64>,
    pub eps_par: Option<f64>,
}

impl ToleranceOverrides {
    fn apply(&self, tol: &mut Tolerances) {
        let pairs = [
            (self.eps_int, &mut tol.eps_int),
            (self.eps_frame, &mut tol.eps_frame),
            (self.eps_sep, &mut tol.eps_sep),
            (self.delta_pole, &mut tol.delta_pole),
            (self.eps_edge, &mut tol.eps_edge),
            (self.eps_norm, &mut tol.eps_norm),
            (self.eps_norm_input, &mut tol.eps_norm_input),
            (self.eps_ang, &mut tol.eps_ang),
            (self.eps_close, &mut tol.eps_close),
            (self.eps_par, &mut tol.eps_par),
        ];
        for (value, slot) in pairs {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }
}

/// Contents of a `--config` TOML file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub step: Option<f64>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    #[serde(default)]
    pub tolerances: ToleranceOverrides,
}

impl FileConfig {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Settings shared by every command after merging flags, config file and
/// defaults (in that order of precedence).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub integrator: Integrator,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
}

/// Values given on the command line.
#[derive(Debug, Default)]
pub struct FlagValues {
    pub seed: Option<u64>,
    pub step: Option<f64>,
    pub threads: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub tolerances: ToleranceOverrides,
}

impl RunConfig {
    pub fn resolve(flags: FlagValues, file: Option<FileConfig>) -> Result<Self, CliError> {
        let file = file.unwrap_or_default();
        let mut tolerances = Tolerances::default();
        file.tolerances.apply(&mut tolerances);
        flags.tolerances.apply(&mut tolerances);
        tolerances.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let step = flags.step.or(file.step).unwrap_or(Integrator::default().step);
        let integrator = Integrator::with_step(step);
        integrator.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        Ok(RunConfig {
            seed: flags.seed.or(file.seed).unwrap_or(0),
            integrator,
            threads,
            format: flags.format.or(file.format),
            tolerances,
            out: flags.out,
        })
    }
}
