//! Subcommand implementations. Each `run` resolves flags against an optional
//! config file (flags win), validates, computes through the library, and
//! emits its artifact through [`crate::output`].

pub mod figure;
pub mod fit;
pub mod optimize;
pub mod ramsey;
pub mod report;
pub mod sweep;
pub mod tables;

use crate::config::ConfigMap;
use crate::{CliError, CliResult};
use acs_squeeze::optimize::Options;

/// Fixed per-metric seed salts so multi-metric commands (tables, figures)
/// derive independent, reproducible streams from one master seed.
pub(crate) const SALT_SORENSEN_X: u64 = 0;
pub(crate) const SALT_SORENSEN_Y: u64 = 1;
pub(crate) const SALT_SORENSEN_Z: u64 = 2;
pub(crate) const SALT_PLANAR_XY: u64 = 3;
pub(crate) const SALT_PLANAR_YZ: u64 = 4;
pub(crate) const SALT_PLANAR_ZX: u64 = 5;
pub(crate) const SALT_WINELAND_Y: u64 = 6;

/// Master seed for one metric's optimizer runs.
pub(crate) fn salted_master(seed: u64, salt: u64) -> u64 {
    acs_squeeze::splitmix64(seed ^ salt)
}

/// Seed/budget triple shared by every optimizer-backed subcommand.
pub(crate) struct Budget {
    pub seed: u64,
    pub restarts: usize,
    pub max_evals: usize,
}

impl Budget {
    /// Merges `--seed/--restarts/--max-evals` with config keys of the same
    /// names; unset values take the library defaults.
    pub fn resolve(
        cfg: &mut ConfigMap,
        seed: Option<u64>,
        restarts: Option<usize>,
        max_evals: Option<usize>,
    ) -> CliResult<Self> {
        let defaults = Options::default();
        Ok(Budget {
            seed: seed.or(cfg.take_u64("seed")?).unwrap_or(0),
            restarts: restarts
                .or(cfg.take_usize("restarts")?)
                .unwrap_or(defaults.restarts),
            max_evals: max_evals
                .or(cfg.take_usize("max_evals")?)
                .unwrap_or(defaults.max_evals),
        })
    }

    /// Optimizer options with this budget and the given master seed.
    pub fn options(&self, master: u64) -> Options {
        Options {
            restarts: self.restarts,
            max_evals: self.max_evals,
            seed: master,
            ..Options::default()
        }
    }
}

/// Validates an inclusive phase grid specification.
pub(crate) fn check_phase_grid(lo: f64, hi: f64, steps: usize) -> CliResult<()> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(CliError("phi-min and phi-max must be finite".into()));
    }
    if hi < lo {
        return Err(CliError(format!(
            "phi-max ({hi}) must not be smaller than phi-min ({lo})"
        )));
    }
    if steps < 1 {
        return Err(CliError("phi-steps must be at least 1".into()));
    }
    Ok(())
}
