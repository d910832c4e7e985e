//! `ramsey`: phase-uncertainty scan for one state over a phase grid, with
//! optional classical/quantum Cramer-Rao bounds.

use super::check_phase_grid;
use crate::config::{require_all, ConfigMap};
use crate::output::{deliver, fmt_f64, fmt_opt, linspace, Csv};
use crate::{CliResult, RamseyArgs};
use acs_squeeze::{phase_scan, superposition, Spin, SuperpositionParams};

pub fn run(args: RamseyArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let two_j = args.two_j.or(cfg.take_i64("two_j")?);
    let theta1 = args.theta1.or(cfg.take_f64("theta1")?);
    let theta2 = args.theta2.or(cfg.take_f64("theta2")?);
    let phi = args.phi.or(cfg.take_f64("phi")?);
    let phi_r = args.phi_r.or(cfg.take_f64("phi_r")?);
    let phi_min = args.phi_min.or(cfg.take_f64("phi_min")?).unwrap_or(0.0);
    let phi_max = args.phi_max.or(cfg.take_f64("phi_max")?).unwrap_or(0.5);
    let phi_steps = args
        .phi_steps
        .or(cfg.take_usize("phi_steps")?)
        .unwrap_or(101);
    let with_fisher = if args.no_fisher {
        false
    } else {
        cfg.take_bool("with_fisher")?.unwrap_or(true)
    };
    let output = args.output.clone().or(cfg.take_path("output")?);
    cfg.finish()?;

    require_all(&[
        ("two_j", two_j.is_some()),
        ("theta1", theta1.is_some()),
        ("theta2", theta2.is_some()),
        ("phi", phi.is_some()),
        ("phi_r", phi_r.is_some()),
    ])?;
    check_phase_grid(phi_min, phi_max, phi_steps)?;

    let spin = Spin::from_two_j(two_j.unwrap())?;
    let params = SuperpositionParams::new(
        theta1.unwrap(),
        theta2.unwrap(),
        phi.unwrap(),
        phi_r.unwrap(),
    )?;
    let state = superposition(spin, params)?;
    let grid = linspace(phi_min, phi_max, phi_steps);
    let scan = phase_scan(&state, &grid, with_fisher)?;

    let mut csv = Csv::new("ramsey");
    csv.comment("two_j", spin.two_j())
        .comment("theta1", fmt_f64(params.theta1()))
        .comment("theta2", fmt_f64(params.theta2()))
        .comment("phi", fmt_f64(params.phi()))
        .comment("phi_r", fmt_f64(params.phi_r()))
        .comment("phi_min", fmt_f64(phi_min))
        .comment("phi_max", fmt_f64(phi_max))
        .comment("phi_steps", phi_steps)
        .comment("with_fisher", with_fisher)
        .comment("qfi_bound", fmt_opt(scan.qfi_bound))
        .header(&["phi", "delta_phi", "scaled_delta_phi", "cfi_bound", "flag"]);
    for (i, &phase) in scan.phases.iter().enumerate() {
        let cfi_bound = match &scan.fisher_bound {
            Some(bounds) => fmt_opt(bounds[i]),
            None => "undefined".into(),
        };
        let flag = if scan.delta_phi[i].is_some() {
            "ok"
        } else {
            "undefined"
        };
        csv.row(&[
            fmt_f64(phase),
            fmt_opt(scan.delta_phi[i]),
            fmt_opt(scan.scaled_delta_phi[i]),
            cfi_bound,
            flag.into(),
        ]);
    }
    deliver(&output, &csv.into_string())
}
