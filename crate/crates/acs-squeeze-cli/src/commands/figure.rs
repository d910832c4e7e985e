//! `figure`: emit the CSV data behind the survey figures.
//!
//! - fig1: directional squeezing minima over J = 1/2..10 (three files, one
//!   per axis) with inverse-J least-squares fit samples.
//! - fig2: the same for the three planar metrics.
//! - fig3: scaled Ramsey phase uncertainty at J = 10 for four reference
//!   states (coherent baseline plus three optimizer-derived states).

use super::{
    check_phase_grid, salted_master, Budget, SALT_PLANAR_XY, SALT_PLANAR_YZ, SALT_PLANAR_ZX,
    SALT_SORENSEN_X, SALT_SORENSEN_Y, SALT_SORENSEN_Z, SALT_WINELAND_Y,
};
use crate::config::ConfigMap;
use crate::output::{atomic_write, fmt_f64, fmt_opt, linspace, Csv};
use crate::{CliError, CliResult, FigureArgs, FigureKind};
use acs_squeeze::metrics::{Axis, Plane};
use acs_squeeze::{
    align_for_ramsey, fit_inverse_j, minimize_metric, phase_scan, superposition, sweep_j, Metric,
    Spin, SuperpositionParams,
};
use std::path::{Path, PathBuf};

/// Spin grid behind the scaling plots: 2J = 1..20, i.e. J = 1/2..10 in
/// half-integer steps.
const SCALING_TWO_J: std::ops::RangeInclusive<i64> = 1..=20;

/// Spin of the phase-sensitivity comparison (N = 2J = 20 atoms).
const FIG3_TWO_J: i64 = 20;

struct Curve {
    metric: Metric,
    salt: u64,
    degrees: &'static [u32],
    file: &'static str,
}

pub fn run(args: FigureArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let budget = Budget::resolve(&mut cfg, args.seed, args.restarts, args.max_evals)?;
    let phi_min = args.phi_min.or(cfg.take_f64("phi_min")?).unwrap_or(1e-4);
    let phi_max = args.phi_max.or(cfg.take_f64("phi_max")?).unwrap_or(1.0);
    let phi_steps = args
        .phi_steps
        .or(cfg.take_usize("phi_steps")?)
        .unwrap_or(200);
    let out_dir = args
        .out_dir
        .clone()
        .or(cfg.take_path("out_dir")?)
        .unwrap_or_else(|| PathBuf::from("."));
    cfg.finish()?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError(format!("cannot create '{}': {e}", out_dir.display())))?;

    match args.kind {
        FigureKind::Fig1 => {
            let curves = [
                Curve {
                    metric: Metric::Sorensen(Axis::X),
                    salt: SALT_SORENSEN_X,
                    degrees: &[0, 2],
                    file: "fig1_x.csv",
                },
                Curve {
                    metric: Metric::Sorensen(Axis::Y),
                    salt: SALT_SORENSEN_Y,
                    degrees: &[0, 1, 2, 3],
                    file: "fig1_y.csv",
                },
                Curve {
                    metric: Metric::Sorensen(Axis::Z),
                    salt: SALT_SORENSEN_Z,
                    degrees: &[0, 2],
                    file: "fig1_z.csv",
                },
            ];
            emit_scaling_curves("fig1", &curves, &budget, &out_dir)
        }
        FigureKind::Fig2 => {
            let curves = [
                Curve {
                    metric: Metric::Planar(Plane::XY),
                    salt: SALT_PLANAR_XY,
                    degrees: &[0, 1, 2],
                    file: "fig2_xy.csv",
                },
                Curve {
                    metric: Metric::Planar(Plane::YZ),
                    salt: SALT_PLANAR_YZ,
                    degrees: &[0, 1, 2],
                    file: "fig2_yz.csv",
                },
                Curve {
                    metric: Metric::Planar(Plane::ZX),
                    salt: SALT_PLANAR_ZX,
                    degrees: &[0, 1, 2, 3],
                    file: "fig2_zx.csv",
                },
            ];
            emit_scaling_curves("fig2", &curves, &budget, &out_dir)
        }
        FigureKind::Fig3 => {
            check_phase_grid(phi_min, phi_max, phi_steps)?;
            emit_phase_comparison(&budget, phi_min, phi_max, phi_steps, &out_dir)
        }
    }
}

/// Minimum-vs-J data plus fitted-curve samples, one CSV per metric.
fn emit_scaling_curves(
    kind: &str,
    curves: &[Curve],
    budget: &Budget,
    out_dir: &Path,
) -> CliResult<()> {
    let spins: Vec<Spin> = SCALING_TWO_J
        .map(Spin::from_two_j)
        .collect::<acs_squeeze::Result<_>>()?;
    for curve in curves {
        let options = budget.options(salted_master(budget.seed, curve.salt));
        let results = sweep_j(&spins, curve.metric, &options)?;
        let points: Vec<(f64, f64)> = results
            .iter()
            .map(|(spin, r)| {
                if r.best_value.is_finite() {
                    Ok((spin.j(), r.best_value))
                } else {
                    Err(CliError(format!(
                        "metric '{}' is undefined across the searched domain at 2J = {}",
                        curve.metric.name(),
                        spin.two_j()
                    )))
                }
            })
            .collect::<CliResult<_>>()?;
        let fit = fit_inverse_j(&points, curve.degrees)?;

        let mut csv = Csv::new(&format!("figure {kind}"));
        csv.comment("metric", curve.metric.name()).comment(
            "degrees",
            curve
                .degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        for (d, c) in curve.degrees.iter().zip(&fit.coefficients) {
            csv.comment(&format!("coefficient_{d}"), fmt_f64(*c));
        }
        csv.comment("residual_rms", fmt_f64(fit.residual_rms))
            .comment("restarts", budget.restarts)
            .comment("max_evals", budget.max_evals)
            .comment("seed", budget.seed)
            .header(&["j", "value", "fitted_value", "residual"]);
        for &(j, value) in &points {
            let fitted = fit.evaluate_at_j(j);
            csv.row(&[
                fmt_f64(j),
                fmt_f64(value),
                fmt_f64(fitted),
                fmt_f64(value - fitted),
            ]);
        }
        atomic_write(&out_dir.join(curve.file), csv.into_string().as_bytes())?;
    }
    Ok(())
}

/// Four-curve scaled phase-uncertainty comparison at J = 10: the coherent
/// baseline and the states minimizing directional (y), planar (yz), and
/// Ramsey-referenced (Wineland y) squeezing.
fn emit_phase_comparison(
    budget: &Budget,
    phi_min: f64,
    phi_max: f64,
    phi_steps: usize,
    out_dir: &Path,
) -> CliResult<()> {
    let spin = Spin::from_two_j(FIG3_TWO_J)?;
    // The Ramsey-referenced (Wineland) y metric is exactly invariant under
    // rotations about y, so its minimizer is a degenerate orbit; the scan uses
    // the mean-spin-aligned representative, for which the squeezing value is
    // the achievable scaled sensitivity. The directional-y state is scanned
    // as the optimizer returns it (an arbitrary orbit point, matching how its
    // curve is usually shown); the planar minimizer is unique and needs no
    // gauge choice.
    let optimized = [
        (
            "sorensen_y",
            Metric::Sorensen(Axis::Y),
            SALT_SORENSEN_Y,
            false,
        ),
        (
            "planar_yz",
            Metric::Planar(Plane::YZ),
            SALT_PLANAR_YZ,
            false,
        ),
        (
            "wineland_y",
            Metric::Wineland(Axis::Y),
            SALT_WINELAND_Y,
            true,
        ),
    ];

    let mut csv = Csv::new("figure fig3");
    csv.comment("two_j", spin.two_j())
        .comment("phi_min", fmt_f64(phi_min))
        .comment("phi_max", fmt_f64(phi_max))
        .comment("phi_steps", phi_steps)
        .comment("restarts", budget.restarts)
        .comment("max_evals", budget.max_evals)
        .comment("seed", budget.seed);

    let grid = linspace(phi_min, phi_max, phi_steps);
    let mut columns: Vec<Vec<Option<f64>>> = Vec::new();

    // Coherent baseline: the polar state, whose scaled uncertainty is the
    // unit reference at every phase.
    let acs_state = superposition(spin, SuperpositionParams::new(0.0, 0.0, 0.0, 0.0)?)?;
    columns.push(phase_scan(&acs_state, &grid, false)?.scaled_delta_phi);

    for (name, metric, salt, align) in optimized {
        let options = budget.options(salted_master(budget.seed, salt));
        let result = minimize_metric(spin, metric, &options)?;
        if !result.best_value.is_finite() {
            return Err(CliError(format!(
                "metric '{}' is undefined across the searched domain",
                metric.name()
            )));
        }
        let p = result.best_params.to_array();
        csv.comment(&format!("{name}_value"), fmt_f64(result.best_value))
            .comment(
                &format!("{name}_params"),
                format!(
                    "{} {} {} {}",
                    fmt_f64(p[0]),
                    fmt_f64(p[1]),
                    fmt_f64(p[2]),
                    fmt_f64(p[3])
                ),
            )
            .comment(
                &format!("{name}_gauge"),
                if align { "msd-aligned" } else { "as-optimized" },
            );
        let mut state = superposition(spin, result.best_params)?;
        if align {
            state = align_for_ramsey(&state)?;
        }
        columns.push(phase_scan(&state, &grid, false)?.scaled_delta_phi);
    }

    csv.header(&["phi", "acs", "sorensen_y", "planar_yz", "wineland_y"]);
    for (i, &phase) in grid.iter().enumerate() {
        csv.row(&[
            fmt_f64(phase),
            fmt_opt(columns[0][i]),
            fmt_opt(columns[1][i]),
            fmt_opt(columns[2][i]),
            fmt_opt(columns[3][i]),
        ]);
    }
    atomic_write(&out_dir.join("fig3.csv"), csv.into_string().as_bytes())
}
