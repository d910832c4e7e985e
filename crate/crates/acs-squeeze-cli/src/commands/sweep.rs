//! `sweep`: minimize one metric for every 2J in an inclusive range; one CSV
//! row per 2J with the minimizing parameters and the derived per-2J seed.

use super::Budget;
use crate::config::{require_all, ConfigMap};
use crate::output::{deliver, fmt_f64, Csv};
use crate::{CliError, CliResult, SweepArgs};
use acs_squeeze::{sweep_j, Metric, Spin};

pub const SWEEP_COLUMNS: [&str; 9] = [
    "two_j",
    "metric",
    "best_value",
    "theta1",
    "theta2",
    "phi",
    "phi_r",
    "evaluations",
    "seed",
];

/// One CSV data row for a finished per-spin optimization.
pub fn sweep_row(
    spin: Spin,
    metric: Metric,
    result: &acs_squeeze::OptimizationResult,
) -> Vec<String> {
    let p = result.best_params.to_array();
    let best = if result.best_value.is_finite() {
        fmt_f64(result.best_value)
    } else {
        "undefined".into()
    };
    vec![
        spin.two_j().to_string(),
        metric.name(),
        best,
        fmt_f64(p[0]),
        fmt_f64(p[1]),
        fmt_f64(p[2]),
        fmt_f64(p[3]),
        result.evaluations.to_string(),
        result.seed.to_string(),
    ]
}

pub fn run(args: SweepArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let min_two_j = args.min_two_j.or(cfg.take_i64("min_two_j")?).unwrap_or(1);
    let max_two_j = args.max_two_j.or(cfg.take_i64("max_two_j")?);
    let metric_name = args.metric.clone().or(cfg.take_string("metric")?);
    let budget = Budget::resolve(&mut cfg, args.seed, args.restarts, args.max_evals)?;
    let output = args.output.clone().or(cfg.take_path("output")?);
    cfg.finish()?;

    require_all(&[
        ("max_two_j", max_two_j.is_some()),
        ("metric", metric_name.is_some()),
    ])?;
    let max_two_j = max_two_j.unwrap();
    if max_two_j < min_two_j {
        return Err(CliError(format!(
            "max-two-j ({max_two_j}) must not be smaller than min-two-j ({min_two_j})"
        )));
    }
    let metric = Metric::parse(&metric_name.unwrap())?;
    let spins: Vec<Spin> = (min_two_j..=max_two_j)
        .map(Spin::from_two_j)
        .collect::<acs_squeeze::Result<_>>()?;

    let options = budget.options(budget.seed);
    let results = sweep_j(&spins, metric, &options)?;

    let mut csv = Csv::new("sweep");
    csv.comment("metric", metric.name())
        .comment("min_two_j", min_two_j)
        .comment("max_two_j", max_two_j)
        .comment("restarts", options.restarts)
        .comment("max_evals", options.max_evals)
        .comment("seed", budget.seed)
        .header(&SWEEP_COLUMNS);
    for (spin, result) in &results {
        csv.row(&sweep_row(*spin, metric, result));
    }
    deliver(&output, &csv.into_string())
}
