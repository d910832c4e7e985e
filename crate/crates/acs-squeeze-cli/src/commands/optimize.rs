//! `optimize`: globally minimize one metric over the superposition family.

use super::Budget;
use crate::config::{require_all, ConfigMap};
use crate::output::{deliver, json_text};
use crate::{CliError, CliResult, OptimizeArgs};
use acs_squeeze::{minimize_metric, Metric, Spin};
use serde_json::json;

pub fn run(args: OptimizeArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let two_j = args.two_j.or(cfg.take_i64("two_j")?);
    let metric_name = args.metric.clone().or(cfg.take_string("metric")?);
    let budget = Budget::resolve(&mut cfg, args.seed, args.restarts, args.max_evals)?;
    let output = args.output.clone().or(cfg.take_path("output")?);
    cfg.finish()?;

    require_all(&[
        ("two_j", two_j.is_some()),
        ("metric", metric_name.is_some()),
    ])?;
    let spin = Spin::from_two_j(two_j.unwrap())?;
    let metric = Metric::parse(&metric_name.unwrap())?;

    let options = budget.options(budget.seed);
    let result = minimize_metric(spin, metric, &options)?;
    if !result.best_value.is_finite() {
        return Err(CliError(format!(
            "metric '{}' is undefined across the searched domain",
            metric.name()
        )));
    }

    let doc = json!({
        "command": "optimize",
        "seed": budget.seed,
        "config": {
            "two_j": spin.two_j(),
            "metric": metric.name(),
            "seed": budget.seed,
            "restarts": options.restarts,
            "max_evals": options.max_evals,
        },
        "result": result,
    });
    deliver(&output, &json_text(&doc))
}
