//! `reproduce-tables`: re-derive the minimum-squeezing tables (directional
//! metrics in table1.csv, planar metrics in table2.csv) at the tabulated spin
//! values. Deterministic: one master seed fans out per metric and per 2J.

use super::{
    salted_master, Budget, SALT_PLANAR_XY, SALT_PLANAR_YZ, SALT_PLANAR_ZX, SALT_SORENSEN_X,
    SALT_SORENSEN_Y, SALT_SORENSEN_Z,
};
use crate::commands::sweep::{sweep_row, SWEEP_COLUMNS};
use crate::config::ConfigMap;
use crate::output::{atomic_write, Csv};
use crate::{CliError, CliResult, TablesArgs};
use acs_squeeze::metrics::{Axis, Plane};
use acs_squeeze::{sweep_j, Metric, OptimizationResult, Spin};
use std::path::PathBuf;

/// Spin values the tables list: J = 1/2, 1, 3/2, 2, 5, 10.
const TABLE_TWO_J: [i64; 6] = [1, 2, 3, 4, 10, 20];

pub fn run(args: TablesArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let max_two_j = args.max_two_j.or(cfg.take_i64("max_two_j")?).unwrap_or(20);
    let budget = Budget::resolve(&mut cfg, args.seed, args.restarts, args.max_evals)?;
    let out_dir = args
        .out_dir
        .clone()
        .or(cfg.take_path("out_dir")?)
        .unwrap_or_else(|| PathBuf::from("."));
    cfg.finish()?;

    if max_two_j < 1 {
        return Err(CliError(format!(
            "max-two-j must be at least 1, got {max_two_j}"
        )));
    }
    let spins: Vec<Spin> = TABLE_TWO_J
        .iter()
        .filter(|&&t| t <= max_two_j)
        .map(|&t| Spin::from_two_j(t))
        .collect::<acs_squeeze::Result<_>>()?;

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError(format!("cannot create '{}': {e}", out_dir.display())))?;

    let table1 = [
        (Metric::Sorensen(Axis::X), SALT_SORENSEN_X),
        (Metric::Sorensen(Axis::Y), SALT_SORENSEN_Y),
        (Metric::Sorensen(Axis::Z), SALT_SORENSEN_Z),
    ];
    let table2 = [
        (Metric::Planar(Plane::XY), SALT_PLANAR_XY),
        (Metric::Planar(Plane::YZ), SALT_PLANAR_YZ),
        (Metric::Planar(Plane::ZX), SALT_PLANAR_ZX),
    ];
    emit_table(1, &table1, &spins, &budget, max_two_j, &out_dir)?;
    emit_table(2, &table2, &spins, &budget, max_two_j, &out_dir)
}

fn emit_table(
    number: u32,
    metrics: &[(Metric, u64)],
    spins: &[Spin],
    budget: &Budget,
    max_two_j: i64,
    out_dir: &std::path::Path,
) -> CliResult<()> {
    // Metric-major computation, spin-major (table-layout) emission.
    let mut per_metric: Vec<Vec<(Spin, OptimizationResult)>> = Vec::new();
    for &(metric, salt) in metrics {
        let options = budget.options(salted_master(budget.seed, salt));
        per_metric.push(sweep_j(spins, metric, &options)?);
    }

    let mut csv = Csv::new("reproduce-tables");
    csv.comment("table", number)
        .comment("max_two_j", max_two_j)
        .comment("restarts", budget.restarts)
        .comment("max_evals", budget.max_evals)
        .comment("seed", budget.seed)
        .header(&SWEEP_COLUMNS);
    for row in 0..spins.len() {
        for (&(metric, _), results) in metrics.iter().zip(&per_metric) {
            let (spin, result) = &results[row];
            csv.row(&sweep_row(*spin, metric, result));
        }
    }
    atomic_write(
        &out_dir.join(format!("table{number}.csv")),
        csv.into_string().as_bytes(),
    )
}
