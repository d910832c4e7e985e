//! `report`: evaluate every squeezing figure of merit for one state and emit
//! a JSON document whose `input` block can be re-ingested via `--from-file`.

use crate::config::{require_all, ConfigMap};
use crate::output::{deliver, json_text};
use crate::{CliError, CliResult, ReportArgs};
use acs_squeeze::{make_operators, squeezing_report, superposition, Spin, SuperpositionParams};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// The exact numbers the report was computed from; re-evaluating this block
/// reproduces the report bit for bit.
#[derive(Serialize, Deserialize)]
struct InputBlock {
    two_j: i64,
    theta1: f64,
    theta2: f64,
    phi: f64,
    phi_r: f64,
}

pub fn run(args: ReportArgs) -> CliResult<()> {
    let mut cfg = ConfigMap::load(&args.config)?;
    let two_j = args.two_j.or(cfg.take_i64("two_j")?);
    let theta1 = args.theta1.or(cfg.take_f64("theta1")?);
    let theta2 = args.theta2.or(cfg.take_f64("theta2")?);
    let phi = args.phi.or(cfg.take_f64("phi")?);
    let phi_r = args.phi_r.or(cfg.take_f64("phi_r")?);
    let from_file = args.from_file.clone().or(cfg.take_path("from_file")?);
    let output = args.output.clone().or(cfg.take_path("output")?);
    cfg.finish()?;

    let input = match from_file {
        Some(path) => {
            let explicit = [
                two_j.is_some(),
                theta1.is_some(),
                theta2.is_some(),
                phi.is_some(),
                phi_r.is_some(),
            ];
            if explicit.iter().any(|&p| p) {
                return Err(CliError(
                    "--from-file cannot be combined with explicit state parameters".into(),
                ));
            }
            read_input_block(&path)?
        }
        None => {
            require_all(&[
                ("two_j", two_j.is_some()),
                ("theta1", theta1.is_some()),
                ("theta2", theta2.is_some()),
                ("phi", phi.is_some()),
                ("phi_r", phi_r.is_some()),
            ])?;
            InputBlock {
                two_j: two_j.unwrap(),
                theta1: theta1.unwrap(),
                theta2: theta2.unwrap(),
                phi: phi.unwrap(),
                phi_r: phi_r.unwrap(),
            }
        }
    };

    let spin = Spin::from_two_j(input.two_j)?;
    let params = SuperpositionParams::new(input.theta1, input.theta2, input.phi, input.phi_r)?;
    let state = superposition(spin, params)?;
    let ops = make_operators(spin);
    let report = squeezing_report(&state, &ops)?;

    let doc = json!({
        "command": "report",
        "seed": null,
        "input": input,
        "report": report,
    });
    deliver(&output, &json_text(&doc))
}

fn read_input_block(path: &std::path::Path) -> CliResult<InputBlock> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError(format!("cannot read report '{}': {e}", path.display())))?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError(format!("'{}' is not valid JSON: {e}", path.display())))?;
    let block = doc.get("input").ok_or_else(|| {
        CliError(format!(
            "'{}' has no 'input' block; expected a report written by this tool",
            path.display()
        ))
    })?;
    serde_json::from_value(block.clone())
        .map_err(|e| CliError(format!("'{}': malformed input block: {e}", path.display())))
}
