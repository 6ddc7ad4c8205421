use adams_core::constants::t_zero;
use adams_core::extremal::sweep;

use super::{flag, key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Report, Table};

pub const HEADER: [&str; 8] = [
    "n",
    "norm_chain",
    "norm_quad",
    "J_lower",
    "J_quad",
    "level",
    "gap_analytic",
    "gap_numeric",
];

pub struct ExtremalSweep;

impl Command for ExtremalSweep {
    fn name(&self) -> &'static str {
        "extremal-sweep"
    }

    fn about(&self) -> &'static str {
        "Test-function verdicts against the concentration level over a range of n"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[
            key("n-from", "First dimension"),
            key("n-to", "Last dimension (inclusive)"),
            key("step", "Dimension step (default 2)"),
            flag(
                "extended",
                "Allow odd n through the extended parameter path",
            ),
        ];
        KEYS
    }

    fn run(&self, params: &Params, config: &RunConfig) -> CliResult<Report> {
        let from: u32 = params.get("n-from")?;
        let to: u32 = params.get("n-to")?;
        let step: u32 = params.get_or("step", 2)?;
        if step == 0 {
            return Err(CliError::Usage("--step must be positive".into()));
        }
        if from > to {
            return Err(CliError::Usage(format!(
                "--n-from {from} exceeds --n-to {to}"
            )));
        }
        let ns: Vec<u32> = (from..=to).step_by(step as usize).collect();
        let rows = sweep(&ns, &config.quadrature, params.flag("extended"))?;
        let mut table = Table::new(&HEADER);
        let threshold = t_zero().n_threshold();
        let mut failures = Vec::new();
        for r in &rows {
            if r.n >= threshold && !r.gap_analytic {
                failures.push(format!(
                    "n = {}: lower bound {} not above level {}",
                    r.n, r.functional_lower, r.level
                ));
            }
            table.push(vec![
                r.n.into(),
                r.norm_chain_bound.into(),
                r.norm_quadrature.into(),
                r.functional_lower.into(),
                r.functional_quadrature.into(),
                r.level.into(),
                r.gap_analytic.into(),
                r.gap_numeric.into(),
            ]);
        }
        Ok(Report {
            json: serde_json::json!({ "rows": table.to_json() }),
            table,
            failures,
        })
    }
}
