use adams_core::constants::{concentration_level, AdamsParams};
use adams_core::specfun::{digamma, EULER_GAMMA};

use super::{key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Report;

pub struct Level;

impl Command for Level {
    fn name(&self) -> &'static str {
        "level"
    }

    fn about(&self) -> &'static str {
        "Concentration level |Omega|(1 + e^(psi(n/m) + gamma))"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[
            key("m", "Derivative order"),
            key("n", "Dimension"),
            key("measure", "Domain measure |Omega| (default 1)"),
        ];
        KEYS
    }

    fn run(&self, params: &Params, _: &RunConfig) -> CliResult<Report> {
        let p = AdamsParams::new(params.get("m")?, params.get("n")?)?;
        let measure: f64 = params.get_or("measure", 1.0)?;
        let level = concentration_level(p, measure)?;
        Ok(Report::record(
            vec![
                ("m", p.m().into()),
                ("n", p.n().into()),
                ("measure", measure.into()),
                ("psi_plus_gamma", (digamma(p.ratio())? + EULER_GAMMA).into()),
                ("level", level.into()),
                ("level_per_unit", (level / measure).into()),
            ],
            vec![],
        ))
    }
}
