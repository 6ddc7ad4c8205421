use adams_core::constants::t_zero;

use super::{Command, Key, Params};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Report;

pub struct TZero;

impl Command for TZero {
    fn name(&self) -> &'static str {
        "t0"
    }

    fn about(&self) -> &'static str {
        "Dimension threshold T0 for the extremal existence theorem"
    }

    fn keys(&self) -> &'static [Key] {
        &[]
    }

    fn run(&self, _: &Params, _: &RunConfig) -> CliResult<Report> {
        let t = t_zero();
        Ok(Report::record(
            vec![
                ("raw", t.raw.into()),
                ("T0", t.integer.into()),
                ("n_threshold", t.n_threshold().into()),
            ],
            vec![],
        ))
    }
}
