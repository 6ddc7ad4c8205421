use adams_core::constants::{beta0, beta0_product_form, AdamsParams, SphereConstants};
use adams_core::hardy::iterated_constant;

use super::{key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Cell, Report};

pub struct Constants;

impl Command for Constants {
    fn name(&self) -> &'static str {
        "constants"
    }

    fn about(&self) -> &'static str {
        "Sharp exponent beta0(m, n) and sphere constants"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[key("m", "Derivative order"), key("n", "Dimension")];
        KEYS
    }

    fn run(&self, params: &Params, _: &RunConfig) -> CliResult<Report> {
        let p = AdamsParams::new(params.get("m")?, params.get("n")?)?;
        let sphere = SphereConstants::new(p.n())?;
        // only defined from m = 2 on
        let iterated = match p.m() {
            1 => Cell::Missing,
            _ => iterated_constant(p)?.into(),
        };
        Ok(Report::record(
            vec![
                ("m", p.m().into()),
                ("n", p.n().into()),
                ("beta0", beta0(p)?.into()),
                ("beta0_product", beta0_product_form(p)?.into()),
                ("omega_sphere", sphere.omega_sphere.into()),
                ("omega_ball", sphere.omega_ball.into()),
                ("iterated_constant", iterated),
            ],
            vec![],
        ))
    }
}
