use adams_core::hardy::{
    power_trial_ratio, rayleigh_probe, sandwich, second_order_probe, HardySetup, Side,
};

use super::{key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Report};

const SLACK: f64 = 1e-9;

pub struct Hardy;

impl Command for Hardy {
    fn name(&self) -> &'static str {
        "hardy"
    }

    fn about(&self) -> &'static str {
        "Hardy sandwich B <= C <= k(q,p) B with a seeded Rayleigh probe"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[
            key(
                "order",
                "1 for the weighted inequality, 2 for the second-order one (default 1)",
            ),
            key("p", "Exponent on the derivative side"),
            key("q", "Exponent on the function side"),
            key("alpha", "Weight exponent on |u'|^p"),
            key("theta", "Weight exponent on |u|^q"),
            key("radius", "Interval (0, R) or ball radius (default 1)"),
            key(
                "side",
                "left or right vanishing boundary condition (default left)",
            ),
            key("trials", "Random trials in the probe (default 100)"),
            key(
                "eps",
                "Power trial offset; reported for left-vanishing setups",
            ),
            key("n", "Dimension for order 2"),
        ];
        KEYS
    }

    fn run(&self, params: &Params, config: &RunConfig) -> CliResult<Report> {
        match params.get_or("order", 1u32)? {
            1 => first_order(params, config),
            2 => second_order(params, config),
            o => Err(CliError::Usage(format!("--order must be 1 or 2, got {o}"))),
        }
    }
}

fn first_order(params: &Params, config: &RunConfig) -> CliResult<Report> {
    params.forbid(&["n"], "order 1")?;
    let side = match params.raw("side").unwrap_or("left") {
        "left" => Side::LeftVanishing,
        "right" => Side::RightVanishing,
        s => {
            return Err(CliError::Usage(format!(
                "--side must be left or right, got `{s}`"
            )))
        }
    };
    let setup = HardySetup::new(
        params.get("p")?,
        params.get("q")?,
        params.get("alpha")?,
        params.get("theta")?,
        params.get_or("radius", 1.0)?,
        side,
    )?;
    let trials: usize = params.get_or("trials", 100)?;
    let bounds = sandwich(&setup)?;
    let probe = rayleigh_probe(&setup, trials, config.seed)?;
    let power = match params.opt::<f64>("eps")? {
        Some(eps) => power_trial_ratio(&setup, eps)?.into(),
        None => Cell::Missing,
    };
    let mut report = Report::record(
        vec![
            ("p", setup.p.into()),
            ("q", setup.q.into()),
            ("alpha", setup.alpha.into()),
            ("theta", setup.theta.into()),
            ("radius", setup.radius.into()),
            ("side", params.raw("side").unwrap_or("left").into()),
            ("B", bounds.b_value.into()),
            ("k", bounds.k_factor.into()),
            ("lower", bounds.lower.into()),
            ("upper", bounds.upper.into()),
            ("max_ratio", probe.max_ratio.into()),
            ("trial_index", probe.trial_index.into()),
            ("trials_evaluated", probe.trials_evaluated.into()),
            ("power_ratio", power),
        ],
        vec![("witness", probe.witness.to_json_value())],
    );
    if probe.max_ratio > bounds.upper + SLACK {
        report.fail(format!(
            "Rayleigh ratio {} exceeds k(q,p)B = {}",
            probe.max_ratio, bounds.upper
        ));
    }
    Ok(report)
}

fn second_order(params: &Params, config: &RunConfig) -> CliResult<Report> {
    params.forbid(&["alpha", "theta", "side", "eps"], "order 2")?;
    let n: u32 = params.get("n")?;
    let p: f64 = params.get("p")?;
    let q: f64 = params.get("q")?;
    let radius: f64 = params.get_or("radius", 1.0)?;
    let trials: usize = params.get_or("trials", 100)?;
    let probe = second_order_probe(n, p, q, radius, trials, config.seed)?;
    let mut report = Report::record(
        vec![
            ("n", n.into()),
            ("p", p.into()),
            ("q", q.into()),
            ("radius", radius.into()),
            ("constant", probe.constant.into()),
            ("max_ratio", probe.max_ratio.into()),
        ],
        vec![(
            "witness",
            serde_json::to_value(&probe.witness).expect("plain floats"),
        )],
    );
    if probe.max_ratio > probe.constant + SLACK {
        report.fail(format!(
            "second-order ratio {} exceeds the constant {}",
            probe.max_ratio, probe.constant
        ));
    }
    Ok(report)
}
