use adams_core::constants::SphereConstants;
use adams_core::rearrange::{
    decreasing_rearrangement, radial_poisson_solution, symmetrize, talenti_radial_solution,
    RadialProfile, SampledFunction,
};

use super::{key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Report, Table};

const SHELLS_PER_SAMPLE: usize = 20;

pub struct Rearrange;

impl Command for Rearrange {
    fn name(&self) -> &'static str {
        "rearrange"
    }

    fn about(&self) -> &'static str {
        "Rearrangement, symmetrization and the Talenti comparison for step data"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[
            key(
                "cells",
                "Step data as measure:value pairs, e.g. 0.5:2,0.3:-1",
            ),
            key("input", "CSV file with columns measure,value"),
            key("n", "Dimension (default 2)"),
            key(
                "radius",
                "Ball radius (default: the ball whose volume is the total measure)",
            ),
            key("samples", "Radii in the output table (default 101)"),
        ];
        KEYS
    }

    fn run(&self, params: &Params, _: &RunConfig) -> CliResult<Report> {
        let cells = match (params.raw("cells"), params.raw("input")) {
            (Some(s), None) => parse_cells(s)?,
            (None, Some(path)) => read_cells(path)?,
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --cells and --input".into(),
                ))
            }
        };
        let f = SampledFunction::new(cells)?;
        let n: u32 = params.get_or("n", 2)?;
        let omega = SphereConstants::new(n)?.omega_ball;
        let fit = (f.total_measure() / omega).powf(1.0 / n as f64);
        let radius: f64 = params.get_or("radius", fit)?;
        let samples: usize = params.get_or("samples", 101)?;
        if samples < 2 {
            return Err(CliError::Usage("--samples must be at least 2".into()));
        }

        let sharp = decreasing_rearrangement(&f)?;
        let f_star = symmetrize(&f, n)?;
        let u = radial_poisson_solution(&f, n, radius)?;
        let v = talenti_radial_solution(&sharp, n, radius)?;
        let u_star = symmetrize(&shells(&u, samples * SHELLS_PER_SAMPLE)?, n)?;

        let mut report = Report {
            json: serde_json::Value::Null,
            table: Table::new(&["r", "f_star", "u", "u_star", "talenti"]),
            failures: Vec::new(),
        };
        let mut sup_u = 0.0f64;
        let mut prev_v = f64::INFINITY;
        for i in 0..samples {
            let r = radius * i as f64 / (samples - 1) as f64;
            let uv = u.value(r)?;
            let vv = v.value(r)?;
            sup_u = sup_u.max(uv.abs());
            if vv > prev_v || vv < 0.0 {
                report.fail(format!(
                    "Talenti solution not nonnegative and nonincreasing at r = {r}"
                ));
            }
            prev_v = vv;
            report.table.push(vec![
                r.into(),
                step_value(&f_star, r).into(),
                uv.into(),
                step_value(&u_star, r).into(),
                vv.into(),
            ]);
        }
        if sup_u > v.value(0.0)? * (1.0 + 1e-12) {
            report.fail(format!(
                "sup |u| = {sup_u} exceeds v(0) = {}",
                v.value(0.0)?
            ));
        }
        let levels: Vec<f64> = f.cells().iter().map(|c| c.1.abs()).chain([0.0]).collect();
        if levels
            .iter()
            .any(|t| f.distribution(*t) != sharp.distribution(*t))
        {
            report.fail("distribution functions differ");
        }
        let nf = n as f64;
        let norms: Vec<(f64, f64, f64)> = [1.0, 2.0, nf / 2.0]
            .iter()
            .map(|&p| (p, f.lp_sum(p), sharp.lp_sum(p)))
            .collect();
        if norms.iter().any(|(_, a, b)| a != b) {
            report.fail("p-norms differ after rearrangement");
        }

        report.json = serde_json::json!({
            "n": n,
            "radius": radius,
            "total_measure": f.total_measure(),
            "rearranged": sharp.cells().iter().map(|(mu, v)| [*mu, *v]).collect::<Vec<_>>(),
            "lp_sums": norms.iter().map(|(p, a, b)| serde_json::json!({"p": p, "f": a, "f_sharp": b})).collect::<Vec<_>>(),
            "talenti": v.profile.to_json_value(),
            "samples": report.table.to_json(),
        });
        Ok(report)
    }
}

fn parse_cells(s: &str) -> CliResult<Vec<(f64, f64)>> {
    s.split(',')
        .map(|pair| {
            let (mu, v) = pair.split_once(':').ok_or_else(|| {
                CliError::Usage(format!("--cells: expected measure:value, got `{pair}`"))
            })?;
            let num = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--cells: cannot parse `{x}`")))
            };
            Ok((num(mu)?, num(v)?))
        })
        .collect()
}

#[derive(serde::Deserialize)]
struct CellRow {
    measure: f64,
    value: f64,
}

fn read_cells(path: &str) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    rdr.deserialize::<CellRow>()
        .map(|row| {
            row.map(|r| (r.measure, r.value))
                .map_err(|e| CliError::io(path, e))
        })
        .collect()
}

/// |u| sampled at shell midpoints, weighted by shell volume.
fn shells(u: &RadialProfile, count: usize) -> CliResult<SampledFunction> {
    let omega = SphereConstants::new(u.dim)?.omega_ball;
    let nf = u.dim as f64;
    let mut cells = Vec::with_capacity(count);
    for i in 0..count {
        let a = u.radius * i as f64 / count as f64;
        let b = u.radius * (i + 1) as f64 / count as f64;
        cells.push((
            omega * (b.powf(nf) - a.powf(nf)),
            u.value(0.5 * (a + b))?.abs(),
        ));
    }
    Ok(SampledFunction::new(cells)?)
}

/// Value of a symmetrized step profile, zero outside its support.
fn step_value(p: &RadialProfile, r: f64) -> f64 {
    if r > p.radius {
        0.0
    } else {
        p.value(r).unwrap_or(0.0)
    }
}
