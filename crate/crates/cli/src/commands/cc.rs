use adams_core::constants::level_for_exponent;
use adams_core::moser1d::{cc_functional, energy};

use super::{key, Command, Key, Params};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::families::FamilyRegistry;
use crate::output::Report;

pub struct Cc {
    families: FamilyRegistry,
}

impl Cc {
    pub fn new() -> Self {
        Cc {
            families: FamilyRegistry::builtin(),
        }
    }
}

impl Command for Cc {
    fn name(&self) -> &'static str {
        "cc"
    }

    fn about(&self) -> &'static str {
        "One-dimensional functional J(g) = int e^(g^q - t) dt for a profile family"
    }

    fn keys(&self) -> &'static [Key] {
        const KEYS: &[Key] = &[
            key("family", "moser, test-function or json"),
            key("p", "Energy exponent; q = p/(p-1)"),
            key("a", "Concentration parameter of the moser family"),
            key("n", "Dimension of the test function (p = n/2)"),
            key("path", "Profile file for the json family"),
        ];
        KEYS
    }

    fn run(&self, params: &Params, config: &RunConfig) -> CliResult<Report> {
        let name: String = params.get("family")?;
        let family = self.families.get(&name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown family `{name}`, expected one of {:?}",
                self.families.names()
            ))
        })?;
        let unused: Vec<&str> = self
            .families
            .all_keys()
            .into_iter()
            .filter(|k| !family.keys().contains(k))
            .collect();
        params.forbid(&unused, &format!("the {name} family"))?;
        let member = family.build(params)?;
        let p = member.p;
        if p.is_nan() || p <= 1.0 {
            return Err(adams_core::Error::Domain(format!("need p > 1, got {p}")).into());
        }
        let q = p / (p - 1.0);
        let spec = &config.quadrature;
        let e = energy(&member.profile, p, 0.0, f64::INFINITY, spec)?;
        let j = cc_functional(&member.profile, q, spec)?;
        Ok(Report::record(
            vec![
                ("family", name.as_str().into()),
                ("p", p.into()),
                ("q", q.into()),
                ("energy", e.into()),
                ("J", j.into()),
                ("level", level_for_exponent(p)?.into()),
            ],
            vec![],
        ))
    }
}
