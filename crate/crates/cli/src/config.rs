//! Argument parsing into a [`RunConfig`].

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use adams_core::QuadratureSpec;
use clap::error::ErrorKind;
use clap::{Arg, ArgAction, ArgMatches};

use crate::commands::{KeyKind, Registry};
use crate::error::{CliError, CliResult};

pub const RTOL_ENV: &str = "ADAMS_QUAD_RTOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            params: BTreeMap::new(),
            output_format: OutputFormat::Json,
            output_path: None,
            seed: 0,
            quadrature: QuadratureSpec::default(),
        }
    }

    /// Applies the rel_tol override from the environment, if set.
    pub fn with_rtol_override(mut self, value: Option<String>) -> CliResult<Self> {
        if let Some(v) = value {
            self.quadrature.rel_tol = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{RTOL_ENV} is not a number: `{v}`")))?;
        }
        Ok(self)
    }
}

#[derive(Debug)]
pub enum Parsed {
    Run(RunConfig),
    /// Help or version text; print it and exit 0.
    Info(String),
}

pub fn cli(registry: &Registry) -> clap::Command {
    let mut root = clap::Command::new("adams")
        .version(env!("CARGO_PKG_VERSION"))
        .about(
            "Sharp Adams constants, concentration levels, Hardy sandwiches and extremal verdicts",
        )
        .subcommand_required(true)
        .arg(
            Arg::new("format")
                .long("format")
                .global(true)
                .value_parser(["json", "csv"])
                .default_value("json")
                .help("Output format"),
        )
        .arg(
            Arg::new("output")
                .long("output")
                .short('o')
                .global(true)
                .value_parser(clap::value_parser!(PathBuf))
                .help("Write results here instead of standard output"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .global(true)
                .value_parser(clap::value_parser!(u64))
                .default_value("0")
                .help("Seed for randomized probes"),
        )
        .arg(
            Arg::new("rel-tol")
                .long("rel-tol")
                .global(true)
                .value_parser(clap::value_parser!(f64))
                .default_value("1e-10")
                .help(format!(
                    "Quadrature relative tolerance ({RTOL_ENV} overrides)"
                )),
        )
        .arg(
            Arg::new("truncation-epsilon")
                .long("truncation-epsilon")
                .global(true)
                .value_parser(clap::value_parser!(f64))
                .default_value("1e-12")
                .help("Tail truncation threshold for improper integrals"),
        );
    for cmd in registry.iter() {
        let mut sub = clap::Command::new(cmd.name())
            .about(cmd.about())
            .allow_negative_numbers(true);
        for key in cmd.keys() {
            let arg = Arg::new(key.name).long(key.name).help(key.help);
            sub = sub.arg(match key.kind {
                KeyKind::Flag => arg.action(ArgAction::SetTrue),
                KeyKind::Value => arg.action(ArgAction::Set),
            });
        }
        root = root.subcommand(sub);
    }
    root
}

pub fn parse_args<I, T>(registry: &Registry, argv: I) -> CliResult<Parsed>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli(registry).try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Ok(Parsed::Info(e.render().to_string()))
                }
                _ => Err(CliError::Usage(e.render().to_string())),
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let cmd = registry.get(name).expect("registered subcommand");
    let mut config = RunConfig::new(name);
    for key in cmd.keys() {
        match key.kind {
            KeyKind::Flag => {
                if sub.get_flag(key.name) {
                    config.params.insert(key.name.to_string(), "true".into());
                }
            }
            KeyKind::Value => {
                if let Some(v) = sub.get_one::<String>(key.name) {
                    config.params.insert(key.name.to_string(), v.clone());
                }
            }
        }
    }
    read_globals(sub, &mut config);
    Ok(Parsed::Run(config))
}

fn read_globals(m: &ArgMatches, config: &mut RunConfig) {
    config.output_format = match m.get_one::<String>("format").map(String::as_str) {
        Some("csv") => OutputFormat::Csv,
        _ => OutputFormat::Json,
    };
    config.output_path = m.get_one::<PathBuf>("output").cloned();
    config.seed = *m.get_one::<u64>("seed").unwrap_or(&0);
    config.quadrature.rel_tol = *m.get_one::<f64>("rel-tol").unwrap_or(&1e-10);
    config.quadrature.truncation_epsilon =
        *m.get_one::<f64>("truncation-epsilon").unwrap_or(&1e-12);
}
