//! Subcommand registry.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{self, Report};

mod cc;
mod constants;
mod extremal_sweep;
mod hardy;
mod level;
mod rearrange;
mod t0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyKind {
    Value,
    Flag,
}

/// One `--name` parameter accepted by a command.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub help: &'static str,
    pub kind: KeyKind,
}

pub const fn key(name: &'static str, help: &'static str) -> Key {
    Key {
        name,
        help,
        kind: KeyKind::Value,
    }
}

pub const fn flag(name: &'static str, help: &'static str) -> Key {
    Key {
        name,
        help,
        kind: KeyKind::Flag,
    }
}

pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn keys(&self) -> &'static [Key];
    fn run(&self, params: &Params, config: &RunConfig) -> CliResult<Report>;
}

pub struct Registry {
    commands: Vec<Box<dyn Command>>,
}

impl Registry {
    pub fn builtin() -> Self {
        let mut r = Registry {
            commands: Vec::new(),
        };
        r.register(Box::new(constants::Constants));
        r.register(Box::new(level::Level));
        r.register(Box::new(hardy::Hardy));
        r.register(Box::new(rearrange::Rearrange));
        r.register(Box::new(cc::Cc::new()));
        r.register(Box::new(extremal_sweep::ExtremalSweep));
        r.register(Box::new(t0::TZero));
        r
    }

    pub fn register(&mut self, cmd: Box<dyn Command>) {
        assert!(
            self.get(cmd.name()).is_none(),
            "duplicate command {}",
            cmd.name()
        );
        self.commands.push(cmd);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands
            .iter()
            .find(|c| c.name() == name)
            .map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Command> {
        self.commands.iter().map(|c| c.as_ref())
    }
}

/// Typed access to the string parameters of a run.
pub struct Params<'a> {
    map: &'a BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    pub fn new(map: &'a BTreeMap<String, String>) -> Self {
        Params { map }
    }

    pub fn has(&self, name: &str) -> bool {
        self.map.contains_key(name)
    }

    pub fn raw(&self, name: &str) -> Option<&'a str> {
        self.map.get(name).map(String::as_str)
    }

    pub fn opt<T: FromStr>(&self, name: &str) -> CliResult<Option<T>> {
        match self.raw(name) {
            None => Ok(None),
            Some(s) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("--{name}: cannot parse `{s}`"))),
        }
    }

    pub fn get<T: FromStr>(&self, name: &str) -> CliResult<T> {
        self.opt(name)?
            .ok_or_else(|| CliError::Usage(format!("missing required --{name}")))
    }

    pub fn get_or<T: FromStr>(&self, name: &str, default: T) -> CliResult<T> {
        Ok(self.opt(name)?.unwrap_or(default))
    }

    pub fn flag(&self, name: &str) -> bool {
        self.raw(name) == Some("true")
    }

    /// Rejects keys that the chosen mode does not read.
    pub fn forbid(&self, names: &[&str], context: &str) -> CliResult<()> {
        match names.iter().find(|n| self.has(n)) {
            Some(n) => Err(CliError::Usage(format!("--{n} is not used by {context}"))),
            None => Ok(()),
        }
    }
}

/// Executes the command and writes its output; failed assertions are
/// reported after the output is written.
pub fn run(registry: &Registry, config: &RunConfig) -> CliResult<()> {
    let cmd = registry
        .get(&config.command)
        .ok_or_else(|| CliError::Usage(format!("unknown command `{}`", config.command)))?;
    for k in config.params.keys() {
        if !cmd.keys().iter().any(|key| key.name == k) {
            return Err(CliError::Usage(format!(
                "unknown key --{k} for {}",
                cmd.name()
            )));
        }
    }
    config.quadrature.validate()?;
    let report = cmd.run(&Params::new(&config.params), config)?;
    output::emit(
        &output::render(&report, config.output_format),
        config.output_path.as_deref(),
    )?;
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(report.failures.join("; ")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        let r = Registry::builtin();
        let names: Vec<_> = r.iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            [
                "constants",
                "level",
                "hardy",
                "rearrange",
                "cc",
                "extremal-sweep",
                "t0"
            ]
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut c = RunConfig::new("t0");
        c.params.insert("m".into(), "2".into());
        let err = run(&Registry::builtin(), &c).unwrap_err();
        assert_eq!(err.exit_code(), 64);
    }

    struct Failing;

    impl Command for Failing {
        fn name(&self) -> &'static str {
            "failing"
        }

        fn about(&self) -> &'static str {
            ""
        }

        fn keys(&self) -> &'static [Key] {
            &[]
        }

        fn run(&self, _: &Params, _: &RunConfig) -> CliResult<Report> {
            let mut r = Report::record(vec![("x", 1.0.into())], vec![]);
            r.fail("bound violated");
            Ok(r)
        }
    }

    #[test]
    fn failed_assertions_exit_4() {
        let mut r = Registry::builtin();
        r.register(Box::new(Failing));
        let dir = std::env::temp_dir().join(format!("adams-failing-{}.json", std::process::id()));
        let mut c = RunConfig::new("failing");
        c.output_path = Some(dir.clone());
        let err = run(&r, &c).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        // output is still written
        assert!(std::fs::read_to_string(&dir).unwrap().contains("\"x\""));
        std::fs::remove_file(dir).unwrap();
    }

    #[test]
    fn bad_quadrature_is_domain() {
        let mut c = RunConfig::new("t0");
        c.quadrature.rel_tol = 2.0;
        assert_eq!(run(&Registry::builtin(), &c).unwrap_err().exit_code(), 2);
    }
}
