//! Profile families accepted by `cc`.

use adams_core::extremal::{make_params, test_function};
use adams_core::moser1d::moser_family;
use adams_core::PiecewiseProfile;

use crate::commands::Params;
use crate::error::{CliError, CliResult};

pub struct Member {
    pub profile: PiecewiseProfile,
    pub p: f64,
}

pub trait ProfileFamily: Send + Sync {
    fn name(&self) -> &'static str;
    /// Keys this family reads, beyond `family`.
    fn keys(&self) -> &'static [&'static str];
    fn build(&self, params: &Params) -> CliResult<Member>;
}

pub struct Moser;

impl ProfileFamily for Moser {
    fn name(&self) -> &'static str {
        "moser"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["p", "a"]
    }

    fn build(&self, params: &Params) -> CliResult<Member> {
        let p = params.get("p")?;
        Ok(Member {
            profile: moser_family(params.get("a")?, p)?,
            p,
        })
    }
}

/// The extremal test function for even n, with p = n/2.
pub struct TestFunction;

impl ProfileFamily for TestFunction {
    fn name(&self) -> &'static str {
        "test-function"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["n", "p"]
    }

    fn build(&self, params: &Params) -> CliResult<Member> {
        let n: u32 = params.get("n")?;
        let p = n as f64 / 2.0;
        if let Some(given) = params.opt::<f64>("p")? {
            if given != p {
                return Err(adams_core::Error::Domain(format!(
                    "the test function fixes p = n/2 = {p}, got {given}"
                ))
                .into());
            }
        }
        Ok(Member {
            profile: test_function(&make_params(n)?)?,
            p,
        })
    }
}

/// A profile read from a JSON file in the entry-list format.
pub struct JsonFile;

impl ProfileFamily for JsonFile {
    fn name(&self) -> &'static str {
        "json"
    }

    fn keys(&self) -> &'static [&'static str] {
        &["p", "path"]
    }

    fn build(&self, params: &Params) -> CliResult<Member> {
        let path: String = params.get("path")?;
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let profile: PiecewiseProfile =
            serde_json::from_str(&text).map_err(|e| CliError::io(&path, e))?;
        Ok(Member {
            profile,
            p: params.get("p")?,
        })
    }
}

pub struct FamilyRegistry {
    families: Vec<Box<dyn ProfileFamily>>,
}

impl FamilyRegistry {
    pub fn builtin() -> Self {
        FamilyRegistry {
            families: vec![Box::new(Moser), Box::new(TestFunction), Box::new(JsonFile)],
        }
    }

    pub fn get(&self, name: &str) -> Option<&dyn ProfileFamily> {
        self.families
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    /// Every key read by some family.
    pub fn all_keys(&self) -> Vec<&'static str> {
        let mut keys: Vec<_> = self
            .families
            .iter()
            .flat_map(|f| f.keys().iter().copied())
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }
}
