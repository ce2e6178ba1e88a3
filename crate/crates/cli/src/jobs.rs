//! Job files: scenario lists and preset descriptions.

use nucleoq::pipeline::ScenarioConfig;
use nucleoq::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use toml::{Table, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    #[default]
    Run,
    Nfs,
    Sweep,
    Reproduce,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NfsJob {
    pub xi: f64,
    pub tau_max: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepJob {
    pub isotope: String,
    pub laser: String,
    pub dfoc_min_nm: f64,
    pub dfoc_max_nm: f64,
    pub steps: usize,
    #[serde(default = "yes")]
    pub constant_photon_number: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ReproduceJob {
    pub table: String,
}

/// Raw layout of a job file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    #[serde(default)]
    pub command: Command,
    pub description: Option<String>,
    /// Fields applied to every scenario unless it sets them itself.
    #[serde(default)]
    pub defaults: Table,
    /// Cartesian products of `transitions` × `lasers`.
    #[serde(default)]
    pub matrix: Vec<Table>,
    #[serde(default)]
    pub scenario: Vec<Table>,
    pub nfs: Option<NfsJob>,
    pub sweep: Option<SweepJob>,
    pub reproduce: Option<ReproduceJob>,
}

fn parse_err(context: &str, message: impl std::fmt::Display) -> Error {
    Error::Parse {
        context: context.to_string(),
        message: message.to_string(),
    }
}

impl JobFile {
    pub fn parse(text: &str, context: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| parse_err(context, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    fn merged(&self, entry: &Table) -> Table {
        let mut t = self.defaults.clone();
        for (k, v) in entry {
            t.insert(k.clone(), v.clone());
        }
        t
    }

    /// All scenarios, matrices first, in file order. Matrices expand
    /// transition-major.
    pub fn scenarios(&self, context: &str) -> Result<Vec<ScenarioConfig>> {
        let mut out = Vec::new();
        for (i, m) in self.matrix.iter().enumerate() {
            let ctx = format!("{context}: matrix {}", i + 1);
            let mut rest = m.clone();
            let list = |rest: &mut Table, key: &str| -> Result<Vec<String>> {
                let v = rest
                    .remove(key)
                    .ok_or_else(|| parse_err(&ctx, format!("missing `{key}`")))?;
                let arr = v
                    .as_array()
                    .ok_or_else(|| parse_err(&ctx, format!("`{key}` must be a list")))?;
                arr.iter()
                    .map(|x| {
                        x.as_str().map(str::to_string).ok_or_else(|| {
                            parse_err(&ctx, format!("`{key}` entries must be strings"))
                        })
                    })
                    .collect()
            };
            let transitions = list(&mut rest, "transitions")?;
            let lasers = list(&mut rest, "lasers")?;
            for t in &transitions {
                for l in &lasers {
                    let mut e = self.merged(&rest);
                    e.insert("transition".into(), Value::String(t.clone()));
                    e.insert("laser".into(), Value::String(l.clone()));
                    out.push(to_config(e, &ctx)?);
                }
            }
        }
        for (i, s) in self.scenario.iter().enumerate() {
            let ctx = format!("{context}: scenario {}", i + 1);
            out.push(to_config(self.merged(s), &ctx)?);
        }
        Ok(out)
    }

    /// Numerical options for table and sweep jobs.
    pub fn template(&self, context: &str) -> Result<ScenarioConfig> {
        to_config(self.defaults.clone(), &format!("{context}: defaults"))
    }
}

fn to_config(t: Table, ctx: &str) -> Result<ScenarioConfig> {
    let cfg: ScenarioConfig = Value::Table(t).try_into().map_err(|e| parse_err(ctx, e))?;
    Ok(cfg)
}
