//! Run manifests: one JSON document naming a command, its input files and
//! every parameter, so a run can be repeated exactly.
//!
//! ```json
//! {"command": "vset", "inputs": ["diag.json"], "ks": [1, 2, 4], "n_max": 512, "seed": 7}
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;

use crate::error::CliError;
use crate::Cli;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub n_max: Option<usize>,
    pub tail_tol: Option<f64>,
    pub index: Option<usize>,
    pub n: Option<usize>,
    pub ks: Option<Vec<u32>>,
    pub seeds: Option<PathBuf>,
    pub count: Option<usize>,
    pub dump: Option<PathBuf>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: invalid manifest: {e}", path.display())))
    }

    /// The equivalent command line, parsed by the same rules as `argv`.
    pub fn to_cli(&self, base: &Path) -> Result<Cli, CliError> {
        if self.command == "run" {
            return Err(CliError::Usage("a manifest cannot run another manifest".into()));
        }
        let resolve = |p: &PathBuf| base.join(p).into_os_string();
        let mut argv: Vec<std::ffi::OsString> = vec!["framekit".into(), self.command.clone().into()];
        argv.extend(self.inputs.iter().map(resolve));

        let mut flag = |name: &str, value: std::ffi::OsString| {
            argv.push(format!("--{name}").into());
            argv.push(value);
        };
        if let Some(p) = &self.out {
            flag("out", resolve(p));
        }
        if let Some(x) = self.tol {
            flag("tol", x.to_string().into());
        }
        if let Some(x) = self.seed {
            flag("seed", x.to_string().into());
        }
        if let Some(x) = self.n_max {
            flag("n-max", x.to_string().into());
        }
        if let Some(x) = self.tail_tol {
            flag("tail-tol", x.to_string().into());
        }
        if let Some(x) = self.index {
            flag("index", x.to_string().into());
        }
        if let Some(x) = self.n {
            flag("n", x.to_string().into());
        }
        if let Some(ks) = &self.ks {
            let list: Vec<String> = ks.iter().map(u32::to_string).collect();
            flag("ks", list.join(",").into());
        }
        if let Some(p) = &self.seeds {
            flag("seeds", resolve(p));
        }
        if let Some(x) = self.count {
            flag("count", x.to_string().into());
        }
        if let Some(p) = &self.dump {
            flag("dump", resolve(p));
        }
        Ok(Cli::try_parse_from(argv)?)
    }
}
