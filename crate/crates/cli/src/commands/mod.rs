mod analyze;
mod profile;
mod report;
mod simulate;

pub use analyze::{analyze, AnalyzeOutcome};
pub use profile::{profile, ProfileOutcome};
pub use report::{report, ReportOutcome};
pub use simulate::{simulate, trace_file_name};

use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::manifest::Manifest;

/// Settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Context {
    pub manifest: Option<Manifest>,
    pub out_dir: Option<PathBuf>,
    pub seed_override: Option<u64>,
}

impl Context {
    pub fn new(manifest: Option<&Path>, out: Option<PathBuf>, seed_override: Option<u64>) -> Result<Self> {
        let manifest = manifest.map(Manifest::load).transpose()?;
        let out_dir = out.or_else(|| manifest.as_ref().map(|m| m.output_dir.clone()));
        Ok(Self {
            manifest,
            out_dir,
            seed_override,
        })
    }

    pub fn manifest(&self) -> Result<&Manifest> {
        self.manifest
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs --manifest".into()))
    }

    pub fn out_dir(&self) -> Result<&Path> {
        self.out_dir
            .as_deref()
            .ok_or_else(|| CliError::Usage("no output directory: pass --out or --manifest".into()))
    }

    pub fn traces_dir(&self) -> Result<PathBuf> {
        Ok(self.out_dir()?.join("traces"))
    }

    pub fn measures_csv(&self, explicit: Option<&Path>) -> Result<PathBuf> {
        match explicit {
            Some(p) => Ok(p.to_path_buf()),
            None => Ok(self.out_dir()?.join("measures.csv")),
        }
    }
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(CliError::io(path))
}
