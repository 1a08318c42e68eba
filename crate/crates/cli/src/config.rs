//! `refute --config` files (TOML). Command-line flags win over the file.

use std::path::Path;

use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefuteFile {
    pub oracle: Option<String>,
    pub oracle_args: Option<Vec<String>>,
    pub bounds: Option<Vec<usize>>,
    pub height: Option<usize>,
    pub width: Option<u64>,
    pub start: Option<String>,
    pub seed: Option<u64>,
    pub max_rounds: Option<usize>,
    pub search_budget: Option<u64>,
    pub ladder_max: Option<u64>,
    pub random_count: Option<usize>,
    pub probe_depth: Option<usize>,
    pub probe_width: Option<u64>,
}

impl RefuteFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::precondition(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
    }
}
