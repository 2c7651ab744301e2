//! JSON network format:
//! `{"M": int, "p": [floats], "edges": [[k, j, rate], ...], "label": string}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Network;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    #[serde(rename = "M")]
    pub m: usize,
    pub p: Vec<f64>,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default)]
    pub label: String,
}

impl From<&Network> for NetworkFile {
    fn from(net: &Network) -> Self {
        Self {
            m: net.size(),
            p: net.p_all().to_vec(),
            edges: net.edges().collect(),
            label: net.label().to_string(),
        }
    }
}

impl TryFrom<NetworkFile> for Network {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        Ok(Network::build(file.m, file.p, file.edges)?.with_label(file.label))
    }
}

impl Network {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&NetworkFile::from(self)).expect("network serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}
