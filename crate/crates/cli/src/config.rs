use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use origami_ring::backend::AngleSpec;

pub const TOOL: &str = "origami-ring";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that determines a run's output. Written into every output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub angles: Vec<AngleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    pub precision: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewport: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
}

impl RunConfig {
    pub fn header(&self) -> Header {
        Header {
            tool: TOOL.into(),
            version: VERSION.into(),
            config: self.clone(),
        }
    }

    /// One-line form for comment headers in CSV and SVG.
    pub fn header_line(&self) -> String {
        let cfg = serde_json::to_string(self).expect("serializable");
        format!("{TOOL} {VERSION} {cfg}")
    }
}
