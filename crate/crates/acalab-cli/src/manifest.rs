//! Run manifests: every artifact records the exact invocation that made it.

use serde::Serialize;

/// The full recipe for one command run. Identical manifests produce
/// byte-identical artifacts, so a manifest doubles as a cache key and a
/// reproduction script.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    /// Every parameter that influences the output, including defaults.
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Destination paths; "-" stands for stdout.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        subcommand: &'static str,
        parameters: serde_json::Value,
        seed: Option<u64>,
        outputs: Vec<String>,
    ) -> RunManifest {
        RunManifest {
            tool: "acalab",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters,
            seed,
            outputs,
        }
    }

    /// Compact single-line JSON form.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("manifest fields always serialize")
    }

    /// The manifest as a `#` comment line for text artifacts.
    pub fn comment_line(&self) -> String {
        format!("# manifest: {}", self.to_line())
    }

    /// The manifest as a JSON value for embedding in JSON artifacts.
    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("manifest fields always serialize")
    }
}

/// Names an output target for a manifest: a real path or stdout.
pub fn output_name(path: Option<&std::path::Path>) -> String {
    match path {
        Some(p) => p.display().to_string(),
        None => "-".to_string(),
    }
}
