//! Flat TOML run configuration. Keys mirror the command-line flags one-to-one;
//! a flag given on the command line overrides the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub preset: Option<String>,
    #[serde(rename = "L")]
    pub length: Option<f64>,
    #[serde(rename = "N")]
    pub points: Option<usize>,
    pub b: Option<f64>,
    pub eps: Option<f64>,
    pub t: Option<f64>,
    pub engine: Option<String>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub claim: Option<String>,
    pub times: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub out_dir: Option<PathBuf>,
    pub kernel_check: Option<bool>,
    pub probe: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_keys() {
        let c = FileConfig::parse("preset = \"bump12\"\nL = 40.0\nN = 65536\ntimes = [0.5, 1.0]\n")
            .unwrap();
        assert_eq!(c.preset.as_deref(), Some("bump12"));
        assert_eq!(c.length, Some(40.0));
        assert_eq!(c.points, Some(65536));
        assert_eq!(c.times, Some(vec![0.5, 1.0]));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(FileConfig::parse("seed = 3\n").is_err());
        assert!(FileConfig::parse("[grid]\nL = 40.0\n").is_err());
    }
}
