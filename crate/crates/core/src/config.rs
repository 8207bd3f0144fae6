//! Optional JSON file with default run options. Command-line flags take
//! precedence over it.

use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("invalid config: {0}")]
pub struct ConfigError(#[from] serde_json::Error);

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub grad_tol: Option<f64>,
    pub length_tol: Option<f64>,
    pub eps_class: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub newton_threshold: Option<f64>,
    pub test_mode: Option<bool>,
}

pub fn parse_config(bytes: &[u8]) -> Result<ConfigFile, ConfigError> {
    Ok(serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config(b"{\"seed\": 3}").unwrap().seed == Some(3));
        assert!(parse_config(b"{\"sed\": 3}").is_err());
        assert_eq!(parse_config(b"{}").unwrap(), ConfigFile::default());
    }
}
