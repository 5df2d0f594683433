//! Merging a JSON config file under command-line flags.
//!
//! Flags and config files share one schema: the argument struct of each
//! command doubles as its config-file shape. Explicit flags win; anything not
//! given falls back to the file, then to the command's defaults.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use qec_blueprint::{Error, Result};

fn read_object(path: &Path) -> Result<Map<String, Value>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Error::Config(format!("config {} must be a JSON object", path.display()))),
        Err(e) => Err(Error::Config(format!("config {}: {e}", path.display()))),
    }
}

/// Overlays the non-null fields of `flags` on the config file and re-parses
/// the result, so unknown or mistyped keys are rejected.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Path>) -> Result<T> {
    let mut merged = match config {
        Some(path) => read_object(path)?,
        None => Map::new(),
    };
    if let Value::Object(given) = serde_json::to_value(flags)? {
        for (k, v) in given {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(e.to_string()))
}

/// Loads a parameter-override file, or the defaults when none is given.
pub fn load_params<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read parameters {}: {e}", p.display())))?;
            qec_blueprint::hardware::params_from_json(&text)
        }
    }
}
