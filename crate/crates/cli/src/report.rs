//! Output envelope shared by every command.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use qec_blueprint::Result;

pub const TOOL: &str = "qec-blueprint";

/// Where a constant came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Quoted blueprint value, used as shipped.
    PaperAnchor,
    /// Estimated from simulation data.
    Fitted,
    /// Supplied on the command line or in a config or parameter file.
    User,
    /// Computed from other values in the same artifact.
    Derived,
}

pub type Provenance = BTreeMap<String, Source>;

#[derive(Debug, Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub config: C,
    pub provenance: Provenance,
    pub result: R,
}

impl<C: Serialize, R: Serialize> Envelope<C, R> {
    pub fn new(command: impl Into<String>, seed: Option<u64>, config: C, provenance: Provenance, result: R) -> Self {
        Self {
            tool: TOOL,
            version: qec_blueprint::VERSION,
            command: command.into(),
            seed,
            config,
            provenance,
            result,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Tags each field of a parameter set as shipped or overridden.
pub fn param_provenance<T: Serialize + Default>(prefix: &str, params: &T, out: &mut Provenance) -> Result<()> {
    let given = serde_json::to_value(params)?;
    let defaults = serde_json::to_value(T::default())?;
    if let (Value::Object(g), Value::Object(d)) = (given, defaults) {
        for (k, v) in g {
            let src = if d.get(&k) == Some(&v) { Source::PaperAnchor } else { Source::User };
            out.insert(format!("{prefix}.{k}"), src);
        }
    }
    Ok(())
}

/// `key: value` lines for a JSON value, nested keys joined with dots.
pub fn render_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            Value::String(s) => {
                let _ = writeln!(out, "{prefix}: {s}");
            }
            other => {
                let _ = writeln!(out, "{prefix}: {other}");
            }
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}
