//! Exact exponent arguments, config-file merging and the resolved parameter
//! record that feeds the config hash.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use dlab_core::exponents::{parse_ratio, Exponent};
use dlab_core::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Rational written as `p/q` (or an integer).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Q(pub Rational);

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_ratio(s).map(Q).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            Value::Number(n) if n.is_i64() => Ok(Q(Rational::from_integer(n.as_i64().unwrap_or(0)))),
            other => Err(serde::de::Error::custom(format!(
                "expected a rational \"p/q\", got {other}"
            ))),
        }
    }
}

/// Lebesgue exponent: `p`, `p/q` or `inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ex(pub Exponent<i64>);

impl FromStr for Ex {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Ex(Exponent::infinity())),
            t => t.parse().map(Ex).map_err(|e: dlab_core::Error| e.to_string()),
        }
    }
}

impl fmt::Display for Ex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.value() {
            None => f.write_str("inf"),
            Some(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

impl Serialize for Ex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            Value::Number(n) if n.is_i64() => n
                .as_i64()
                .unwrap_or(0)
                .to_string()
                .parse()
                .map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!(
                "expected an exponent \"p\", \"p/q\" or \"inf\", got {other}"
            ))),
        }
    }
}

/// Settings shared by every experiment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Globals {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub threads: Option<usize>,
}

pub fn read_config_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Validation(format!(
            "config {} must hold a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::Validation(format!("config {}: {e}", path.display()))),
    }
}

/// Splits the global keys off a config tree.
pub fn take_globals(map: &mut Map<String, Value>) -> Result<Globals, CliError> {
    let bad = |k: &str, v: &Value| CliError::Validation(format!("config key '{k}' has invalid value {v}"));
    let mut g = Globals::default();
    if let Some(v) = map.remove("seed") {
        g.seed = Some(v.as_u64().ok_or_else(|| bad("seed", &v))?);
    }
    if let Some(v) = map.remove("out") {
        g.out = Some(v.as_str().ok_or_else(|| bad("out", &v))?.to_string());
    }
    if let Some(v) = map.remove("threads") {
        g.threads = Some(v.as_u64().ok_or_else(|| bad("threads", &v))? as usize);
    }
    Ok(g)
}

/// Overlays the flags given on the command line onto the config file and
/// deserializes the result, rejecting keys the experiment does not know.
pub fn merge_args<A>(flags: &A, file: Map<String, Value>) -> Result<A, CliError>
where
    A: Serialize + for<'de> Deserialize<'de> + Default,
{
    let known = match serde_json::to_value(A::default()) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    if let Some(k) = file.keys().find(|k| !known.contains_key(*k)) {
        let mut names: Vec<&String> = known.keys().collect();
        names.sort();
        return Err(CliError::Validation(format!(
            "unknown config key '{k}'; expected one of {names:?}"
        )));
    }
    let mut merged = file;
    if let Ok(Value::Object(cli)) = serde_json::to_value(flags) {
        for (k, v) in cli {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Validation(format!("config: {e}")))
}

/// Resolved parameters of one run, in key order.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, Value>,
}

impl Params {
    /// Resolves `value` against `default` and records the result.
    pub fn take<T: Serialize + Clone>(&mut self, key: &str, value: &Option<T>, default: T) -> T {
        let v = value.clone().unwrap_or(default);
        self.record(key, &v);
        v
    }

    pub fn record<T: Serialize>(&mut self, key: &str, value: &T) {
        self.values
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// SHA-256 of the canonical JSON of experiment, seed and parameters.
    pub fn hash(&self, experiment: &str, seed: u64) -> String {
        let canonical = serde_json::json!({
            "experiment": experiment,
            "seed": seed,
            "params": self.values,
        });
        let digest = Sha256::digest(canonical.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.values).unwrap_or(Value::Null)
    }
}
