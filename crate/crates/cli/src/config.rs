//! Configuration resolution: defaults, then a JSON file, then command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

/// Invalid configuration; maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Inclusive distance range written `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub lo: usize,
    pub hi: usize,
}

impl Window {
    pub fn pair(self) -> (usize, usize) {
        (self.lo, self.hi)
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
        let lo = lo.trim().parse().map_err(|_| format!("bad lower end in `{s}`"))?;
        let hi = hi.trim().parse().map_err(|_| format!("bad upper end in `{s}`"))?;
        if hi < lo {
            return Err(format!("empty range `{s}`"));
        }
        Ok(Window { lo, hi })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair([usize; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Pair([lo, hi]) => format!("{lo}:{hi}").parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Reads the optional config file as an object of the subcommand's fields.
/// Unknown fields and type errors are reported with line and column.
pub fn read_file<C: DeserializeOwned>(path: &Path) -> anyhow::Result<Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str::<C>(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(m)) => Ok(m),
        _ => Err(config_error(format!("{}: expected a JSON object", path.display()))),
    }
}

/// Overlays flags that were given on top of the file values. Unset flags
/// serialize as `null` and `false`, and leave the file value in place.
pub fn merge<C: Serialize + DeserializeOwned>(file: Map<String, Value>, flags: &C) -> anyhow::Result<C> {
    let mut merged = file;
    let Value::Object(given) = serde_json::to_value(flags)? else {
        unreachable!("subcommand configs serialize to objects")
    };
    for (k, v) in given {
        if !v.is_null() && v != Value::Bool(false) {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| config_error(e.to_string()))
}

pub fn require<T: Copy>(value: Option<T>, name: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| config_error(format!("missing required parameter `{name}`")))
}
