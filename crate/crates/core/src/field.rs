//! Correlation values on a rectangular (distance x time) grid.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io;

/// `C(delta, t)` sampled on a grid, stored one time row after another.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationField {
    pub distances: Vec<usize>,
    pub times: Vec<f64>,
    /// Row-major by time: `values[ti * distances.len() + di]`.
    values: Vec<f64>,
    /// Observable tag, e.g. `xx_connected`.
    pub observable: String,
    /// Model parameters and provenance of the values.
    pub metadata: BTreeMap<String, Value>,
}

impl CorrelationField {
    pub fn new(
        distances: Vec<usize>,
        times: Vec<f64>,
        values: Vec<f64>,
        observable: impl Into<String>,
    ) -> Result<Self> {
        if distances.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("distances must be strictly increasing"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::input("times must be strictly increasing"));
        }
        if values.len() != distances.len() * times.len() {
            return Err(Error::input(format!(
                "expected {} x {} values, got {}",
                times.len(),
                distances.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("field contains non-finite values"));
        }
        Ok(CorrelationField {
            distances,
            times,
            values,
            observable: observable.into(),
            metadata: BTreeMap::new(),
        })
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn n_times(&self) -> usize {
        self.times.len()
    }

    pub fn n_distances(&self) -> usize {
        self.distances.len()
    }

    pub fn get(&self, ti: usize, di: usize) -> f64 {
        self.values[ti * self.distances.len() + di]
    }

    /// All distances at one time.
    pub fn row(&self, ti: usize) -> &[f64] {
        let n = self.distances.len();
        &self.values[ti * n..(ti + 1) * n]
    }

    pub fn row_mut(&mut self, ti: usize) -> &mut [f64] {
        let n = self.distances.len();
        &mut self.values[ti * n..(ti + 1) * n]
    }

    /// One distance across all times.
    pub fn column(&self, di: usize) -> Vec<f64> {
        (0..self.times.len()).map(|ti| self.get(ti, di)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Elementwise map, keeping grid and metadata.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        CorrelationField {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Writes `<stem>.csv` with columns `delta,t,value` and a `<stem>.json` sidecar.
    pub fn export(&self, dir: &Path, stem: &str) -> Result<()> {
        let rows = self.times.iter().enumerate().flat_map(|(ti, &t)| {
            self.distances
                .iter()
                .enumerate()
                .map(move |(di, &d)| [d.to_string(), io::fmt_f64(t), io::fmt_f64(self.get(ti, di))])
        });
        io::write_csv(dir.join(format!("{stem}.csv")), &["delta", "t", "value"], rows)?;
        io::write_json(dir.join(format!("{stem}.json")), &self.sidecar())
    }

    fn sidecar(&self) -> Value {
        let t_min = self.times.first().copied().unwrap_or(0.0);
        let t_max = self.times.last().copied().unwrap_or(0.0);
        serde_json::json!({
            "observable": self.observable,
            "grid": {
                "n_distances": self.distances.len(),
                "delta_min": self.distances.first(),
                "delta_max": self.distances.last(),
                "n_times": self.times.len(),
                "t_min": t_min,
                "t_max": t_max,
            },
            "metadata": self.metadata,
        })
    }

    /// Reads a field written by [`CorrelationField::export`]. The sidecar is
    /// optional; without it the observable tag is empty.
    pub fn load(csv_path: &Path) -> Result<Self> {
        let text = fs::read_to_string(csv_path)?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::input("empty field CSV"))?;
        if header.trim() != "delta,t,value" {
            return Err(Error::input(format!(
                "{}: expected header `delta,t,value`, found `{header}`",
                csv_path.display()
            )));
        }
        let mut triples = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::input(format!("{}: malformed row {}", csv_path.display(), n + 2));
            let mut parts = line.split(',');
            let d: usize = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let t: f64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let v: f64 = parts.next().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            if parts.next().is_some() {
                return Err(bad());
            }
            triples.push((d, t, v));
        }
        let mut distances: Vec<usize> = triples.iter().map(|x| x.0).collect();
        distances.sort_unstable();
        distances.dedup();
        let mut times: Vec<f64> = triples.iter().map(|x| x.1).collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        let nd = distances.len();
        if triples.len() != nd * times.len() {
            return Err(Error::input(format!("{}: grid is not rectangular", csv_path.display())));
        }
        let mut values = vec![f64::NAN; triples.len()];
        for (d, t, v) in triples {
            let di = distances.binary_search(&d).unwrap();
            let ti = times.binary_search_by(|x| x.total_cmp(&t)).unwrap();
            values[ti * nd + di] = v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::input(format!("{}: duplicate grid points", csv_path.display())));
        }
        let mut field = CorrelationField::new(distances, times, values, "")?;
        let side = csv_path.with_extension("json");
        if side.exists() {
            let meta: Value = serde_json::from_str(&fs::read_to_string(&side)?)
                .map_err(|e| Error::input(format!("{}: {e}", side.display())))?;
            if let Some(obs) = meta.get("observable").and_then(Value::as_str) {
                field.observable = obs.to_string();
            }
            if let Some(Value::Object(m)) = meta.get("metadata") {
                field.metadata = m.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            }
        }
        Ok(field)
    }
}
