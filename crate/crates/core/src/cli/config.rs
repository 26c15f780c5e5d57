//! Run configuration: a JSON document plus `--set` overrides.

use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::linalg::{Ket, C64};
use crate::model::json::{ComplexJson, ModelJson, UnravelingJson};
use crate::model::{LindbladModel, UnravelingSpec};
use crate::scenarios::Scenario;

const KNOWN_KEYS: [&str; 14] = [
    "scenario",
    "params",
    "model",
    "dim",
    "hamiltonian",
    "channels",
    "unraveling",
    "sweep",
    "grid",
    "search",
    "time",
    "ensemble",
    "validate",
    "seed",
];

/// Reads a config file; `None` gives an empty configuration.
pub fn load(path: Option<&Path>) -> Result<Value> {
    let value = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("config {}: {e}", p.display())))?
        }
        None => Value::Object(Map::new()),
    };
    if !value.is_object() {
        return Err(Error::Config("config must be a JSON object".into()));
    }
    Ok(value)
}

/// Rejects unknown top-level keys so typos do not pass silently.
pub fn check_keys(value: &Value) -> Result<()> {
    if let Some(obj) = value.as_object() {
        if let Some(bad) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown config key '{bad}'")));
        }
    }
    Ok(())
}

/// `--set` value: JSON when it parses, a plain string otherwise.
pub fn parse_override(arg: &str) -> Result<(String, Value)> {
    let (key, raw) =
        arg.split_once('=').ok_or_else(|| Error::Config(format!("--set expects key=value, got '{arg}'")))?;
    if key.is_empty() {
        return Err(Error::Config(format!("--set has an empty key in '{arg}'")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

/// Writes `value` at a dotted path, creating objects on the way. Numeric
/// segments index into existing arrays.
pub fn set_path(root: &mut Value, path: &str, value: Value) -> Result<()> {
    let mut cur = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            return Err(Error::Config(format!("empty segment in path '{path}'")));
        }
        let last = i + 1 == parts.len();
        if let Value::Array(items) = cur {
            let idx: usize =
                part.parse().map_err(|_| Error::Config(format!("'{part}' in '{path}' is not an index")))?;
            let len = items.len();
            let slot = items
                .get_mut(idx)
                .ok_or_else(|| Error::Config(format!("index {idx} out of range ({len}) in '{path}'")))?;
            if last {
                *slot = value;
                return Ok(());
            }
            cur = slot;
            continue;
        }
        if !cur.is_object() {
            *cur = Value::Object(Map::new());
        }
        let obj = cur.as_object_mut().expect("object");
        if last {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

pub fn get_path<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(root, |v, part| match v {
        Value::Array(items) => part.parse::<usize>().ok().and_then(|i| items.get(i)),
        _ => v.get(part),
    })
}

fn section<T: for<'de> Deserialize<'de>>(cfg: &Value, key: &str) -> Result<Option<T>> {
    match cfg.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|e| Error::Config(format!("{key}: {e}"))),
    }
}

pub fn required<T: for<'de> Deserialize<'de>>(cfg: &Value, key: &str, mode: &str) -> Result<T> {
    section(cfg, key)?.ok_or_else(|| Error::Config(format!("{mode} needs a '{key}' section in the config")))
}

pub fn optional<T: for<'de> Deserialize<'de> + Default>(cfg: &Value, key: &str) -> Result<T> {
    Ok(section(cfg, key)?.unwrap_or_default())
}

/// The model described by the config and its unraveling.
pub fn build_model(cfg: &Value) -> Result<(LindbladModel, UnravelingSpec)> {
    let (model, file_spec) = if let Some(name) = cfg.get("scenario") {
        let name = name.as_str().ok_or_else(|| Error::Config("'scenario' must be a string".into()))?;
        let mut tagged = Map::new();
        tagged.insert("scenario".into(), Value::String(name.into()));
        tagged.insert("params".into(), cfg.get("params").cloned().unwrap_or_else(|| Value::Object(Map::new())));
        Scenario::by_name(name)?;
        let scenario: Scenario =
            serde_json::from_value(Value::Object(tagged)).map_err(|e| Error::Config(format!("params: {e}")))?;
        (scenario.build()?, None)
    } else if cfg.get("hamiltonian").is_some() {
        let mut sub = Map::new();
        for key in ["dim", "hamiltonian", "channels"] {
            if let Some(v) = cfg.get(key) {
                sub.insert(key.into(), v.clone());
            }
        }
        let m: ModelJson =
            serde_json::from_value(Value::Object(sub)).map_err(|e| Error::Config(format!("model: {e}")))?;
        (m.to_model()?.0, None)
    } else if let Some(path) = cfg.get("model").and_then(Value::as_str) {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read model {path}: {e}")))?;
        let m: ModelJson = serde_json::from_str(&text).map_err(|e| Error::Config(format!("model {path}: {e}")))?;
        let (model, spec) = m.to_model()?;
        (model, Some(spec))
    } else {
        return Err(Error::Config("no model given: use --scenario, a 'scenario' key, or a model schema".into()));
    };
    let spec = match section::<UnravelingJson>(cfg, "unraveling")? {
        Some(u) => u.to_spec(model.channels().len())?,
        None => file_spec.unwrap_or_else(|| UnravelingSpec::standard(model.channels().len())),
    };
    Ok((model, spec))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points < 2 {
            return Err(Error::Config(format!("sweep needs at least 2 points, got {}", self.points)));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config(format!("sweep range [{}, {}] is invalid", self.min, self.max)));
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        Ok((0..self.points).map(|k| if k + 1 == self.points { self.max } else { self.min + h * k as f64 }).collect())
    }
}

/// Point count for one or both axes.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Same(usize),
    Each([usize; 2]),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub points: Points,
    /// Channels displaced by the grid value; all channels when absent.
    #[serde(default)]
    pub channels: Option<Vec<usize>>,
}

pub fn axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::Config(format!("grid axis [{lo}, {hi}] with {n} points is invalid")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|k| if k + 1 == n { hi } else { lo + h * k as f64 }).collect())
}

impl GridConfig {
    pub fn axes(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (nr, ni) = match self.points {
            Points::Same(n) => (n, n),
            Points::Each([a, b]) => (a, b),
        };
        Ok((axis(self.re[0], self.re[1], nr)?, axis(self.im[0], self.im[1], ni)?))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    /// `"beta"` for a complex displacement, otherwise a dotted config path.
    #[serde(default = "default_over")]
    pub over: String,
    #[serde(default)]
    pub re: Option<[f64; 2]>,
    #[serde(default)]
    pub im: Option<[f64; 2]>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub x0: Option<Value>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub starts: Option<usize>,
    #[serde(default)]
    pub channels: Option<Vec<usize>>,
}

fn default_over() -> String {
    "beta".into()
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t0: 0.0, t1: 2.0, steps: 1000 }
    }
}

impl TimeConfig {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.t1, self.steps).map_err(|e| Error::Config(format!("time: {e}")))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Basis(usize),
    Amplitudes {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    List(Vec<ComplexJson>),
}

impl InitialState {
    pub fn ket(&self, dim: usize) -> Result<Ket> {
        let amps: Vec<C64> = match self {
            InitialState::Basis(i) => return Ket::basis(dim, *i),
            InitialState::Amplitudes { re, im } => {
                if let Some(im) = im {
                    if im.len() != re.len() {
                        return Err(Error::LengthMismatch { expected: re.len(), found: im.len() });
                    }
                }
                re.iter().enumerate().map(|(k, &r)| C64::new(r, im.as_ref().map_or(0.0, |v| v[k]))).collect()
            }
            InitialState::List(v) => v.iter().map(|&z| z.into()).collect(),
        };
        if amps.len() != dim {
            return Err(Error::LengthMismatch { expected: dim, found: amps.len() });
        }
        Ket::new(amps)?.normalized()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    #[serde(default = "default_initial")]
    pub initial_state: InitialState,
}

fn default_trajectories() -> usize {
    1000
}

fn default_initial() -> InitialState {
    InitialState::Basis(0)
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { trajectories: default_trajectories(), initial_state: default_initial() }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    #[serde(default = "default_cases")]
    pub cases: usize,
}

fn default_cases() -> usize {
    100
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { cases: default_cases() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn dotted_set_creates_objects() {
        let mut v = json!({});
        set_path(&mut v, "params.drive.re", json!(0.25)).unwrap();
        assert_eq!(v, json!({"params": {"drive": {"re": 0.25}}}));
        set_path(&mut v, "params.omega", json!(2)).unwrap();
        assert_eq!(get_path(&v, "params.omega"), Some(&json!(2)));
    }

    #[test]
    fn dotted_set_indexes_arrays() {
        let mut v = json!({"unraveling": {"betas": [{"re": 0}, {"re": 1}]}});
        set_path(&mut v, "unraveling.betas.1.im", json!(0.5)).unwrap();
        assert_eq!(v["unraveling"]["betas"][1]["im"], json!(0.5));
        assert!(set_path(&mut v, "unraveling.betas.7.im", json!(0.5)).is_err());
    }

    #[test]
    fn override_parsing() {
        assert_eq!(parse_override("a.b=3").unwrap(), ("a.b".into(), json!(3)));
        assert_eq!(parse_override("scenario=kerr").unwrap(), ("scenario".into(), json!("kerr")));
        assert!(parse_override("novalue").is_err());
    }

    #[test]
    fn model_from_scenario_and_schema() {
        let (m, spec) = build_model(&json!({"scenario": "kerr", "unraveling": {"beta": {"re": 0.1}}})).unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(spec.betas()[0], C64::new(0.1, 0.0));
        let (m, _) = build_model(&json!({"dim": 2, "hamiltonian": {"re": [[1, 0], [0, -1]]}})).unwrap();
        assert_eq!(m.channels().len(), 0);
        assert!(build_model(&json!({})).is_err());
        assert!(build_model(&json!({"scenario": "kerr", "params": {"bogus": 1}})).is_err());
    }

    #[test]
    fn sweep_values() {
        let s = SweepConfig { param: "x".into(), min: 0.0, max: 1.0, points: 3 };
        assert_eq!(s.values().unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(SweepConfig { points: 1, ..s }.values().is_err());
    }
}
