//! Job documents.
//!
//! ```json
//! {"alpha": [1], "a": ["1.3"], "beta": [1], "b": ["0.3"],
//!  "sigma": "0.3", "n_max": 40, "digits": 60,
//!  "grid": {"start": 0.4, "stop": 0.9, "count": 11}, "output": "csv"}
//! ```
//!
//! Real entries are JSON numbers or strings (`"1/3"` is exact); complex entries
//! are two-element `[re, im]` arrays.

use std::collections::BTreeMap;

use foxh::scalar::{parse_real, Real};
use foxh::{HParams, Pair};
use num_complex::Complex;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(CliError::job(format!("unknown output format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Range { start: Value, stop: Value, count: usize },
    Points(Vec<Value>),
}

/// A parsed job with numeric fields kept as JSON until the precision is known.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub alpha: Vec<Value>,
    pub a: Vec<Value>,
    pub beta: Vec<Value>,
    pub b: Vec<Value>,
    pub sigma: Option<Value>,
    pub theta: Option<Value>,
    pub omega: Option<Value>,
    pub kind: Option<String>,
    pub target: Option<String>,
    pub n_max: usize,
    pub m_max: Option<usize>,
    pub nu_max: usize,
    pub digits: u32,
    pub grid: Option<Grid>,
    pub output: Format,
}

pub const DEFAULT_N_MAX: usize = 60;
pub const DEFAULT_DIGITS: u32 = 60;
pub const MIN_DIGITS: u32 = 16;

const KEYS: [&str; 15] = [
    "alpha", "a", "beta", "b", "sigma", "theta", "omega", "kind", "target", "n_max", "m_max", "nu_max", "digits",
    "grid", "output",
];

fn list(obj: &BTreeMap<String, Value>, key: &str) -> Result<Vec<Value>, CliError> {
    match obj.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Array(items)) => Ok(items.clone()),
        Some(_) => Err(CliError::job(format!("{key} must be an array"))),
    }
}

fn count(obj: &BTreeMap<String, Value>, key: &str) -> Result<Option<usize>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v
            .as_u64()
            .map(|n| Some(n as usize))
            .ok_or_else(|| CliError::job(format!("{key} must be a nonnegative integer"))),
    }
}

fn text(obj: &BTreeMap<String, Value>, key: &str) -> Result<Option<String>, CliError> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(_) => Err(CliError::job(format!("{key} must be a string"))),
    }
}

impl JobSpec {
    pub fn parse(src: &str) -> Result<Self, CliError> {
        let obj: BTreeMap<String, Value> =
            serde_json::from_str(src).map_err(|e| CliError::job(format!("job is not a JSON object: {e}")))?;
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::job(format!("unknown key {k:?}")));
        }
        let grid = match obj.get("grid") {
            None | Some(Value::Null) => None,
            Some(Value::Array(points)) => Some(Grid::Points(points.clone())),
            Some(Value::Object(r)) => {
                let get = |k: &str| r.get(k).cloned().ok_or_else(|| CliError::job(format!("grid needs {k}")));
                let count = get("count")?.as_u64().ok_or_else(|| CliError::job("grid count must be an integer"))?;
                Some(Grid::Range { start: get("start")?, stop: get("stop")?, count: count as usize })
            }
            Some(_) => return Err(CliError::job("grid must be an array or a {start, stop, count} object")),
        };
        let output = match text(&obj, "output")? {
            Some(s) => Format::parse(&s)?,
            None => Format::Csv,
        };
        let job = JobSpec {
            alpha: list(&obj, "alpha")?,
            a: list(&obj, "a")?,
            beta: list(&obj, "beta")?,
            b: list(&obj, "b")?,
            sigma: obj.get("sigma").cloned().filter(|v| !v.is_null()),
            theta: obj.get("theta").cloned().filter(|v| !v.is_null()),
            omega: obj.get("omega").cloned().filter(|v| !v.is_null()),
            kind: text(&obj, "kind")?,
            target: text(&obj, "target")?,
            n_max: count(&obj, "n_max")?.unwrap_or(DEFAULT_N_MAX),
            m_max: count(&obj, "m_max")?,
            nu_max: count(&obj, "nu_max")?.unwrap_or(foxh::oracle::DEFAULT_NU_MAX),
            digits: count(&obj, "digits")?.map(|d| d as u32).unwrap_or(DEFAULT_DIGITS),
            grid,
            output,
        };
        if job.alpha.len() != job.a.len() || job.beta.len() != job.b.len() {
            return Err(CliError::job("alpha/a and beta/b must have matching lengths"));
        }
        Ok(job)
    }

    pub fn check_digits(&self) -> Result<(), CliError> {
        if self.digits < MIN_DIGITS {
            return Err(CliError::job(format!("digits must be at least {MIN_DIGITS}, got {}", self.digits)));
        }
        if self.digits > 2400 {
            return Err(CliError::job(format!("digits above 2400 are not supported, got {}", self.digits)));
        }
        Ok(())
    }

    pub fn params<T: Real>(&self) -> Result<HParams<T>, CliError> {
        let pairs = |scales: &[Value], shifts: &[Value]| -> Result<Vec<Pair<T>>, CliError> {
            scales.iter().zip(shifts).map(|(s, x)| Ok(Pair::new(real_value::<T>(s)?, complex_value::<T>(x)?))).collect()
        };
        let upper = pairs(&self.alpha, &self.a)?;
        let lower = pairs(&self.beta, &self.b)?;
        Ok(HParams::new(upper, lower)?)
    }

    pub fn grid_points<T: Real>(&self) -> Result<Vec<Complex<T>>, CliError> {
        match &self.grid {
            None => Err(CliError::job("this command needs a grid")),
            Some(Grid::Points(p)) if p.is_empty() => Err(CliError::job("grid is empty")),
            Some(Grid::Points(p)) => p.iter().map(complex_value::<T>).collect(),
            Some(Grid::Range { count: 0, .. }) => Err(CliError::job("grid is empty")),
            Some(Grid::Range { start, stop, count }) => {
                let start = complex_value::<T>(start)?;
                let stop = complex_value::<T>(stop)?;
                if *count == 1 {
                    return Ok(vec![start]);
                }
                let step = (stop - start.clone()) / T::from_usize(count - 1).expect("grid count fits");
                Ok((0..*count)
                    .map(|i| start.clone() + step.clone() * T::from_usize(i).expect("grid index fits"))
                    .collect())
            }
        }
    }

    pub fn real_field<T: Real>(&self, value: &Option<Value>, name: &str) -> Result<Option<T>, CliError> {
        value.as_ref().map(real_value::<T>).transpose().map_err(|e| e.context(name))
    }

    pub fn complex_field<T: Real>(&self, value: &Option<Value>, name: &str) -> Result<Option<Complex<T>>, CliError> {
        value.as_ref().map(complex_value::<T>).transpose().map_err(|e| e.context(name))
    }
}

pub fn real_value<T: Real>(v: &Value) -> Result<T, CliError> {
    let parsed = match v {
        Value::Number(n) => parse_real::<T>(&n.to_string()),
        Value::String(s) => parse_real::<T>(s.trim()),
        _ => None,
    };
    parsed.ok_or_else(|| CliError::job(format!("not a real number: {v}")))
}

pub fn complex_value<T: Real>(v: &Value) -> Result<Complex<T>, CliError> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex::new(real_value(&parts[0])?, real_value(&parts[1])?)),
        _ => Ok(Complex::new(real_value(v)?, T::zero())),
    }
}
