//! Experiment and suite reports with a canonical, byte-stable JSON form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SUITE_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Relations,
    Reduction,
    NotRotated,
    Unitarity,
    Variances,
    SqueezeAction,
    Factorization,
    Completeness,
    Orthogonality,
    Asymptotics,
    Properties,
}

/// Acceptance bound on a single metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "op", content = "value")]
pub enum Bound {
    /// metric < value
    Below(f64),
    /// metric > value
    Above(f64),
    /// metric ≥ value
    AtLeast(f64),
}

impl Bound {
    pub fn holds(self, x: f64) -> bool {
        match self {
            Bound::Below(b) => x < b,
            Bound::Above(b) => x > b,
            Bound::AtLeast(b) => x >= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub params: BTreeMap<String, Value>,
    /// Non-finite values serialize as `null` and read back as NaN.
    #[serde(deserialize_with = "metrics_with_nulls")]
    pub metrics: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, Bound>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(kind: ExperimentKind) -> Self {
        ExperimentReport {
            kind,
            params: BTreeMap::new(),
            metrics: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Records an unbounded trend metric.
    pub fn metric(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn bounded(&mut self, key: impl Into<String>, value: f64, bound: Bound) {
        let key = key.into();
        self.metrics.insert(key.clone(), value);
        self.tolerances.insert(key, bound);
    }

    /// Records a failure that prevented a metric from being computed.
    pub fn failed(&mut self, key: impl Into<String>, bound: Bound) {
        self.bounded(key, f64::NAN, bound);
    }

    /// Recomputes `pass` from metrics and tolerances alone.
    pub fn finish(mut self) -> Self {
        self.pass = self.evaluate();
        self
    }

    pub fn evaluate(&self) -> bool {
        self.tolerances.iter().all(|(k, b)| self.metrics.get(k).is_some_and(|x| b.holds(*x)))
    }

    /// Bounded metrics that fail their tolerance.
    pub fn violations(&self) -> Vec<(&str, f64, Bound)> {
        self.tolerances
            .iter()
            .filter_map(|(k, b)| {
                let x = self.metrics.get(k).copied().unwrap_or(f64::NAN);
                (!b.holds(x)).then_some((k.as_str(), x, *b))
            })
            .collect()
    }

    /// `metric,value,bound,limit,pass` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,value,bound,limit,pass\n");
        for (k, x) in &self.metrics {
            let (op, limit, ok) = match self.tolerances.get(k) {
                Some(b) => {
                    let (op, v) = match b {
                        Bound::Below(v) => ("below", *v),
                        Bound::Above(v) => ("above", *v),
                        Bound::AtLeast(v) => ("at_least", *v),
                    };
                    (op, fmt_f64(v), b.holds(*x).to_string())
                }
                None => ("", String::new(), String::new()),
            };
            let _ = writeln!(out, "{k},{},{op},{limit},{ok}", fmt_f64(*x));
        }
        out
    }
}

fn metrics_with_nulls<'de, D>(d: D) -> Result<BTreeMap<String, f64>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    let raw = BTreeMap::<String, Option<f64>>::deserialize(d)?;
    Ok(raw.into_iter().map(|(k, v)| (k, v.unwrap_or(f64::NAN))).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_version: String,
    pub seed: u64,
    pub experiments: Vec<ExperimentReport>,
    pub overall_pass: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

pub fn assemble_report(experiments: Vec<ExperimentReport>, seed: u64) -> SuiteReport {
    let overall_pass = experiments.iter().all(|e| e.pass);
    SuiteReport { suite_version: SUITE_VERSION.to_string(), seed, experiments, overall_pass }
}

/// 17 significant digits, so every double round-trips.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Pretty JSON with sorted object keys and floats printed by [`fmt_f64`].
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(ok: bool) -> ExperimentReport {
        let mut r = ExperimentReport::new(ExperimentKind::Unitarity).param("theta", 0.5);
        r.bounded("dev", if ok { 1e-13 } else { 1.0 }, Bound::Below(1e-11));
        r.metric("trend", 0.25);
        r.finish()
    }

    #[test]
    fn empty_suite_passes() {
        let s = assemble_report(vec![], 7);
        assert!(s.overall_pass && s.experiments.is_empty());
        assert_eq!(s.seed, 7);
    }

    #[test]
    fn one_failure_fails_suite() {
        assert!(!assemble_report(vec![sample(true), sample(false)], 0).overall_pass);
        assert!(assemble_report(vec![sample(true)], 0).overall_pass);
        assert_eq!(sample(false).violations().len(), 1);
    }

    #[test]
    fn pass_depends_only_on_metrics() {
        let mut r = sample(true);
        r.pass = false;
        assert!(r.evaluate());
        let mut r = ExperimentReport::new(ExperimentKind::Variances);
        r.failed("missing", Bound::AtLeast(0.0));
        let r = r.finish();
        assert!(!r.pass);
        let back: ExperimentReport = serde_json::from_str(&to_canonical_json(&r)).unwrap();
        assert!(back.metrics["missing"].is_nan() && !back.evaluate());
    }

    #[test]
    fn json_is_canonical_and_round_trips() {
        let s = assemble_report(vec![sample(true), sample(false)], 3);
        let a = s.to_json();
        assert_eq!(a, s.clone().to_json());
        assert!(a.contains("1.0000000000000000e-13"));
        let back: SuiteReport = serde_json::from_str(&a).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_rows() {
        let csv = sample(false).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("dev,1.0000000000000000e0,below,"));
        assert!(lines[1].ends_with("false"));
        assert!(lines[2].ends_with(",,,"));
    }
}
