//! Result documents written by the CLI.
//!
//! JSON is the canonical form and round-trips every float exactly (shortest
//! round-trip formatting). Complex matrices are stored as separate `real` and
//! `imag` row arrays. CSV is a flat `section,name,index,value` listing of the
//! same content for spreadsheet use.
//!
//! Holonomy matrices follow the convention `W = P exp(i oint A)`, later
//! parameter values multiplied on the left, `A^{ab} = i <v_a|d v_b>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::smallcomplex::{DynMatrix, C64};

pub const SCHEMA_VERSION: u32 = 1;

/// A numeric output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Value {
    Real(f64),
    Integer(i64),
    Text(String),
    Vector(Vec<f64>),
    Complex { re: f64, im: f64 },
    ComplexVector { real: Vec<f64>, imag: Vec<f64> },
    Matrix { real: Vec<Vec<f64>>, imag: Vec<Vec<f64>> },
    Table { columns: Vec<String>, rows: Vec<Vec<f64>> },
}

impl Value {
    pub fn complex(z: C64) -> Self {
        Value::Complex { re: z.re, im: z.im }
    }

    pub fn matrix(m: &DynMatrix) -> Self {
        Value::Matrix { real: m.real_parts(), imag: m.imag_parts() }
    }

    pub fn complex_vector(v: &[C64]) -> Self {
        Value::ComplexVector { real: v.iter().map(|z| z.re).collect(), imag: v.iter().map(|z| z.im).collect() }
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Integer(x as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

/// One tolerance outcome: `lower (<|<=) value <= upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<f64>,
    /// Whether the lower bound is strict.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub strict_lower: bool,
    pub passed: bool,
}

impl Check {
    /// `value <= tol`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check { name: name.into(), value, lower: None, upper: Some(tol), strict_lower: false, passed: value <= tol }
    }

    /// `value > bound`.
    pub fn exceeds(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, lower: Some(bound), upper: None, strict_lower: true, passed: value > bound }
    }

    /// `lo <= value <= hi`.
    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Check { name: name.into(), value, lower: Some(lo), upper: Some(hi), strict_lower: false, passed: lo <= value && value <= hi }
    }

    /// A yes/no property, recorded as 1 or 0.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        let value = if ok { 1.0 } else { 0.0 };
        Check { name: name.into(), value, lower: Some(1.0), upper: None, strict_lower: false, passed: ok }
    }

    pub fn describe(&self) -> String {
        let bound = match (self.lower, self.upper) {
            (Some(lo), Some(hi)) => format!("in [{lo:e}, {hi:e}]"),
            (Some(lo), None) if self.strict_lower => format!("> {lo:e}"),
            (Some(_), None) => "holds".to_string(),
            (None, Some(hi)) => format!("<= {hi:e}"),
            (None, None) => String::new(),
        };
        format!("{} {}: {:e} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.value, bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Computed, but a quality requirement (such as adiabaticity) was missed.
    Warning,
    Fail,
}

impl Status {
    /// 0 on pass, 1 otherwise.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Warning | Status::Fail => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub command: String,
    /// Effective arguments after merging flags with spec defaults.
    pub args: BTreeMap<String, String>,
    /// SHA-256 of the spec file bytes, when one was given.
    pub spec_digest: Option<String>,
    pub status: Status,
    pub outputs: BTreeMap<String, Value>,
    pub discretization: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

impl ResultDocument {
    pub fn new(command: &str) -> Self {
        ResultDocument {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            args: BTreeMap::new(),
            spec_digest: None,
            status: Status::Pass,
            outputs: BTreeMap::new(),
            discretization: BTreeMap::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn output(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn disc(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.discretization.insert(key.to_string(), value.into());
        self
    }

    pub fn check(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) -> &mut Self {
        self.warnings.push(message.into());
        self
    }

    /// Fail if any check failed, warning if only warnings were raised.
    pub fn finalize(&mut self) -> Status {
        self.status = if self.checks.iter().any(|c| !c.passed) {
            Status::Fail
        } else if !self.warnings.is_empty() {
            Status::Warning
        } else {
            Status::Pass
        };
        self.status
    }

    pub fn failing(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents hold only finite numbers and strings");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |section: &str, name: &str, index: &str, value: String| {
            w.write_record([section, name, index, value.as_str()]).expect("in-memory write");
        };
        row("section", "name", "index", "value".into());
        row("meta", "schema_version", "", self.schema_version.to_string());
        row("meta", "command", "", self.command.clone());
        row("meta", "status", "", format!("{:?}", self.status).to_lowercase());
        if let Some(d) = &self.spec_digest {
            row("meta", "spec_digest", "", d.clone());
        }
        for (k, v) in &self.args {
            row("arg", k, "", v.clone());
        }
        for (section, map) in [("output", &self.outputs), ("discretization", &self.discretization)] {
            for (name, value) in map {
                for (index, text) in flatten(value) {
                    row(section, name, &index, text);
                }
            }
        }
        for c in &self.checks {
            row("check", &c.name, "value", fmt_f64(c.value));
            row("check", &c.name, "passed", c.passed.to_string());
        }
        for (i, msg) in self.warnings.iter().enumerate() {
            row("warning", "", &i.to_string(), msg.clone());
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Shortest representation that parses back to the same `f64`.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn flatten(v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Real(x) => vec![(String::new(), fmt_f64(*x))],
        Value::Integer(i) => vec![(String::new(), i.to_string())],
        Value::Text(s) => vec![(String::new(), s.clone())],
        Value::Vector(xs) => xs.iter().enumerate().map(|(i, x)| (i.to_string(), fmt_f64(*x))).collect(),
        Value::Complex { re, im } => vec![("re".into(), fmt_f64(*re)), ("im".into(), fmt_f64(*im))],
        Value::ComplexVector { real, imag } => {
            let mut out = Vec::new();
            for (i, (r, m)) in real.iter().zip(imag).enumerate() {
                out.push((format!("re[{i}]"), fmt_f64(*r)));
                out.push((format!("im[{i}]"), fmt_f64(*m)));
            }
            out
        }
        Value::Matrix { real, imag } => {
            let mut out = Vec::new();
            for (part, rows) in [("re", real), ("im", imag)] {
                for (i, r) in rows.iter().enumerate() {
                    for (j, x) in r.iter().enumerate() {
                        out.push((format!("{part}[{i}][{j}]"), fmt_f64(*x)));
                    }
                }
            }
            out
        }
        Value::Table { columns, rows } => {
            let mut out = Vec::new();
            for (i, r) in rows.iter().enumerate() {
                for (c, x) in columns.iter().zip(r) {
                    out.push((format!("{c}[{i}]"), fmt_f64(*x)));
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultDocument {
        let mut d = ResultDocument::new("phase");
        d.arg("samples", 1024).arg("levels", "{1,2}");
        d.spec_digest = Some(digest("kind = \"circle\"\n"));
        let mut m = DynMatrix::identity(2);
        m.set(0, 1, C64::new(0.1 + 0.2, -1.0 / 3.0));
        d.output("phase", std::f64::consts::PI)
            .output("holonomy", Value::matrix(&m))
            .output("label", "loop phase")
            .output("n", Value::Vector(vec![1e-300, -0.0, 5e-324]))
            .output("z", Value::complex(C64::new(1.0 / 7.0, 2.0f64.sqrt())))
            .output("table", Value::Table { columns: vec!["t".into(), "dev".into()], rows: vec![vec![50.0, 0.0123]] });
        d.disc("segments", 4096usize);
        d.check(Check::at_most("unitarity", 3e-15, 1e-10));
        d.check(Check::within("ratio", 4.01, 2.5, 6.0));
        d.finalize();
        d
    }

    #[test]
    fn json_round_trip_is_exact() {
        let d = sample();
        let text = d.to_json();
        let back = ResultDocument::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
        assert!(text.contains("\"schema_version\": 1"));
    }

    #[test]
    fn status_and_checks() {
        let mut d = sample();
        assert_eq!(d.status, Status::Pass);
        d.warn("residual 0.4 > 0.1");
        assert_eq!(d.finalize(), Status::Warning);
        d.check(Check::exceeds("mismatch", 1e-4, 1e-3));
        assert_eq!(d.finalize(), Status::Fail);
        assert_eq!(d.failing().len(), 1);
        assert_eq!(Status::Fail.exit_code(), 1);
        assert!(!Check::at_most("nan", f64::NAN, 1.0).passed);
        assert!(Check::holds("flag", true).describe().starts_with("PASS flag"));
    }

    #[test]
    fn csv_lists_every_number() {
        let text = sample().to_csv();
        assert!(text.starts_with("section,name,index,value\n"));
        assert!(text.contains("output,holonomy,im[0][1],-0.3333333333333333\n"));
        assert!(text.contains("output,phase,,3.141592653589793\n"));
        assert!(text.contains("output,table,dev[0],0.0123\n"));
        assert!(text.contains("check,ratio,passed,true\n"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
