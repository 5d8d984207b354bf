//! Named residual checks with tolerances, collected into a deterministic JSON
//! report. Floats are written with 17 significant digits so that every value
//! round-trips exactly.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Present when the check passes by exceeding `tol` instead of staying below it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<&'static str>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub seed: u64,
    pub version: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub outcome: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Set when the input lies outside the hypotheses of the run; forces exit code 1.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub hypotheses_unmet: bool,
}

pub const DEFAULT_SEED: u64 = 7;

impl CheckReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            summary: Summary::default(),
            seed: DEFAULT_SEED,
            version: VERSION.to_string(),
            outcome: BTreeMap::new(),
            notes: Vec::new(),
            hypotheses_unmet: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Record a check that passes when `residual <= tol`. Non-finite residuals fail.
    pub fn check(&mut self, name: &str, residual: f64, tol: f64) -> bool {
        let pass = residual <= tol;
        self.push(name, residual, tol, pass, None)
    }

    /// Record a check that passes when `value > threshold`.
    pub fn check_exceeds(&mut self, name: &str, value: f64, threshold: f64) -> bool {
        let pass = value > threshold;
        self.push(name, value, threshold, pass, Some("above"))
    }

    fn push(&mut self, name: &str, residual: f64, tol: f64, pass: bool, expect: Option<&'static str>) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            residual,
            tol,
            pass,
            expect,
        });
        self.summary.total += 1;
        if pass {
            self.summary.passed += 1;
        } else {
            self.summary.failed += 1;
        }
        pass
    }

    pub fn outcome(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.outcome.insert(key.to_string(), v);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn mark_hypotheses_unmet(&mut self, reason: impl Into<String>) {
        self.hypotheses_unmet = true;
        self.note(reason);
    }

    /// Append every check of `other` with its name prefixed by `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: &CheckReport) {
        for c in &other.checks {
            let name = format!("{prefix}{}", c.name);
            self.push(&name, c.residual, c.tol, c.pass, c.expect);
        }
        for n in &other.notes {
            self.notes.push(format!("{prefix}{n}"));
        }
        self.hypotheses_unmet |= other.hypotheses_unmet;
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 when every check passes and the hypotheses hold, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() && !self.hypotheses_unmet {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn write_json<W: io::Write>(&self, writer: W) -> serde_json::Result<()> {
        write_json(writer, self)
    }
}

/// Serialize `value` as pretty JSON with every `f64` in 17-significant-digit
/// scientific notation. Non-finite floats become `null`.
pub fn write_json<W: io::Write, T: Serialize + ?Sized>(mut writer: W, value: &T) -> serde_json::Result<()> {
    {
        let mut ser = serde_json::Serializer::with_formatter(&mut writer, ExactFloats::default());
        value.serialize(&mut ser)?;
    }
    writer.write_all(b"\n").map_err(serde_json::Error::io)
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    write_json(&mut buf, value).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Pretty formatter that prints floats as `{:.16e}`.
#[derive(Default)]
pub struct ExactFloats<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}
