// SPDX-License-Identifier: Apache-2.0

//! Machine-readable verification reports (`report-v1`).
//!
//! ```json
//! {
//!   "schema": "report-v1",
//!   "status": "pass" | "fail",
//!   "tool_version": "0.1.0",
//!   "convention_ledger_hash": "<sha256 hex>",
//!   "seed": 42,
//!   "checks": [
//!     { "name": "...", "status": "pass" | "fail" | "skipped",
//!       "defect_norm": "exact-zero" | "exact-nonzero" | <number> | null,
//!       "reference": "...", "millis": 12.5, "detail": "..." }
//!   ]
//! }
//! ```
//!
//! Failing checks are listed first; the order is otherwise insertion order.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::conventions::ledger_hash;
use crate::Result;

pub const SCHEMA: &str = "report-v1";

/// Reference string for checks that only exercise tooling.
pub const PLUMBING: &str = "plumbing";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// Size of the residual behind a check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Defect {
    /// Exact arithmetic produced an identically zero residual.
    ExactZero,
    /// Exact arithmetic produced a nonzero residual.
    ExactNonzero,
    Norm(f64),
    None,
}

impl Defect {
    pub fn exact(zero: bool) -> Self {
        if zero {
            Defect::ExactZero
        } else {
            Defect::ExactNonzero
        }
    }
}

impl Serialize for Defect {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Defect::ExactZero => s.serialize_str("exact-zero"),
            Defect::ExactNonzero => s.serialize_str("exact-nonzero"),
            Defect::Norm(v) if v.is_finite() => s.serialize_f64(*v),
            Defect::Norm(v) => s.serialize_str(&v.to_string()),
            Defect::None => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Defect {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Null => Ok(Defect::None),
            serde_json::Value::Number(n) => Ok(Defect::Norm(n.as_f64().unwrap_or(f64::NAN))),
            serde_json::Value::String(s) => match s.as_str() {
                "exact-zero" => Ok(Defect::ExactZero),
                "exact-nonzero" => Ok(Defect::ExactNonzero),
                other => other
                    .parse::<f64>()
                    .map(Defect::Norm)
                    .map_err(|_| serde::de::Error::custom(format!("bad defect {other:?}"))),
            },
            _ => Err(serde::de::Error::custom("bad defect")),
        }
    }
}

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Defect::ExactZero => f.write_str("exact-zero"),
            Defect::ExactNonzero => f.write_str("exact-nonzero"),
            Defect::Norm(v) => write!(f, "{v:.3e}"),
            Defect::None => f.write_str("-"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub defect_norm: Defect,
    pub reference: String,
    pub millis: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(crate::Error::Parse(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub status: CheckStatus,
    pub tool_version: String,
    pub convention_ledger_hash: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(seed: u64) -> Self {
        Self {
            schema: SCHEMA.into(),
            status: CheckStatus::Pass,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            convention_ledger_hash: ledger_hash(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.normalize();
    }

    /// Run `f` and record its verdict and timing. An `Err` becomes a failed
    /// check carrying the error text.
    pub fn run(&mut self, name: &str, reference: &str, f: impl FnOnce() -> Result<(bool, Defect, Option<String>)>) {
        let t = Instant::now();
        let outcome = f();
        let millis = t.elapsed().as_secs_f64() * 1e3;
        let (status, defect_norm, detail) = match outcome {
            Ok((ok, d, detail)) => (if ok { CheckStatus::Pass } else { CheckStatus::Fail }, d, detail),
            Err(e) => (CheckStatus::Fail, Defect::None, Some(e.to_string())),
        };
        self.push(Check { name: name.into(), status, defect_norm, reference: reference.into(), millis, detail });
    }

    pub fn skip(&mut self, name: &str, reference: &str, why: &str) {
        self.push(Check {
            name: name.into(),
            status: CheckStatus::Skipped,
            defect_norm: Defect::None,
            reference: reference.into(),
            millis: 0.0,
            detail: Some(why.into()),
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
        self.normalize();
    }

    fn normalize(&mut self) {
        // stable: failures first, otherwise insertion order
        self.checks.sort_by_key(|c| c.status != CheckStatus::Fail);
        self.status = if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let mut r: Self = serde_json::from_str(s)?;
        if r.schema != SCHEMA {
            return Err(crate::Error::Parse(format!("unsupported schema {:?}", r.schema)));
        }
        r.normalize();
        Ok(r)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            CheckStatus::Pass => "pass",
            _ => "fail",
        };
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(out, "- status: **{status}**");
        let _ = writeln!(out, "- tool version: {}", self.tool_version);
        let _ = writeln!(out, "- convention ledger: `{}`", self.convention_ledger_hash);
        let _ = writeln!(out, "- seed: {}\n", self.seed);
        let _ = writeln!(out, "| check | status | reference | defect | ms |");
        let _ = writeln!(out, "|---|---|---|---|---|");
        for c in &self.checks {
            let st = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "skipped",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {:.1} |",
                c.name.replace('|', "\\|"),
                st,
                c.reference.replace('|', "\\|"),
                c.defect_norm,
                c.millis
            );
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Markdown => Ok(self.to_markdown()),
        }
    }

    pub fn write(&self, path: &std::path::Path, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format)?)?;
        Ok(())
    }
}
