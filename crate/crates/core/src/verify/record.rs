//! Check records and their JSON/CSV serialization.

use std::io::Write;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Constant multiplying the right-hand side of an inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantUsed {
    Explicit(f64),
    Empirical,
}

impl Serialize for ConstantUsed {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ConstantUsed::Explicit(c) => s.serialize_f64(*c),
            ConstantUsed::Empirical => s.serialize_str("empirical"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CheckParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
}

impl CheckParams {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn dp(delta: f64, p: f64) -> Self {
        Self { delta: Some(delta), p: Some(p), ..Self::default() }
    }

    pub fn delta(delta: f64) -> Self {
        Self { delta: Some(delta), ..Self::default() }
    }

    pub fn p(p: f64) -> Self {
        Self { p: Some(p), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub schema_version: u32,
    pub id: String,
    pub params: CheckParams,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: ConstantUsed,
    pub pass: bool,
    /// Negative controls are expected to fail.
    pub expect_fail: bool,
    pub notes: String,
}

impl CheckRecord {
    /// `pass ⇔ lhs ≤ c·rhs·(1 + tol)`.
    pub fn inequality(id: impl Into<String>, params: CheckParams, lhs: f64, rhs: f64, c: f64, tol: f64) -> Self {
        let pass = lhs.is_finite() && rhs.is_finite() && lhs <= c * rhs * (1.0 + tol);
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            params,
            lhs,
            rhs,
            constant: ConstantUsed::Explicit(c),
            pass,
            expect_fail: false,
            notes: String::new(),
        }
    }

    /// `pass ⇔ |lhs − rhs| ≤ tol·max(|lhs|, |rhs|)` (or both tiny).
    pub fn equality(id: impl Into<String>, params: CheckParams, lhs: f64, rhs: f64, tol: f64) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let pass = lhs.is_finite() && rhs.is_finite() && ((lhs - rhs).abs() <= tol * scale || scale < 1e-300);
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            params,
            lhs,
            rhs,
            constant: ConstantUsed::Explicit(1.0),
            pass,
            expect_fail: false,
            notes: String::new(),
        }
    }

    /// Empirical constant `lhs` (fine grid) against `rhs` (coarse grid);
    /// passes when both are finite and `lhs/rhs ∈ [1/band, band]`.
    pub fn empirical(id: impl Into<String>, params: CheckParams, fine: f64, coarse: f64, band: f64) -> Self {
        let stable = if fine == 0.0 && coarse == 0.0 {
            true
        } else {
            let r = fine / coarse;
            r.is_finite() && r >= 1.0 / band && r <= band
        };
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            params,
            lhs: fine,
            rhs: coarse,
            constant: ConstantUsed::Empirical,
            pass: fine.is_finite() && coarse.is_finite() && stable,
            expect_fail: false,
            notes: String::new(),
        }
    }

    /// A pass/fail flag with no natural inequality; `lhs` carries the statistic.
    pub fn flag(id: impl Into<String>, params: CheckParams, value: f64, pass: bool) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            id: id.into(),
            params,
            lhs: value,
            rhs: 0.0,
            constant: ConstantUsed::Empirical,
            pass,
            expect_fail: false,
            notes: String::new(),
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn negative_control(mut self) -> Self {
        self.expect_fail = true;
        self
    }

    /// True when the record behaved as intended: ordinary checks pass and
    /// negative controls fail.
    pub fn ok(&self) -> bool {
        self.pass != self.expect_fail
    }
}

pub fn to_json(records: &[CheckRecord]) -> Result<String> {
    serde_json::to_string_pretty(records).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_json(records: &[CheckRecord], path: &Path) -> Result<()> {
    let mut text = to_json(records)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_csv(records: &[CheckRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = csv::Writer::from_writer(file);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["id", "delta", "p", "gamma", "b", "l", "lhs", "rhs", "constant", "pass", "expect_fail", "ok"])
        .map_err(io)?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in records {
        let constant = match r.constant {
            ConstantUsed::Explicit(c) => c.to_string(),
            ConstantUsed::Empirical => "empirical".to_string(),
        };
        w.write_record([
            r.id.clone(),
            opt(r.params.delta),
            opt(r.params.p),
            opt(r.params.gamma),
            opt(r.params.b),
            opt(r.params.l),
            r.lhs.to_string(),
            r.rhs.to_string(),
            constant,
            r.pass.to_string(),
            r.expect_fail.to_string(),
            r.ok().to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text summary, one line per record.
pub fn write_summary(records: &[CheckRecord], out: &mut impl Write) -> std::io::Result<()> {
    for r in records {
        let status = match (r.ok(), r.expect_fail) {
            (true, false) => "PASS",
            (true, true) => "PASS (negative control failed as expected)",
            (false, false) => "FAIL",
            (false, true) => "FAIL (negative control passed)",
        };
        writeln!(out, "{status:<8} {} lhs={} rhs={}", r.id, r.lhs, r.rhs)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_semantics() {
        assert!(CheckRecord::inequality("a", CheckParams::none(), 1.0, 1.0, 1.0, 0.0).pass);
        assert!(!CheckRecord::inequality("a", CheckParams::none(), 1.1, 1.0, 1.0, 1e-9).pass);
        assert!(CheckRecord::inequality("a", CheckParams::none(), 1.1, 1.0, 2.0, 0.0).pass);
        assert!(!CheckRecord::inequality("a", CheckParams::none(), f64::NAN, 1.0, 1.0, 0.0).pass);
        let neg = CheckRecord::inequality("n", CheckParams::none(), 2.0, 1.0, 1.0, 0.0).negative_control();
        assert!(!neg.pass && neg.ok());
    }

    #[test]
    fn empirical_band() {
        assert!(CheckRecord::empirical("e", CheckParams::none(), 1.5, 1.0, 2.0).pass);
        assert!(!CheckRecord::empirical("e", CheckParams::none(), 3.0, 1.0, 2.0).pass);
        assert!(CheckRecord::empirical("e", CheckParams::none(), 0.0, 0.0, 2.0).pass);
    }

    #[test]
    fn json_shape() {
        let r = CheckRecord::inequality("x", CheckParams::dp(0.4, 3.0), 0.5, 1.0, 1.0, 0.0);
        let v: serde_json::Value = serde_json::from_str(&to_json(&[r]).unwrap()).unwrap();
        assert_eq!(v[0]["schema_version"], 1);
        assert_eq!(v[0]["params"]["delta"], 0.4);
        assert!(v[0]["params"].get("gamma").is_none());
        assert_eq!(v[0]["constant"], 1.0);
        let e = CheckRecord::empirical("y", CheckParams::none(), 1.0, 1.0, 2.0);
        let v: serde_json::Value = serde_json::from_str(&to_json(&[e]).unwrap()).unwrap();
        assert_eq!(v[0]["constant"], "empirical");
    }
}
