//! JSON with fixed key order and 17-digit numbers.
//!
//! Non-finite numbers are written as the strings `"inf"`, `"-inf"` and
//! `"nan"`, which [`report_from_json`] maps back.

use exthyp_core::report::{Status, VerificationReport};
use serde_json::Value;

use crate::fmt_num;

pub const REPORT_KEYS: [&str; 9] =
    ["identity_id", "lhs", "rhs", "abs_err", "rel_err", "tol", "status", "series_terms", "quad_evals"];

/// Builder for one flat object.
#[derive(Debug, Default)]
pub struct Object {
    body: String,
}

impl Object {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(&mut self, k: &str) {
        if !self.body.is_empty() {
            self.body.push(',');
        }
        self.body.push_str(&Value::from(k).to_string());
        self.body.push(':');
    }

    pub fn str(&mut self, k: &str, v: &str) -> &mut Self {
        self.key(k);
        self.body.push_str(&Value::from(v).to_string());
        self
    }

    pub fn num(&mut self, k: &str, v: f64) -> &mut Self {
        self.key(k);
        if v.is_finite() {
            self.body.push_str(&fmt_num(v));
        } else {
            self.body.push_str(&format!("\"{}\"", fmt_num(v)));
        }
        self
    }

    pub fn int(&mut self, k: &str, v: usize) -> &mut Self {
        self.key(k);
        self.body.push_str(&v.to_string());
        self
    }

    pub fn finish(&self) -> String {
        format!("{{{}}}", self.body)
    }
}

pub fn report_line(r: &VerificationReport) -> String {
    let mut o = Object::new();
    o.str("identity_id", &r.identity_id)
        .num("lhs", r.lhs)
        .num("rhs", r.rhs)
        .num("abs_err", r.abs_err)
        .num("rel_err", r.rel_err)
        .num("tol", r.tol)
        .str("status", r.status.as_str())
        .int("series_terms", r.series_terms)
        .int("quad_evals", r.quad_evals);
    o.finish()
}

fn num_of(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            "nan" => Some(f64::NAN),
            _ => None,
        },
        _ => None,
    }
}

/// Inverse of [`report_line`].
pub fn report_from_json(line: &str) -> Result<VerificationReport, String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let field = |k: &str| v.get(k).ok_or_else(|| format!("missing key {k}"));
    let num = |k: &str| field(k).and_then(|x| num_of(x).ok_or_else(|| format!("{k} is not a number")));
    let int =
        |k: &str| field(k).and_then(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| format!("{k} is not a count")));
    let text = |k: &str| field(k).and_then(|x| x.as_str().ok_or_else(|| format!("{k} is not a string")));
    Ok(VerificationReport {
        identity_id: text("identity_id")?.to_string(),
        lhs: num("lhs")?,
        rhs: num("rhs")?,
        abs_err: num("abs_err")?,
        rel_err: num("rel_err")?,
        tol: num("tol")?,
        status: text("status")?.parse::<Status>().map_err(|e| e.to_string())?,
        series_terms: int("series_terms")?,
        quad_evals: int("quad_evals")?,
    })
}
