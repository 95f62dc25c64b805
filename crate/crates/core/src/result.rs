//! Computed ADEs and their metadata.

use std::fmt;

use serde::Serialize;

use crate::diff::{diff_degree, order_in};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    I,
    II,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::I => write!(f, "I"),
            Method::II => write!(f, "II"),
        }
    }
}

/// An output ADE in `func` plus bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct AdeResult {
    pub ade: Poly,
    pub func: String,
    pub order: i64,
    pub degree: u32,
    pub method: Method,
    pub elapsed_ms: u128,
    /// Order bound guaranteed for this computation, when one applies.
    pub bound: Option<i64>,
    /// The saturation denominator; solutions on which it vanishes are excluded.
    pub saturation: Option<Poly>,
    /// Truncation level at which Method I stopped.
    pub level: Option<usize>,
    pub verified: Option<bool>,
}

impl AdeResult {
    pub fn new(ade: Poly, func: &str, method: Method, elapsed_ms: u128) -> AdeResult {
        let ade = ade.normalized();
        AdeResult {
            order: order_in(&ade, func),
            degree: diff_degree(&ade),
            ade,
            func: func.to_string(),
            method,
            elapsed_ms,
            bound: None,
            saturation: None,
            level: None,
            verified: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(JsonResult {
            ade: self.ade.to_string(),
            order: self.order,
            degree: self.degree,
            method: self.method.to_string(),
            elapsed_ms: self.elapsed_ms,
            bound: self.bound,
            verified: self.verified,
            saturation_denominator: self.saturation.as_ref().map(|q| q.to_string()),
        })
        .expect("plain data serializes")
    }
}

#[derive(Serialize)]
struct JsonResult {
    ade: String,
    order: i64,
    degree: u32,
    method: String,
    elapsed_ms: u128,
    bound: Option<i64>,
    verified: Option<bool>,
    saturation_denominator: Option<String>,
}

impl fmt::Display for AdeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ade)
    }
}
