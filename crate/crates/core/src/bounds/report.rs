use std::io::Write;

use serde::{Serialize, Serializer};

use super::theorem::BoundMode;
use crate::error::Result;

fn num<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() && *v > 0.0 {
        s.serialize_str("inf")
    } else if v.is_infinite() {
        s.serialize_str("-inf")
    } else if v.is_nan() {
        s.serialize_none()
    } else {
        s.serialize_f64(*v)
    }
}

fn opt_num<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => num(x, s),
        None => s.serialize_none(),
    }
}

/// All quantities of the bound at one radius. `+∞` is written as `inf`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(rename = "R", serialize_with = "num")]
    pub r: f64,
    #[serde(rename = "kR", serialize_with = "num")]
    pub k_r: f64,
    #[serde(rename = "hR", serialize_with = "num")]
    pub h_r: f64,
    #[serde(rename = "TR", serialize_with = "num")]
    pub t_r: f64,
    /// `𝗀(T(R), R)`.
    #[serde(rename = "gT", serialize_with = "num")]
    pub g_t: f64,
    /// `R √(c_l c_φ)(T(R))`.
    #[serde(rename = "RCinvT", serialize_with = "num")]
    pub rc_t: f64,
    #[serde(rename = "LT", serialize_with = "num")]
    pub l_t: f64,
    /// Nine times `b_def`.
    #[serde(rename = "B_upper", serialize_with = "num")]
    pub b_upper: f64,
    #[serde(serialize_with = "num")]
    pub lower_dinv: f64,
    #[serde(rename = "logM", serialize_with = "opt_num")]
    pub log_m: Option<f64>,
    #[serde(serialize_with = "opt_num")]
    pub margin_upper: Option<f64>,
    pub mode: BoundMode,
    /// `max{𝗀, R√(c_l c_φ)} + L` at `t_star`.
    #[serde(serialize_with = "num")]
    pub b_def: f64,
    #[serde(serialize_with = "num")]
    pub t_star: f64,
    #[serde(serialize_with = "num")]
    pub ln_k: f64,
    #[serde(serialize_with = "num")]
    pub ln_h: f64,
    #[serde(serialize_with = "num")]
    pub ln_t: f64,
    /// Set when `k(R)` or `T(R)` is below 2, where the asymptotic estimates
    /// behind the bound are not yet in force.
    pub small_r: bool,
}

impl BoundReport {
    pub fn attach_measurement(&mut self, log_m: f64) {
        self.log_m = Some(log_m);
        self.margin_upper = Some(self.b_upper - log_m);
    }

    /// `𝗀(T(R), R)`, the quantity the closed-form cases describe.
    pub fn g_at_crossing(&self) -> f64 {
        self.g_t
    }
}

fn cell(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v}")
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

pub const CSV_HEADER: [&str; 11] =
    ["R", "kR", "hR", "TR", "gT", "RCinvT", "LT", "B_upper", "lower_Dinv", "logM", "margin_upper"];

pub fn write_reports_csv<W: Write>(rows: &[BoundReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in rows {
        out.write_record(&[
            cell(r.r),
            cell(r.k_r),
            cell(r.h_r),
            cell(r.t_r),
            cell(r.g_t),
            cell(r.rc_t),
            cell(r.l_t),
            cell(r.b_upper),
            cell(r.lower_dinv),
            opt_cell(r.log_m),
            opt_cell(r.margin_upper),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_reports_json<W: Write>(rows: &[BoundReport], w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, rows).map_err(|e| crate::error::Error::Io(e.to_string()))
}
