//! CSV and JSON serialization of reports.
//!
//! Rational values in CSV are written as decimals with 9 fractional digits,
//! rounded down for lower ends and up for upper ends, so a CSV bracket still
//! encloses the exact value. JSON records carry exact fraction strings.

use serde::Serialize;

use crate::bisector::SymmetricSubset;
use crate::bounds::BoundReport;
use crate::bracket::{decimal_ceil, decimal_floor, fraction_string};
use crate::error::{Error, Result};
use crate::incidence::IncidenceReport;
use crate::planar::PlanarPointSet;

pub const CSV_DIGITS: u32 = 9;

pub const BOUND_COLUMNS: [&str; 7] = ["name", "lhs", "rhs_lo", "rhs_hi", "ratio_lo", "ratio_hi", "verdict"];

pub const INCIDENCE_COLUMNS: [&str; 8] =
    ["N", "T", "I_w", "W_total", "w_max", "rhs_floor", "rhs_ceil", "low_mult_classes"];

pub const SYMMETRY_COLUMNS: [&str; 4] = ["axis", "weight", "subset", "mirror"];

pub(crate) fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Io(format!("csv: {e}"))
}

pub(crate) fn write_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(csv_err)?;
    String::from_utf8(bytes).map_err(csv_err)
}

/// CSV text with a header line and one line per row.
pub fn write_csv_rows<I: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: I) -> Result<String> {
    write_csv(header, &rows.into_iter().collect::<Vec<_>>())
}

/// Columns of [`BOUND_COLUMNS`] for one report.
pub fn bound_row(r: &BoundReport) -> Vec<String> {
    let (ratio_lo, ratio_hi) = match &r.ratio {
        Some(b) => (decimal_floor(&b.lo, CSV_DIGITS), decimal_ceil(&b.hi, CSV_DIGITS)),
        None => (String::new(), String::new()),
    };
    vec![
        r.name.clone(),
        fraction_string(&r.lhs),
        decimal_floor(&r.rhs.lo, CSV_DIGITS),
        decimal_ceil(&r.rhs.hi, CSV_DIGITS),
        ratio_lo,
        ratio_hi,
        r.verdict.to_string(),
    ]
}

pub fn bound_reports_csv(reports: &[BoundReport]) -> Result<String> {
    write_csv(&BOUND_COLUMNS, &reports.iter().map(bound_row).collect::<Vec<_>>())
}

pub fn incidence_row(r: &IncidenceReport) -> Vec<String> {
    vec![
        r.n.to_string(),
        r.t.to_string(),
        r.i_w.to_string(),
        r.w_total.to_string(),
        r.w_max.to_string(),
        r.rhs_floor.to_string(),
        r.rhs_ceil.to_string(),
        r.low_multiplicity_classes.to_string(),
    ]
}

pub fn incidence_csv(r: &IncidenceReport) -> Result<String> {
    write_csv(&INCIDENCE_COLUMNS, &[incidence_row(r)])
}

fn point_list(p: &PlanarPointSet) -> String {
    p.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(";")
}

/// Point lists are `x y` pairs joined by `;`.
pub fn symmetry_csv(s: &SymmetricSubset) -> Result<String> {
    write_csv(
        &SYMMETRY_COLUMNS,
        &[vec![s.axis.to_string(), s.weight.to_string(), point_list(&s.subset), point_list(&s.mirror)]],
    )
}

/// JSON record `{axis: "a b c", weight, subset: ["x y", …], mirror: […]}`.
#[derive(Serialize)]
struct SymmetryRecord {
    axis: String,
    weight: u64,
    subset: Vec<String>,
    mirror: Vec<String>,
}

pub fn symmetry_json_value(s: &SymmetricSubset) -> serde_json::Value {
    let rec = SymmetryRecord {
        axis: s.axis.to_string(),
        weight: s.weight,
        subset: s.subset.iter().map(|q| q.to_string()).collect(),
        mirror: s.mirror.iter().map(|q| q.to_string()).collect(),
    };
    serde_json::to_value(rec).expect("plain record")
}

pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}
