//! Deterministic CSV and JSON renderings of scan rows.
//!
//! CSV columns are `label,a,b,c,phi,lambda,t0..tN,integral,oeis`. Rationals
//! are `p/q`, maps use the `[num]/[den]` coefficient-list text. A row whose
//! series failed has empty term cells and `error: ...` in the last column.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{OeisStatus, ScanError, ScanRow, ScanTuple};
use crate::exact::rational::format_rational;
use crate::exact::{parse_rational, Rational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub fn csv_header(depth: usize) -> Vec<String> {
    let mut h: Vec<String> = ["label", "a", "b", "c", "phi", "lambda"].iter().map(|s| s.to_string()).collect();
    h.extend((0..=depth).map(|n| format!("t{n}")));
    h.push("integral".into());
    h.push("oeis".into());
    h
}

fn csv_err(e: csv::Error) -> ScanError {
    ScanError::Export(e.to_string())
}

/// Writes the header on creation and one record per row.
pub struct CsvRowWriter<W: Write> {
    inner: csv::Writer<W>,
    depth: usize,
}

impl<W: Write> CsvRowWriter<W> {
    pub fn new(w: W, depth: usize) -> Result<Self, ScanError> {
        let mut inner = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        inner.write_record(csv_header(depth)).map_err(csv_err)?;
        Ok(CsvRowWriter { inner, depth })
    }

    pub fn write_row(&mut self, row: &ScanRow) -> Result<(), ScanError> {
        let mut rec: Vec<String> = vec![row.label.to_string()];
        rec.extend(row.tuple.params.iter().map(format_rational));
        rec.push(row.tuple.map.to_text());
        rec.push(format_rational(&row.tuple.lambda));
        for n in 0..=self.depth {
            rec.push(row.terms.get(n).map(format_rational).unwrap_or_default());
        }
        rec.push(row.integral.to_string());
        rec.push(match &row.error {
            Some(e) => format!("error: {e}"),
            None => row.oeis.to_string(),
        });
        self.inner.write_record(&rec).map_err(csv_err)
    }

    pub fn finish(mut self) -> Result<W, ScanError> {
        self.inner.flush()?;
        self.inner.into_inner().map_err(|e| ScanError::Export(e.to_string()))
    }
}

pub fn rows_to_csv(rows: &[ScanRow], depth: usize) -> Result<String, ScanError> {
    let mut w = CsvRowWriter::new(Vec::new(), depth)?;
    for r in rows {
        w.write_row(r)?;
    }
    String::from_utf8(w.finish()?).map_err(|e| ScanError::Export(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRowJson {
    pub label: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub phi: String,
    pub lambda: String,
    pub terms: Vec<String>,
    pub integral: bool,
    pub oeis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&ScanRow> for ScanRowJson {
    fn from(r: &ScanRow) -> Self {
        let [a, b, c] = &r.tuple.params;
        ScanRowJson {
            label: r.label,
            a: format_rational(a),
            b: format_rational(b),
            c: format_rational(c),
            phi: r.tuple.map.to_text(),
            lambda: format_rational(&r.tuple.lambda),
            terms: r.terms.iter().map(format_rational).collect(),
            integral: r.integral,
            oeis: r.oeis.to_string(),
            error: r.error.clone(),
        }
    }
}

impl TryFrom<&ScanRowJson> for ScanRow {
    type Error = ScanError;
    fn try_from(j: &ScanRowJson) -> Result<Self, ScanError> {
        let q = |t: &str| parse_rational(t).map_err(|e| ScanError::Export(format!("{t:?}: {e}")));
        let tuple = ScanTuple::new([q(&j.a)?, q(&j.b)?, q(&j.c)?], RationalFunction::parse_text(&j.phi)?, q(&j.lambda)?)?;
        Ok(ScanRow {
            label: j.label,
            tuple,
            terms: j.terms.iter().map(|t| q(t)).collect::<Result<Vec<Rational>, _>>()?,
            integral: j.integral,
            oeis: OeisStatus::parse(&j.oeis),
            error: j.error.clone(),
        })
    }
}

pub fn rows_to_json(rows: &[ScanRow]) -> Result<String, ScanError> {
    let recs: Vec<ScanRowJson> = rows.iter().map(ScanRowJson::from).collect();
    let mut s = serde_json::to_string_pretty(&recs).map_err(|e| ScanError::Export(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn rows_from_json(text: &str) -> Result<Vec<ScanRow>, ScanError> {
    let recs: Vec<ScanRowJson> = serde_json::from_str(text).map_err(|e| ScanError::Export(e.to_string()))?;
    recs.iter().map(ScanRow::try_from).collect()
}

pub fn export_rows(rows: &[ScanRow], format: ExportFormat, depth: usize) -> Result<String, ScanError> {
    match format {
        ExportFormat::Csv => rows_to_csv(rows, depth),
        ExportFormat::Json => rows_to_json(rows),
    }
}
