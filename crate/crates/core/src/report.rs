//! Machine-readable reports over a selection of catalog examples.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{example, EXAMPLES};
use crate::ckl::{appendix_report, verify_example, AppendixReport, CklReport, MethodKind, VerifyConfig};
use crate::error::{Error, Result};

/// Bumped whenever a field of [`RunReport`] changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: &str = "example,M_jensen,M_quadrature,M_isoradial,M_trees,two_pi_M,vol_bipyramid,margin,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown format \"{s}\""))),
        }
    }
}

/// Example names plus an optional appendix block.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub examples: Vec<String>,
    /// Tolerance of the appendix identities, if they are selected.
    pub appendix: Option<f64>,
}

impl Selection {
    pub fn all() -> Self {
        Selection { examples: EXAMPLES.iter().map(|s| s.to_string()).collect(), appendix: Some(1e-9) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub examples: Vec<CklReport>,
    pub appendix: Option<AppendixReport>,
    pub pass: bool,
}

/// Verifies every selected example in parallel; rows come out sorted by name.
pub fn run_report(selection: &Selection, config: &VerifyConfig) -> Result<RunReport> {
    let records = selection.examples.iter().map(|n| example(n)).collect::<Result<Vec<_>>>()?;
    let mut examples = records.par_iter().map(|r| verify_example(r, config)).collect::<Result<Vec<_>>>()?;
    examples.sort_by(|a, b| a.example.cmp(&b.example));
    let appendix = selection.appendix.map(appendix_report);
    let pass = examples.iter().all(|r| r.pass) && appendix.as_ref().is_none_or(|a| a.pass);
    Ok(RunReport { schema_version: SCHEMA_VERSION, examples, appendix, pass })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    example: &'a str,
    #[serde(rename = "M_jensen")]
    m_jensen: Option<f64>,
    #[serde(rename = "M_quadrature")]
    m_quadrature: Option<f64>,
    #[serde(rename = "M_isoradial")]
    m_isoradial: Option<f64>,
    #[serde(rename = "M_trees")]
    m_trees: Option<f64>,
    #[serde(rename = "two_pi_M")]
    two_pi_m: f64,
    vol_bipyramid: f64,
    margin: f64,
    pass: bool,
}

impl RunReport {
    pub fn write_json(&self, out: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per example; the appendix block has no CSV form.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.examples.is_empty() {
            w.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
        }
        for r in &self.examples {
            w.serialize(CsvRow {
                example: &r.example,
                m_jensen: r.value(MethodKind::Jensen),
                m_quadrature: r.value(MethodKind::Quadrature),
                m_isoradial: r.value(MethodKind::Isoradial),
                m_trees: r.value(MethodKind::Trees),
                two_pi_m: r.two_pi_m,
                vol_bipyramid: r.vol_bipyramid,
                margin: r.margin,
                pass: r.pass,
            })
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write(&self, format: Format, out: impl Write) -> Result<()> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidArgument(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_fixed() {
        let r = RunReport { schema_version: SCHEMA_VERSION, examples: vec![], appendix: None, pass: true };
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim_end(), CSV_HEADER);
    }

    #[test]
    fn unknown_example_is_rejected() {
        let s = Selection { examples: vec!["foo".into()], appendix: None };
        assert!(matches!(run_report(&s, &VerifyConfig::default()), Err(Error::UnknownExample(_))));
    }
}
