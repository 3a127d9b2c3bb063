//! Deterministic JSON and CSV serialization of sweep reports.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::ffchar::Kind;
use crate::sweep::SweepReport;
use crate::tori::Eps;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 13] = [
    "p",
    "nu_a",
    "nu_b",
    "chi_a",
    "chi_b",
    "mu_weight",
    "type",
    "t_chi",
    "eps_chi",
    "eps_nu",
    "predicted",
    "char0_nonzero",
    "modp_nonzero",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Usage(format!("unknown format {s:?}; expected json or csv"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

pub fn to_json(report: &SweepReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

fn eps_cell(e: Eps) -> String {
    e.to_text()
}

fn kind_cell(k: Kind) -> &'static str {
    match k {
        Kind::Type1 => "Type1",
        Kind::Type2 => "Type2",
    }
}

/// One row per verdict; `predicted` is empty where no claim applies.
pub fn to_csv(report: &SweepReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for v in &report.verdicts {
        w.write_record([
            v.p.to_string(),
            v.nu.0.to_string(),
            v.nu.1.to_string(),
            v.chi.0.to_string(),
            v.chi.1.to_string(),
            v.mu_weight.to_string(),
            kind_cell(v.kind).to_string(),
            v.t_chi.to_string(),
            eps_cell(v.eps_chi),
            eps_cell(v.eps_nu),
            v.predicted.map_or_else(String::new, |b| b.to_string()),
            v.char0_nonzero.to_string(),
            v.modp_nonzero.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn render(report: &SweepReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

pub fn write(report: &SweepReport, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, render(report, format)?)?;
    Ok(())
}
