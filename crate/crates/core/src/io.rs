//! File formats: signals, measurement CSV, autocorrelation CSV and the
//! uniqueness-report CSV.
//!
//! Complex signals are stored one sample per line as `re im` (two
//! whitespace-separated decimal literals); binary signals as a single line
//! of 0/1 characters.

use std::path::Path;

use num_complex::Complex64;

use crate::ambiguity::UniquenessReport;
use crate::autocorr::{PeriodicAutocorrelation, RegularAutocorrelation};
use crate::error::{Error, Result};
use crate::signal::{BinarySignal, ComplexSignal};
use crate::transforms::{MagnitudeMeasurements, SchemeTag};

pub fn format_complex_signal(x: &ComplexSignal) -> String {
    let mut out = String::new();
    for c in x.samples() {
        out.push_str(&format!("{} {}\n", c.re, c.im));
    }
    out
}

pub fn parse_complex_signal(text: &str) -> Result<ComplexSignal> {
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let re: f64 = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing real part", lineno + 1)))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let im: f64 = match parts.next() {
            Some(tok) => tok
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!(
                "line {}: expected at most two values per line",
                lineno + 1
            )));
        }
        samples.push(Complex64::new(re, im));
    }
    ComplexSignal::new(samples)
}

pub fn format_binary_signal(x: &BinarySignal) -> String {
    let mut out: String = x.bits().iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
    out.push('\n');
    out
}

pub fn parse_binary_signal(text: &str) -> Result<BinarySignal> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("empty binary signal file".into()))?;
    let bits: Result<Vec<u8>> = line
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("unexpected character '{other}' in binary signal"))),
        })
        .collect();
    BinarySignal::new(bits?)
}

/// Detected on load: a single line of 0/1 characters is a binary signal,
/// anything else parses as a complex signal.
pub fn parse_signal_auto(text: &str) -> Result<ComplexSignal> {
    let nonempty: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if nonempty.len() == 1 && nonempty[0].chars().all(|c| c == '0' || c == '1') {
        Ok(parse_binary_signal(text)?.to_complex())
    } else {
        parse_complex_signal(text)
    }
}

/// Measurement CSV: header `index,value`, one row per entry. Grids (STFT,
/// FROG) flatten row-major with a running index.
pub fn format_measurements_csv(b: &MagnitudeMeasurements) -> String {
    let mut out = String::from("index,value\n");
    for (k, v) in b.values().iter().enumerate() {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

pub fn parse_measurements_csv(text: &str, scheme: SchemeTag) -> Result<MagnitudeMeasurements> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("index")) {
            continue;
        }
        let mut parts = line.split(',');
        let _idx = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing index", lineno + 1)))?;
        let value: f64 = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: missing value", lineno + 1)))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::Parse("no measurement rows found".into()));
    }
    Ok(MagnitudeMeasurements::new(values, scheme))
}

/// Autocorrelation CSV: `lag,re,im`.
pub fn format_periodic_autocorr_csv(aut: &PeriodicAutocorrelation) -> String {
    let mut out = String::from("lag,re,im\n");
    for (lag, v) in aut.values().iter().enumerate() {
        out.push_str(&format!("{lag},{},{}\n", v.re, v.im));
    }
    out
}

pub fn format_regular_autocorr_csv(aut: &RegularAutocorrelation) -> String {
    let mut out = String::from("lag,re,im\n");
    let n = aut.signal_len() as i64;
    for lag in -(n - 1)..=(n - 1) {
        let v = aut.at(lag);
        out.push_str(&format!("{lag},{},{}\n", v.re, v.im));
    }
    out
}

/// Uniqueness-report CSV:
/// `support_count,num_classes,num_unique_classes,example_nonunique_canonical`.
pub fn format_uniqueness_csv(report: &UniquenessReport) -> String {
    let mut out =
        String::from("support_count,num_classes,num_unique_classes,example_nonunique_canonical\n");
    for row in &report.rows {
        let example = row
            .example_nonunique
            .as_ref()
            .map(|bits| bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect::<String>())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.support, row.num_classes, row.num_unique_classes, example
        ));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}
