//! CSV and JSON artifacts.
//!
//! CSV files open with `# key=value` metadata lines followed by a header.
//! Floats use the shortest round-trip representation, so reading a file back
//! reproduces every value bit for bit.

use std::io::{Read, Write};

use crate::curve::{Abscissa, DensityCurve, Normalization};
use crate::error::{Error, Result};

pub type Metadata = Vec<(String, String)>;

pub const CURVE_HEADER: [&str; 2] = ["abscissa", "density"];
pub const SPECTRUM_HEADER: &str = "energy";

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn meta_get<'a>(meta: &'a Metadata, key: &str) -> Option<&'a str> {
    meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn write_meta<W: Write>(w: &mut W, meta: &[(String, String)]) -> Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

fn split_meta(text: &str) -> Metadata {
    text.lines()
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim().split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn records(text: &str) -> Result<(Vec<String>, Vec<csv::StringRecord>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = rdr
        .records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(csv_err)?;
    Ok((header, rows))
}

/// Shortest representation that parses back to the same bits, switching to
/// exponent notation for very large or small magnitudes.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("'{s}' is not a number")))
}

pub fn write_curve_csv<W: Write>(w: &mut W, curve: &DensityCurve, meta: &[(String, String)]) -> Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "# abscissa_kind={}", curve.abscissa)?;
    writeln!(w, "# normalization={}", curve.norm)?;
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CURVE_HEADER).map_err(csv_err)?;
    for (x, y) in curve.grid.iter().zip(&curve.values) {
        wr.write_record([fmt_f64(*x), fmt_f64(*y)])
            .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_curve_csv<R: Read>(mut r: R) -> Result<(DensityCurve, Metadata)> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let meta = split_meta(&text);
    let (header, rows) = records(&text)?;
    if header != CURVE_HEADER {
        return Err(Error::Parse(format!("expected header abscissa,density, got {header:?}")));
    }
    let mut grid = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for row in &rows {
        if row.len() != 2 {
            return Err(Error::Parse(format!("expected 2 columns, got {}", row.len())));
        }
        grid.push(parse_f64(&row[0])?);
        values.push(parse_f64(&row[1])?);
    }
    let abscissa = meta_get(&meta, "abscissa_kind")
        .map(str::parse)
        .transpose()?
        .unwrap_or(Abscissa::Energy);
    let norm = meta_get(&meta, "normalization")
        .map(str::parse)
        .transpose()?
        .unwrap_or(Normalization::UnitIntegral);
    let meta = meta
        .into_iter()
        .filter(|(k, _)| k != "abscissa_kind" && k != "normalization")
        .collect();
    Ok((DensityCurve::new(abscissa, norm, grid, values)?, meta))
}

pub fn write_spectrum_csv<W: Write>(w: &mut W, energies: &[f64], meta: &[(String, String)]) -> Result<()> {
    write_meta(w, meta)?;
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for e in energies {
        writeln!(w, "{}", fmt_f64(*e))?;
    }
    Ok(())
}

pub fn read_spectrum_csv<R: Read>(mut r: R) -> Result<(Vec<f64>, Metadata)> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let meta = split_meta(&text);
    let (header, rows) = records(&text)?;
    if header.first().map(String::as_str) != Some(SPECTRUM_HEADER) {
        return Err(Error::Parse(format!("expected header '{SPECTRUM_HEADER}', got {header:?}")));
    }
    let energies = rows
        .iter()
        .map(|row| parse_f64(&row[0]))
        .collect::<Result<Vec<f64>>>()?;
    if energies.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok((energies, meta))
}

pub fn write_json<W: Write, T: serde::Serialize>(w: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

pub fn read_json<R: Read, T: serde::de::DeserializeOwned>(r: R) -> Result<T> {
    serde_json::from_reader(r).map_err(|e| Error::Parse(e.to_string()))
}
