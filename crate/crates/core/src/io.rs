//! CSV and JSON serialization of results.
//!
//! CSV files start with `#`-prefixed metadata lines, followed by a header
//! row and the data. Floats are written with 17 significant digits so they
//! round-trip exactly.

use std::io::{self, Write};

use serde::Serialize;

use crate::dynamics::{ProbabilityProfile, TimeSeries};
use crate::spectral::{DosEstimate, Spectrum};
use crate::VERSION;

/// A single CSV cell.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Key/value pairs written as `# key: value` lines.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new() -> Self {
        let mut m = Self::default();
        m.push("version", VERSION);
        m
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    /// Adds a value serialized as compact JSON.
    pub fn push_json<T: Serialize>(&mut self, key: impl Into<String>, value: &T) -> &mut Self {
        let json = serde_json::to_string(value).unwrap_or_else(|e| format!("\"<unserializable: {e}>\""));
        self.push(key, json)
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

pub fn write_csv<W: Write, I, R>(out: &mut W, meta: &Metadata, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: AsRef<[Cell]>,
{
    for (k, v) in meta.entries() {
        // keep every metadata entry on one line
        writeln!(out, "# {k}: {}", v.replace('\n', " "))?;
    }
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (i, cell) in row.as_ref().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            match *cell {
                Cell::Int(v) => line.push_str(&v.to_string()),
                Cell::Float(v) => line.push_str(&format_float(v)),
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn base_metadata(extra: &Metadata) -> Metadata {
    let mut meta = Metadata::new();
    for (k, v) in extra.entries() {
        if k != "version" {
            meta.push(k.clone(), v.clone());
        }
    }
    meta
}

pub fn write_spectrum_csv<W: Write>(out: &mut W, spectrum: &Spectrum, extra: &Metadata) -> io::Result<()> {
    let mut meta = base_metadata(extra);
    meta.push_json("ring", spectrum.spec());
    meta.push("source", format!("{:?}", spectrum.source()).to_lowercase());
    let rows = spectrum
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(m, &e)| [Cell::from(m), Cell::from(spectrum.theta(m)), Cell::from(e)]);
    write_csv(out, &meta, &["mode", "theta", "energy"], rows)
}

pub fn write_dos_csv<W: Write>(out: &mut W, dos: &DosEstimate, extra: &Metadata) -> io::Result<()> {
    let mut meta = base_metadata(extra);
    meta.push("n_total", dos.n_total.to_string());
    let rows = (0..dos.n_bins()).map(|i| {
        [
            Cell::from(dos.bin_edges[i]),
            Cell::from(dos.bin_edges[i + 1]),
            Cell::from(dos.density[i]),
            Cell::from(dos.counts[i]),
        ]
    });
    write_csv(out, &meta, &["bin_lo", "bin_hi", "density", "count"], rows)
}

pub fn write_series_csv<W: Write>(out: &mut W, series: &TimeSeries, extra: &Metadata) -> io::Result<()> {
    let mut meta = base_metadata(extra);
    if let Some(spec) = &series.spec {
        meta.push_json("ring", spec);
    }
    meta.push("kind", series.kind.as_str());
    let rows = series.iter().map(|(t, v)| [Cell::from(t), Cell::from(v)]);
    write_csv(out, &meta, &["t", "value"], rows)
}

pub fn write_profile_csv<W: Write>(out: &mut W, profile: &ProbabilityProfile, extra: &Metadata) -> io::Result<()> {
    let mut meta = base_metadata(extra);
    meta.push_json("ring", &profile.spec);
    meta.push("kind", profile.kind.as_str());
    meta.push("t", format_float(profile.time));
    let rows = profile
        .probabilities
        .iter()
        .enumerate()
        .map(|(k, &p)| [Cell::from(k), Cell::from(p)]);
    write_csv(out, &meta, &["node", "probability"], rows)
}

/// `{"version": .., "config": .., "result": ..}`, pretty-printed.
pub fn to_json_document<C: Serialize, R: Serialize>(config: &C, result: &R) -> serde_json::Result<String> {
    #[derive(Serialize)]
    struct Document<'a, C, R> {
        version: &'static str,
        config: &'a C,
        result: &'a R,
    }
    serde_json::to_string_pretty(&Document {
        version: VERSION,
        config,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{SeriesKind, TimeGrid};
    use crate::model::RingSpec;
    use crate::spectral::{dos_histogram, full_spectrum};

    fn render(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn float_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, -7.25e12] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn spectrum_csv_layout() {
        let spec = RingSpec::new(4, 2.0).unwrap();
        let text = render(|b| write_spectrum_csv(b, &full_spectrum(&spec), &Metadata::new()));
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# version: "));
        assert!(lines.iter().any(|l| l.starts_with("# ring: {")));
        let header = lines.iter().position(|l| *l == "mode,theta,energy").unwrap();
        assert_eq!(lines.len() - header - 1, 4);
        let first: Vec<&str> = lines[header + 1].split(',').collect();
        assert_eq!(first[0], "0");
        assert_eq!(first[2].parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn dos_and_series_csv() {
        let spec = RingSpec::new(64, 3.0).unwrap();
        let dos = dos_histogram(&full_spectrum(&spec), 8).unwrap();
        let text = render(|b| write_dos_csv(b, &dos, &Metadata::new()));
        assert!(text.contains("bin_lo,bin_hi,density,count\n"));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);

        let grid = TimeGrid::new(vec![1.0, 2.0]).unwrap();
        let series = TimeSeries {
            spec: None,
            kind: SeriesKind::SpaReturn,
            grid,
            values: vec![0.5, 0.25],
        };
        let mut extra = Metadata::new();
        extra.push("note", "two\nlines");
        let text = render(|b| write_series_csv(b, &series, &extra));
        assert!(text.contains("# note: two lines\n"));
        assert_eq!(text.matches("# version").count(), 1);
        assert!(text.ends_with("t,value\n1.0000000000000000e0,5.0000000000000000e-1\n2.0000000000000000e0,2.5000000000000000e-1\n"));
    }

    #[test]
    fn json_document_shape() {
        let spec = RingSpec::new(8, 2.0).unwrap();
        let doc = to_json_document(&spec, &vec![1.0, 2.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(v["version"], VERSION);
        assert_eq!(v["config"]["n_nodes"], 8);
        assert_eq!(v["result"][1], 2.0);
    }
}
