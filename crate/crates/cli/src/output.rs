//! CSV / JSON rendering and atomic file output.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A row type with a fixed CSV column order. JSON output serializes the
/// same fields, in the same order, as an array of objects.
pub trait Row: Serialize {
    const HEADER: &'static str;
    fn write_csv(&self, out: &mut String);
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").expect("writing to a String cannot fail");
}

pub fn fmt_fields(out: &mut String, ints: &[usize], floats: &[f64]) {
    let mut first = true;
    for i in ints {
        if !first {
            out.push(',');
        }
        first = false;
        write!(out, "{i}").expect("writing to a String cannot fail");
    }
    for &v in floats {
        if !first {
            out.push(',');
        }
        first = false;
        fmt_f64(out, v);
    }
    out.push('\n');
}

pub fn render<R: Row>(rows: &[R], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut s = String::with_capacity(64 * (rows.len() + 1));
            s.push_str(R::HEADER);
            s.push('\n');
            for r in rows {
                r.write_csv(&mut s);
            }
            Ok(s)
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).context("serializing rows")?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes `content` to `path` through a sibling temp file and a rename, so
/// a failed run never leaves a partial file. `None` writes to stdout.
pub fn emit(content: &str, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .context("writing to stdout")?;
            stdout.flush().context("flushing stdout")
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .with_context(|| format!("creating temporary file in {}", dir.display()))?;
            tmp.write_all(content.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
            tmp.persist(path)
                .with_context(|| format!("moving output into place at {}", path.display()))?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ScatterRow {
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub theta: f64,
}

impl Row for ScatterRow {
    const HEADER: &'static str = "x,y,r,theta";
    fn write_csv(&self, out: &mut String) {
        fmt_fields(out, &[], &[self.x, self.y, self.r, self.theta]);
    }
}

#[derive(Debug, Serialize)]
pub struct CsaRow {
    pub layer: usize,
    pub sector: usize,
    pub x: f64,
    pub y: f64,
    pub r: f64,
    pub theta: f64,
}

impl Row for CsaRow {
    const HEADER: &'static str = "layer,sector,x,y,r,theta";
    fn write_csv(&self, out: &mut String) {
        fmt_fields(
            out,
            &[self.layer, self.sector],
            &[self.x, self.y, self.r, self.theta],
        );
    }
}

#[derive(Debug, Serialize)]
pub struct PdfRow {
    #[serde(rename = "l_dB")]
    pub l_db: f64,
    pub f_closed_form: f64,
    pub f_numeric: f64,
}

impl Row for PdfRow {
    const HEADER: &'static str = "l_dB,f_closed_form,f_numeric";
    fn write_csv(&self, out: &mut String) {
        fmt_fields(out, &[], &[self.l_db, self.f_closed_form, self.f_numeric]);
    }
}

#[derive(Debug, Serialize)]
pub struct HistRow {
    #[serde(rename = "l_dB")]
    pub l_db: f64,
    pub f_empirical: f64,
    pub f_closed_form: f64,
}

impl Row for HistRow {
    const HEADER: &'static str = "l_dB,f_empirical,f_closed_form";
    fn write_csv(&self, out: &mut String) {
        fmt_fields(out, &[], &[self.l_db, self.f_empirical, self.f_closed_form]);
    }
}
