//! Deterministic text output: floats with a fixed number of significant
//! digits in CSV and JSON, and atomic file writes.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

pub const DEFAULT_PRECISION: usize = 17;

/// `x` in scientific notation with `precision` significant digits.
pub fn fmt_f64(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:.*e}", precision.max(1) - 1, x)
    }
}

/// CSV table with a header row. Cells are pushed as already formatted text.
#[derive(Debug, Clone)]
pub struct Csv {
    precision: usize,
    text: String,
    columns: usize,
}

pub enum Cell<'a> {
    Num(f64),
    Int(i64),
    Text(&'a str),
    Bool(bool),
}

impl Csv {
    pub fn new(header: &[&str], precision: usize) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Csv { precision, text, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        debug_assert_eq!(cells.len(), self.columns);
        let parts: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt_f64(*x, self.precision),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                Cell::Text(s) => (*s).to_string(),
                Cell::Bool(b) => b.to_string(),
            })
            .collect();
        self.text.push_str(&parts.join(","));
        self.text.push('\n');
    }

    /// Row of numbers only.
    pub fn nums(&mut self, xs: &[f64]) {
        let cells: Vec<Cell> = xs.iter().map(|&x| Cell::Num(x)).collect();
        self.row(&cells);
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.text.into_bytes()
    }
}

/// Pretty JSON whose floats carry `precision` significant digits; non-finite
/// floats become `null`.
struct PrecisionFormatter {
    inner: PrettyFormatter<'static>,
    precision: usize,
}

impl Formatter for PrecisionFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(fmt_f64(value, self.precision).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn end_object_key<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_key(w)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T, precision: usize) -> Vec<u8> {
    let mut out = Vec::new();
    let fmt = PrecisionFormatter { inner: PrettyFormatter::new(), precision };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    // Serializing plain data into memory cannot fail.
    value.serialize(&mut ser).expect("serializable report");
    out.push(b'\n');
    out
}

/// Writes through a temporary file in the same directory and renames it into
/// place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(fmt_f64(0.1, 17), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0, 3), "-2.00e0");
        assert_eq!(fmt_f64(0.1, 17).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn json_uses_the_precision() {
        let v = serde_json::json!({"a": [0.5, 1], "b": f64::NAN});
        let text = String::from_utf8(to_json(&v, 4)).unwrap();
        assert!(text.contains("5.000e-1"));
        assert!(text.contains("null"));
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["a"][0], 0.5);
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let mut csv = Csv::new(&["name", "x"], 3);
        csv.row(&[Cell::Text("a,b"), Cell::Num(1.0)]);
        assert_eq!(String::from_utf8(csv.into_bytes()).unwrap(), "name,x\n\"a,b\",1.00e0\n");
    }
}
