//! Output plumbing: JSON with fixed 17-significant-digit floats (so doubles
//! round-trip exactly and reruns are byte-identical) and plain CSV with a
//! header row, LF line endings, UTF-8.

use serde::Serialize;
use std::io::{self, Write};

/// serde_json formatter that prints every f64 in scientific notation with
/// 17 significant digits.
struct SciFloatFormatter;

impl serde_json::ser::Formatter for SciFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Formats one float as 17-significant-digit decimal text (shared by the
/// CSV writers).
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Top-level JSON document: every emission carries the schema version and
/// the subcommand name, with the payload nested under `result`.
#[derive(Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: u32,
    pub command: &'static str,
    pub result: T,
}

pub fn write_json<T: Serialize, W: Write>(doc: &Document<T>, mut out: W) -> io::Result<()> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFloatFormatter);
    doc.serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    buf.push(b'\n');
    out.write_all(&buf)
}

pub fn write_csv<W: Write>(header: &[&str], rows: &[Vec<String>], mut out: W) -> io::Result<()> {
    let mut buf = String::new();
    buf.push_str(&header.join(","));
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    out.write_all(buf.as_bytes())
}
