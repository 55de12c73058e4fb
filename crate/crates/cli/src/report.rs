//! JSON report envelope with round-trippable floats.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
pub struct JsonReport<'a, C: Serialize, R: Serialize> {
    pub schema_version: &'static str,
    pub command: &'a C,
    pub results: &'a R,
    pub wall_time_ms: u64,
}

/// Compact output, floats with 17 significant digits.
struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialized report bytes, newline-terminated.
pub fn to_bytes<T: Serialize>(value: &T) -> serde_json::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RoundTrip);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}
