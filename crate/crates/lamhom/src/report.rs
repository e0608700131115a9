//! Report plumbing: tolerance sets, input hashing, and deterministic JSON.
//!
//! Reports must be byte-identical across runs and platforms for the same
//! input, so object keys are emitted in sorted order and every float is
//! printed in scientific notation with 17 significant digits (enough to
//! round-trip an IEEE double).

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io;

use crate::{Error, Result};

/// The numeric tolerances an analysis run uses, echoed into every report.
/// Override individual values with `set` (the CLI maps `--tol name=value`
/// onto it).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Deciding whether a computed scalar counts as zero (sign classification).
    pub zero: f64,
    /// Relative eigenvalue slack accepted in semidefiniteness checks.
    pub psd: f64,
    /// Convergence threshold of fixed-point/alternating iterations.
    pub iter: f64,
    /// Interval width at which bisection stops.
    pub bisect: f64,
    /// Relative residual below which an equality certificate counts as tight.
    pub loss: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-8,
            psd: 1e-10,
            iter: 1e-12,
            bisect: 1e-12,
            loss: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance `{name}` must be a positive finite number, got {value}"
            )));
        }
        match name {
            "zero" => self.zero = value,
            "psd" => self.psd = value,
            "iter" => self.iter = value,
            "bisect" => self.bisect = value,
            "loss" => self.loss = value,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown tolerance `{other}` (known: zero, psd, iter, bisect, loss)"
                )))
            }
        }
        Ok(())
    }
}

/// Hex SHA-256 of raw input bytes, embedded in reports for reproducibility.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Fixed float rendering shared by JSON and CSV output.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty formatter that renders every float through [`format_float`], so two
/// runs never differ in the last digits.
struct SciFormatter<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for SciFormatter<'_> {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(format_float(value).as_bytes())
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn end_object_key<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_key(writer)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serializes any report to deterministic pretty JSON: sorted keys, fixed
/// float rendering, trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    // Round-tripping through `Value` sorts object keys (the default map is
    // ordered by key).
    let value = serde_json::to_value(value)
        .map_err(|e| Error::InvalidInput(format!("report serialization failed: {e}")))?;
    let mut buf = Vec::new();
    let formatter = SciFormatter {
        inner: serde_json::ser::PrettyFormatter::new(),
    };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::InvalidInput(format!("report serialization failed: {e}")))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::InvalidInput(format!("non-UTF-8 report: {e}")))
}
