//! Deterministic JSON and CSV output.
//!
//! Every float is written as `{:.16e}` (17 significant digits), so a value
//! always round-trips and the same inputs give the same bytes.

use std::io;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

/// Complex number serialized as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub Complex64);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

pub fn cx_vec(v: &[Complex64]) -> Vec<Cx> {
    v.iter().copied().map(Cx).collect()
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Compact formatter with 17-significant-digit floats. Non-finite values
/// become `null` (handled by serde_json before the formatter is reached).
struct Fixed17;

impl serde_json::ser::Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// One JSON document followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Line-oriented CSV builder; `#` lines carry metadata ahead of the header.
#[derive(Default)]
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comment(&mut self, text: &str) -> &mut Self {
        for line in text.lines() {
            self.out.push_str("# ");
            self.out.push_str(line);
            self.out.push('\n');
        }
        self
    }

    pub fn header(&mut self, cols: &[&str]) -> &mut Self {
        self.out.push_str(&cols.join(","));
        self.out.push('\n');
        self
    }

    pub fn row<I, S>(&mut self, fields: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.out.push(',');
            }
            first = false;
            self.out.push_str(f.as_ref());
        }
        self.out.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}
