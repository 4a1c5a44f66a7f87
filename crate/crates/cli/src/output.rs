//! Deterministic JSON and CSV rendering: every float is written in
//! scientific notation with 17 significant digits.

use std::io::{self, Write};

use cqed_core::analysis::{Field, SweepResult};
use cqed_core::ComplexAmp;
use serde::Serialize;
use serde_json::{json, Value};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

/// Serialises `value` as one line of JSON.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialisation cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn amplitude(z: ComplexAmp) -> Value {
    json!({ "re": z.re, "im": z.im, "abs": z.norm() })
}

pub fn csv_header(result: &SweepResult) -> Vec<String> {
    let mut header = vec![result.variable.name().to_string()];
    for field in Field::for_model(result.model) {
        for part in ["abs", "re", "im"] {
            header.push(format!("{part}_{}", field.name()));
        }
    }
    header.push("status".into());
    header.push("message".into());
    header
}

/// Writes the sweep as CSV in grid order; failed points keep their row
/// with empty amplitude cells and `status = error`.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let fields = Field::for_model(result.model);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(result))?;
    for row in &result.rows {
        let mut record = vec![fmt_f64(row.x)];
        match &row.point {
            Some(p) => {
                for &f in &fields {
                    let z = p.field(f).expect("model provides its fields");
                    record.extend([fmt_f64(z.norm()), fmt_f64(z.re), fmt_f64(z.im)]);
                }
                record.push("ok".into());
                record.push(String::new());
            }
            None => {
                record.extend(std::iter::repeat_n(String::new(), 3 * fields.len()));
                record.push("error".into());
                record.push(row.error.clone().unwrap_or_default());
            }
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}
