//! Artifact assembly: CSV and JSON text with a fixed numeric format.
//!
//! Every floating-point field is rendered as `{:.16e}` — 17 significant
//! digits, enough to reproduce the exact double on read-back — so artifacts
//! are byte-identical across repeated runs with the same config.  A small
//! purpose-built JSON builder keeps that formatting rule enforceable;
//! object keys are emitted in insertion order.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

/// Header comment line shared by every artifact.
pub fn header(command: &str) -> String {
    format!("# annulus-harmonics v{} {command}", env!("CARGO_PKG_VERSION"))
}

/// 17-significant-digit rendering of a float.  Non-finite values spell
/// themselves out (they never appear in a successful artifact, but error
/// reports must not produce invalid syntax).
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// JSON document fragment.  Numbers carry the [`fmt17`] format; non-finite
/// floats degrade to strings so the document stays well-formed.
#[derive(Debug, Clone)]
pub enum Json {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Num(x) => {
                if x.is_finite() {
                    out.push_str(&fmt17(*x));
                } else {
                    let _ = write!(out, "\"{}\"", fmt17(*x));
                }
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                newline_indent(out, indent);
                out.push(']');
            }
            Json::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    newline_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                newline_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn newline_indent(out: &mut String, indent: usize) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Assembles a CSV artifact: the version header, optional `# key = value`
/// context lines, a column-name row, then the data rows.
pub fn csv(command: &str, context: &[(&str, String)], columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header(command));
    out.push('\n');
    for (key, value) in context {
        let _ = writeln!(out, "# {key} = {value}");
    }
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes the finished artifact to the configured destination.
pub fn write_artifact(path: Option<&Path>, content: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        assert_eq!(fmt17(std::f64::consts::PI), "3.1415926535897931e0");
        assert_eq!(fmt17(-1.5e-11), "-1.5000000000000000e-11");
        assert_eq!(fmt17(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rendering_is_deterministic_and_escaped() {
        let doc = Json::Obj(vec![
            ("value", Json::Num(0.5)),
            ("note", Json::Str("a \"quoted\"\nline".into())),
            ("flags", Json::Arr(vec![Json::Bool(true), Json::Int(-3)])),
            ("empty", Json::Arr(vec![])),
        ]);
        let text = doc.render();
        assert!(text.starts_with("{\n  \"value\": 5.0000000000000000e-1,"));
        assert!(text.contains("\"a \\\"quoted\\\"\\nline\""));
        assert!(text.contains("[\n    true,\n    -3\n  ]"));
        assert!(text.contains("\"empty\": []"));
        assert_eq!(text, doc.render());
    }

    #[test]
    fn csv_layout_matches_the_contract() {
        let text = csv(
            "zeros",
            &[("nu", "5.0000000000000000e-1".into())],
            &["index", "value"],
            &[vec!["1".into(), "3.14".into()]],
        );
        let mut lines = text.lines();
        let head = lines.next().unwrap();
        assert!(head.starts_with("# annulus-harmonics v"));
        assert!(head.ends_with(" zeros"));
        assert_eq!(lines.next().unwrap(), "# nu = 5.0000000000000000e-1");
        assert_eq!(lines.next().unwrap(), "index,value");
        assert_eq!(lines.next().unwrap(), "1,3.14");
    }
}
