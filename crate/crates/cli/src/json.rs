//! Minimal JSON emitter for the structured result record.
//!
//! Object keys are sorted and floats print with a fixed 12 decimal places,
//! so two runs over identical inputs produce byte-identical records and
//! golden-file tests stay stable. This writer is intentionally one-way; the
//! record is consumed by external tools, never read back.

use std::collections::BTreeMap;
use std::fmt::Write;

/// A JSON value restricted to what the result record needs.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    /// Fixed-point float, printed with 12 decimal places.
    Num(f64),
    /// Integer, printed exactly.
    Int(i64),
    /// String (escaped on output).
    Str(String),
    /// Array.
    Arr(Vec<Json>),
    /// Object; `BTreeMap` keeps keys sorted.
    Obj(BTreeMap<String, Json>),
}

impl Json {
    /// Convenience constructor for objects.
    pub fn obj(entries: impl IntoIterator<Item = (&'static str, Json)>) -> Self {
        Json::Obj(
            entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    /// Renders with 2-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Num(v) => {
                write!(out, "{v:.12}").expect("writing to a String cannot fail");
            }
            Json::Int(v) => {
                write!(out, "{v}").expect("writing to a String cannot fail");
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
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(map) => {
                if map.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                write!(out, "\\u{:04x}", c as u32).expect("writing to a String cannot fail");
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sort_and_floats_pin_their_width() {
        let record = Json::obj([
            ("zeta", Json::Int(-3)),
            ("alpha", Json::Num(0.5)),
            ("mid", Json::Arr(vec![Json::Num(1.0), Json::Str("x\"y".into())])),
        ]);
        let expected = "{\n  \"alpha\": 0.500000000000,\n  \"mid\": [\n    1.000000000000,\n    \"x\\\"y\"\n  ],\n  \"zeta\": -3\n}\n";
        assert_eq!(record.render(), expected);
    }

    #[test]
    fn empty_containers_stay_compact() {
        assert_eq!(Json::Arr(vec![]).render(), "[]\n");
        assert_eq!(Json::Obj(BTreeMap::new()).render(), "{}\n");
    }

    #[test]
    fn rendering_is_reproducible() {
        let record = Json::obj([("p0", Json::Num(1.0)), ("p1", Json::Num(0.0))]);
        assert_eq!(record.render(), record.render());
    }
}
