//! JSON encodings shared by the reports. Integers become decimal strings so
//! no consumer rounds them; vectors become `[x, y]`.

use std::fmt::Display;

use serde_json::{json, Value};

use toric_nash::lattice::Vector;

pub fn int(n: &impl Display) -> Value {
    Value::String(n.to_string())
}

pub fn ints<'a, T: Display + 'a>(items: impl IntoIterator<Item = &'a T>) -> Value {
    Value::Array(items.into_iter().map(int).collect())
}

pub fn vector<T: Display>(v: &Vector<T>) -> Value {
    json!([int(&v.x), int(&v.y)])
}

pub fn vectors<'a, T: Display + 'a>(items: impl IntoIterator<Item = &'a Vector<T>>) -> Value {
    Value::Array(items.into_iter().map(vector).collect())
}

pub fn optional<T>(item: Option<T>, f: impl FnOnce(T) -> Value) -> Value {
    item.map_or(Value::Null, f)
}

/// Left-aligned columns separated by two spaces.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        out.push_str(&line(row.clone()));
    }
    out
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
