//! Serialization: CSV tables, JSON documents, DOT Levi graphs.
//!
//! Table CSV uses the `±index` cell notation (`-0`, `+13`) with a header row
//! of column indices and a leading row-index column. JSON documents
//! round-trip: parsing what was serialized reproduces the original value.

use crate::algebra::{AlgebraError, MultTable, SignedUnit};
use crate::incidence::{IncidenceError, IncidenceStructure};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// Full `2^N × 2^N` grid: header `*,0,1,...`, one labelled row per unit,
/// cells in the `±index` notation.
pub fn table_to_csv(table: &MultTable) -> String {
    let size = table.size() as u32;
    let mut out = String::from("*");
    for b in 0..size {
        out.push(',');
        out.push_str(&b.to_string());
    }
    out.push('\n');
    for a in 0..size {
        out.push_str(&a.to_string());
        for b in 0..size {
            out.push(',');
            out.push_str(&table.entry(a, b).to_string());
        }
        out.push('\n');
    }
    out
}

fn parse_cell(cell: &str) -> Result<SignedUnit, ExportError> {
    let bad = || ExportError::Csv(format!("bad cell {cell:?}"));
    let mut chars = cell.chars();
    let sign = match chars.next() {
        Some('+') => 1,
        Some('-') => -1,
        _ => return Err(bad()),
    };
    let index = chars.as_str().parse::<u32>().map_err(|_| bad())?;
    Ok(SignedUnit { sign, index })
}

pub fn table_from_csv(text: &str) -> Result<MultTable, ExportError> {
    let mut rows = text.lines().filter(|l| !l.trim().is_empty());
    let header = rows.next().ok_or_else(|| ExportError::Csv("empty input".into()))?;
    let mut fields = header.split(',');
    if fields.next() != Some("*") {
        return Err(ExportError::Csv("header must start with '*'".into()));
    }
    let columns: Vec<&str> = fields.collect();
    let size = columns.len();
    if !size.is_power_of_two() {
        return Err(ExportError::Csv(format!("{size} columns is not a power of two")));
    }
    for (i, c) in columns.iter().enumerate() {
        if c.parse::<usize>() != Ok(i) {
            return Err(ExportError::Csv(format!("unexpected column header {c:?}")));
        }
    }
    let level = size.trailing_zeros();
    let mut entries = Vec::with_capacity(size * size);
    for (a, row) in rows.enumerate() {
        let mut fields = row.split(',');
        if fields.next().and_then(|f| f.parse::<usize>().ok()) != Some(a) {
            return Err(ExportError::Csv(format!("row {a} has a bad row label")));
        }
        let cells: Vec<&str> = fields.collect();
        if cells.len() != size {
            return Err(ExportError::Csv(format!("row {a} has {} cells", cells.len())));
        }
        for cell in cells {
            entries.push(parse_cell(cell)?);
        }
    }
    Ok(MultTable::from_entries(level, entries)?)
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    level: u32,
    /// Row-major `[sign, index]` pairs.
    entries: Vec<(i8, u32)>,
}

pub fn table_to_json(table: &MultTable) -> String {
    let doc = TableDoc {
        level: table.level(),
        entries: table.entries().iter().map(|e| (e.sign, e.index)).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("table document serializes")
}

pub fn table_from_json(text: &str) -> Result<MultTable, ExportError> {
    let doc: TableDoc =
        serde_json::from_str(text).map_err(|e| ExportError::Json(e.to_string()))?;
    let entries = doc
        .entries
        .into_iter()
        .map(|(sign, index)| SignedUnit { sign, index })
        .collect();
    Ok(MultTable::from_entries(doc.level, entries)?)
}

/// Numeric labels serialize as JSON numbers, anything else as strings.
fn label_value(label: &str) -> Value {
    match label.parse::<u64>() {
        Ok(n) => json!(n),
        Err(_) => json!(label),
    }
}

fn value_label(value: &Value) -> Result<String, ExportError> {
    match value {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(ExportError::Json(format!("bad point value {other}"))),
    }
}

/// `{"points": [...], "lines": [[a,b,c], ...], "classes": {...}}`; the
/// classes key is present only when a point partition is supplied.
pub fn structure_to_json(
    s: &IncidenceStructure,
    classes: Option<&BTreeMap<String, Vec<String>>>,
) -> String {
    let mut doc = json!({
        "points": s.labels().iter().map(|l| label_value(l)).collect::<Vec<_>>(),
        "lines": s
            .lines()
            .iter()
            .map(|line| line.map(|p| label_value(s.label(p))).to_vec())
            .collect::<Vec<_>>(),
    });
    if let Some(classes) = classes {
        doc["classes"] = json!(classes
            .iter()
            .map(|(label, points)| (
                label.clone(),
                points.iter().map(|p| label_value(p)).collect::<Vec<_>>()
            ))
            .collect::<serde_json::Map<String, Value>>());
    }
    serde_json::to_string_pretty(&doc).expect("structure document serializes")
}

type StructureClasses = BTreeMap<String, Vec<String>>;

pub fn structure_from_json(
    text: &str,
) -> Result<(IncidenceStructure, StructureClasses), ExportError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ExportError::Json(e.to_string()))?;
    let points = doc["points"]
        .as_array()
        .ok_or_else(|| ExportError::Json("missing points array".into()))?
        .iter()
        .map(value_label)
        .collect::<Result<Vec<_>, _>>()?;
    let mut lines = Vec::new();
    for line in doc["lines"]
        .as_array()
        .ok_or_else(|| ExportError::Json("missing lines array".into()))?
    {
        let triple = line
            .as_array()
            .filter(|l| l.len() == 3)
            .ok_or_else(|| ExportError::Json(format!("bad line {line}")))?;
        let mut labels = [String::new(), String::new(), String::new()];
        for (slot, value) in labels.iter_mut().zip(triple) {
            *slot = value_label(value)?;
        }
        lines.push(labels);
    }
    let structure = IncidenceStructure::new(points, lines)?;
    let mut classes = BTreeMap::new();
    if let Some(map) = doc.get("classes").and_then(Value::as_object) {
        for (label, members) in map {
            let members = members
                .as_array()
                .ok_or_else(|| ExportError::Json(format!("bad class {label}")))?
                .iter()
                .map(value_label)
                .collect::<Result<Vec<_>, _>>()?;
            classes.insert(label.clone(), members);
        }
    }
    Ok((structure, classes))
}

/// The point-line bipartite (Levi) graph in DOT. `line_attrs`, when given,
/// must align with `s.lines()` and lands on each incidence edge as a
/// `class` attribute.
pub fn levi_dot(s: &IncidenceStructure, line_attrs: Option<&[String]>) -> String {
    let quote = |text: &str| format!("\"{}\"", text.replace('"', "\\\""));
    let mut out = String::from("graph levi {\n");
    for label in s.labels() {
        out.push_str(&format!(
            "  p{} [shape=circle, label={}];\n",
            s.id_of(label).expect("own label"),
            quote(label)
        ));
    }
    for (li, line) in s.lines().iter().enumerate() {
        let members: Vec<&str> = line.iter().map(|&p| s.label(p)).collect();
        out.push_str(&format!(
            "  l{li} [shape=box, label={}];\n",
            quote(&format!("{{{}}}", members.join(",")))
        ));
    }
    for (li, line) in s.lines().iter().enumerate() {
        let attr = line_attrs
            .map(|attrs| format!(" [class={}]", quote(&attrs[li])))
            .unwrap_or_default();
        for &p in line {
            out.push_str(&format!("  p{p} -- l{li}{attr};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// Witness export: a JSON list of `[from, to]` label pairs.
pub fn witness_to_json(pairs: &[(String, String)]) -> String {
    let doc: Vec<Value> = pairs
        .iter()
        .map(|(from, to)| json!([label_value(from), label_value(to)]))
        .collect();
    serde_json::to_string_pretty(&doc).expect("witness document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;

    #[test]
    fn table_csv_round_trip() {
        for level in 0..=5 {
            let table = MultTable::build(level).unwrap();
            let csv = table_to_csv(&table);
            assert_eq!(table_from_csv(&csv).unwrap(), table);
        }
    }

    #[test]
    fn trivial_table_csv() {
        let table = MultTable::build(0).unwrap();
        assert_eq!(table_to_csv(&table), "*,0\n0,+0\n");
    }

    #[test]
    fn octonion_csv_matches_cell_notation() {
        let table = MultTable::build(3).unwrap();
        let csv = table_to_csv(&table);
        let row1: Vec<&str> = csv.lines().nth(2).unwrap().split(',').collect();
        // row for e_1: identity column then the printed octonion entries
        assert_eq!(row1, vec!["1", "+1", "-0", "-3", "+2", "-5", "+4", "+7", "-6"]);
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(table_from_csv("").is_err());
        assert!(table_from_csv("*,0,1,2\n").is_err()); // 3 columns
        assert!(table_from_csv("*,0\n0,?0\n").is_err());
        assert!(table_from_csv("*,0\n1,+0\n").is_err()); // bad row label
    }

    #[test]
    fn table_json_round_trip() {
        for level in [0, 1, 5] {
            let table = MultTable::build(level).unwrap();
            assert_eq!(table_from_json(&table_to_json(&table)).unwrap(), table);
        }
    }

    #[test]
    fn structure_json_round_trip() {
        let structures = [
            geometry::pg_model(3).unwrap(),
            geometry::configuration(4).unwrap(),
            crate::incidence::grassmannian(5).unwrap(),
        ];
        for s in &structures {
            let (parsed, classes) = structure_from_json(&structure_to_json(s, None)).unwrap();
            assert_eq!(&parsed, s);
            assert!(classes.is_empty());
        }
    }

    #[test]
    fn structure_json_with_classes() {
        let s = geometry::pg_model(3).unwrap();
        let classes = BTreeMap::from([
            ("alpha".to_string(), vec!["3".into(), "5".into(), "6".into()]),
            ("beta".to_string(), vec!["1".into(), "2".into(), "4".into(), "7".into()]),
        ]);
        let text = structure_to_json(&s, Some(&classes));
        let (parsed, parsed_classes) = structure_from_json(&text).unwrap();
        assert_eq!(parsed, s);
        assert_eq!(parsed_classes, classes);
        // numeric labels serialize as numbers
        assert!(text.contains("\"points\""));
        assert!(!text.contains("\"1\","));
    }

    #[test]
    fn dot_export_shape() {
        let s = geometry::configuration(2).unwrap();
        let dot = levi_dot(&s, Some(&vec!["ordinary".to_string()]));
        assert!(dot.starts_with("graph levi {"));
        assert!(dot.contains("p0 [shape=circle, label=\"1\"]"));
        assert!(dot.contains("l0 [shape=box, label=\"{1,2,3}\"]"));
        assert!(dot.contains("p0 -- l0 [class=\"ordinary\"];"));
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn witness_json_shape() {
        let pairs = vec![("{1,2}".to_string(), "3".to_string())];
        let text = witness_to_json(&pairs);
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc[0][0], json!("{1,2}"));
        assert_eq!(doc[0][1], json!(3));
    }
}
