//! The `.lalg` text format, its JSON mirror, poset files, and report
//! serialization.
//!
//! ```text
//! # two-element Boolean algebra
//! name: B2
//! elements: 1 0
//! unit: 1
//! row 1: 1 0
//! row 0: 1 1
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{validate, FiniteLAlgebra, RawAlgebra};
use crate::constructions::PosetSpec;
use crate::error::Error;
use crate::laws::{LawReport, Verdict};

/// A syntax error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Algebra(#[from] Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        self.source.is_none() && self.expected.is_empty()
    }
}

/// An operation table as written in a file, rows in element order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub name: String,
    pub elements: Vec<String>,
    pub unit: String,
    pub table: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

impl AlgebraDocument {
    pub fn from_algebra(x: &FiniteLAlgebra) -> Self {
        AlgebraDocument {
            name: x.name().to_string(),
            elements: x.labels().to_vec(),
            unit: x.label(x.unit()).to_string(),
            table: x
                .table_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|v| x.label(v).to_string()).collect())
                .collect(),
            metadata: Metadata::default(),
        }
    }

    pub fn to_raw(&self) -> Result<RawAlgebra, Error> {
        let index: HashMap<&str, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let find = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        Ok(RawAlgebra {
            name: self.name.clone(),
            labels: self.elements.clone(),
            unit: find(&self.unit)?,
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|l| find(l)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn to_algebra(&self) -> Result<FiniteLAlgebra, Error> {
        validate(self.to_raw()?)
    }
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && !s.contains([':', '#']) && !s.chars().any(char::is_whitespace)
}

/// Splits a line into whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((offset + line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((offset + line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

/// Strips a trailing comment; returns the content.
fn content(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// `key: value` split; value keeps its starting column.
fn key_value(raw: &str, lineno: usize) -> Result<(&str, &str, usize), ParseError> {
    let colon = raw
        .find(':')
        .ok_or_else(|| ParseError::new(lineno, 1, "expected `key: value`"))?;
    let key = raw[..colon].trim();
    let value = &raw[colon + 1..];
    Ok((key, value, raw[..colon + 1].chars().count()))
}

/// A `row` line: line, column of the label, label, entries with columns.
type RowLine = (usize, usize, String, Vec<(usize, String)>);

pub fn parse_algebra(text: &str) -> Result<AlgebraDocument, ParseError> {
    let mut name: Option<String> = None;
    let mut source: Option<String> = None;
    let mut elements: Option<(usize, Vec<String>)> = None;
    let mut unit: Option<(usize, usize, String)> = None;
    let mut rows: Vec<RowLine> = Vec::new();
    let mut expected = BTreeMap::new();
    let mut last_line = 0;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let raw = content(line);
        if raw.trim().is_empty() {
            continue;
        }
        let (key, value, vcol) = key_value(raw, lineno)?;
        let key_col = raw.len() - raw.trim_start().len() + 1;
        let dup = |what: &str| ParseError::new(lineno, key_col, format!("duplicate `{what}`"));
        match key.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["name"] => {
                if name.replace(value.trim().to_string()).is_some() {
                    return Err(dup("name"));
                }
            }
            ["source"] => {
                if source.replace(value.trim().to_string()).is_some() {
                    return Err(dup("source"));
                }
            }
            ["elements"] => {
                let labels: Vec<String> = tokens(value, vcol)
                    .into_iter()
                    .map(|(col, t)| {
                        if is_label(t) {
                            Ok(t.to_string())
                        } else {
                            Err(ParseError::new(lineno, col, format!("invalid label {t:?}")))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                if labels.is_empty() {
                    return Err(ParseError::new(lineno, vcol, "no elements"));
                }
                if elements.replace((lineno, labels)).is_some() {
                    return Err(dup("elements"));
                }
            }
            ["unit"] => {
                let toks = tokens(value, vcol);
                let [(col, t)] = toks.as_slice() else {
                    return Err(ParseError::new(
                        lineno,
                        vcol,
                        "expected exactly one unit label",
                    ));
                };
                if unit.replace((lineno, *col, t.to_string())).is_some() {
                    return Err(dup("unit"));
                }
            }
            ["row", label] => {
                let col = key_col
                    + raw.trim_start()[3..]
                        .find(|c: char| !c.is_whitespace())
                        .unwrap_or(0)
                    + 3;
                let entries = tokens(value, vcol)
                    .into_iter()
                    .map(|(c, t)| (c, t.to_string()))
                    .collect();
                rows.push((lineno, col, label.to_string(), entries));
            }
            ["expect", what] => {
                if expected
                    .insert(what.to_string(), value.trim().to_string())
                    .is_some()
                {
                    return Err(dup(&format!("expect {what}")));
                }
            }
            _ => {
                return Err(ParseError::new(
                    lineno,
                    key_col,
                    format!("unknown key `{key}`"),
                ));
            }
        }
    }

    let (elements_line, elements) =
        elements.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `elements`"))?;
    let index: HashMap<&str, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    if index.len() != elements.len() {
        return Err(ParseError::new(elements_line, 1, "duplicate element label"));
    }
    let (unit_line, unit_col, unit) =
        unit.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `unit`"))?;
    if !index.contains_key(unit.as_str()) {
        return Err(ParseError::new(
            unit_line,
            unit_col,
            format!("unknown unit {unit:?}"),
        ));
    }
    let n = elements.len();
    let mut table: Vec<Option<Vec<String>>> = vec![None; n];
    for (lineno, col, label, entries) in rows {
        let Some(&r) = index.get(label.as_str()) else {
            return Err(ParseError::new(
                lineno,
                col,
                format!("row for unknown element {label:?}"),
            ));
        };
        if table[r].is_some() {
            return Err(ParseError::new(
                lineno,
                col,
                format!("duplicate row for {label:?}"),
            ));
        }
        if entries.len() != n {
            let col = entries.get(n).map(|e| e.0).unwrap_or(col);
            return Err(ParseError::new(
                lineno,
                col,
                format!(
                    "table not square: row {label:?} has {} entries, expected {n}",
                    entries.len()
                ),
            ));
        }
        for (c, e) in &entries {
            if !index.contains_key(e.as_str()) {
                return Err(ParseError::new(
                    lineno,
                    *c,
                    format!("unknown element {e:?}"),
                ));
            }
        }
        table[r] = Some(entries.into_iter().map(|(_, e)| e).collect());
    }
    if let Some(missing) = table.iter().position(Option::is_none) {
        return Err(ParseError::new(
            last_line.max(1),
            1,
            format!("table not square: missing row for {:?}", elements[missing]),
        ));
    }
    Ok(AlgebraDocument {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        elements,
        unit,
        table: table.into_iter().map(Option::unwrap).collect(),
        metadata: Metadata { source, expected },
    })
}

pub fn serialize_algebra(doc: &AlgebraDocument) -> String {
    let mut out = String::new();
    writeln!(out, "name: {}", doc.name).unwrap();
    if let Some(source) = &doc.metadata.source {
        writeln!(out, "source: {source}").unwrap();
    }
    writeln!(out, "elements: {}", doc.elements.join(" ")).unwrap();
    writeln!(out, "unit: {}", doc.unit).unwrap();
    for (label, row) in doc.elements.iter().zip(&doc.table) {
        writeln!(out, "row {label}: {}", row.join(" ")).unwrap();
    }
    for (k, v) in &doc.metadata.expected {
        writeln!(out, "expect {k}: {v}").unwrap();
    }
    out
}

pub fn parse_poset(text: &str) -> Result<PosetSpec, ParseError> {
    let mut name = None;
    let mut elements: Option<Vec<String>> = None;
    let mut top: Option<(usize, usize, String)> = None;
    let mut covers = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let raw = content(line);
        if raw.trim().is_empty() {
            continue;
        }
        let toks = tokens(raw, 0);
        if toks[0].1 == "cover" {
            let [_, (ca, a), (cl, "<"), (cb, b)] = toks.as_slice() else {
                return Err(ParseError::new(lineno, toks[0].0, "expected `cover a < b`"));
            };
            covers.push(((lineno, *ca, a.to_string()), (lineno, *cb, b.to_string())));
            let _ = cl;
            continue;
        }
        let (key, value, vcol) = key_value(raw, lineno)?;
        match key {
            "name" => name = Some(value.trim().to_string()),
            "elements" => {
                let labels: Vec<String> = tokens(value, vcol)
                    .into_iter()
                    .map(|(_, t)| t.to_string())
                    .collect();
                if let Some((col, bad)) =
                    tokens(value, vcol).into_iter().find(|(_, t)| !is_label(t))
                {
                    return Err(ParseError::new(
                        lineno,
                        col,
                        format!("invalid label {bad:?}"),
                    ));
                }
                elements = Some(labels);
            }
            "top" => {
                let toks = tokens(value, vcol);
                let [(col, t)] = toks.as_slice() else {
                    return Err(ParseError::new(
                        lineno,
                        vcol,
                        "expected exactly one top label",
                    ));
                };
                top = Some((lineno, *col, t.to_string()));
            }
            other => {
                return Err(ParseError::new(lineno, 1, format!("unknown key `{other}`")));
            }
        }
    }
    let elements =
        elements.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `elements`"))?;
    let known = |(line, col, l): &(usize, usize, String)| {
        if elements.contains(l) {
            Ok(l.clone())
        } else {
            Err(ParseError::new(
                *line,
                *col,
                format!("unknown element {l:?}"),
            ))
        }
    };
    let top = top.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `top`"))?;
    let top = known(&top)?;
    let covers = covers
        .iter()
        .map(|(a, b)| Ok((known(a)?, known(b)?)))
        .collect::<Result<_, ParseError>>()?;
    Ok(PosetSpec {
        name: name.unwrap_or_else(|| "poset".to_string()),
        elements,
        covers,
        top,
    })
}

fn is_json(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

/// Reads a `.lalg` or `.json` document, chosen by extension.
pub fn read_document(path: &Path) -> Result<AlgebraDocument, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    if is_json(path) {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(parse_algebra(&text)?)
    }
}

pub fn read_algebra(path: &Path) -> Result<FiniteLAlgebra, IoError> {
    Ok(read_document(path)?.to_algebra()?)
}

/// Renders a document in the format implied by `path`.
pub fn render_document(doc: &AlgebraDocument, path: Option<&Path>) -> String {
    match path {
        Some(p) if is_json(p) => {
            let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
            s.push('\n');
            s
        }
        _ => serialize_algebra(doc),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct ReportRow<'a> {
    law: &'a str,
    corpus: &'a str,
    verdict: Verdict,
    instances: usize,
    detail: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a crate::laws::Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<&'a crate::laws::Timing>,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    schema: u32,
    reports: Vec<ReportRow<'a>>,
}

pub const REPORT_SCHEMA: u32 = 1;

/// Serializes report rows. Timing is the only nondeterministic content and
/// is omitted when `timing` is false.
pub fn serialize_report(reports: &[LawReport], format: ReportFormat, timing: bool) -> String {
    match format {
        ReportFormat::Json => {
            let file = ReportFile {
                schema: REPORT_SCHEMA,
                reports: reports
                    .iter()
                    .map(|r| ReportRow {
                        law: &r.law,
                        corpus: &r.corpus,
                        verdict: r.verdict,
                        instances: r.instances,
                        detail: &r.detail,
                        witness: r.witness.as_ref(),
                        timing: timing.then_some(&r.timing),
                    })
                    .collect(),
            };
            serde_json::to_string(&file).expect("report serializes")
        }
        ReportFormat::Text => {
            let mut out = String::new();
            for r in reports {
                let tag = match r.verdict {
                    Verdict::Pass => "PASS",
                    Verdict::Fail => "FAIL",
                };
                write!(
                    out,
                    "{tag} {} [{}] {} instance(s)",
                    r.law, r.corpus, r.instances
                )
                .unwrap();
                if !r.detail.is_empty() {
                    write!(out, ": {}", r.detail).unwrap();
                }
                out.push('\n');
                if let Some(w) = &r.witness {
                    writeln!(out, "  witness: {w}").unwrap();
                }
                if timing {
                    writeln!(out, "  time: {} us", r.timing.wall_us).unwrap();
                }
            }
            out
        }
    }
}

impl fmt::Display for crate::laws::Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} on {}: {}",
            self.kind, self.algebra.name, self.message
        )?;
        if !self.elements.is_empty() {
            write!(f, "; elements {}", self.elements.join(" "))?;
        }
        for i in &self.ideals {
            write!(f, "; ideal {{{}}}", i.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{fixture, fixtures};
    use proptest::prelude::*;

    const B2: &str = "\
# two-element Boolean algebra
name: B2
elements: 1 0
unit: 1
row 1: 1 0
row 0: 1 1
";

    const DIAMOND: &str = "\
name: diamond
elements: 1 p q 0
unit: 1
row 1: 1 p q 0
row p: 1 1 0 0   # p·q = p·0 = 0
row q: 1 0 1 0
row 0: 1 1 1 1
";

    #[test]
    fn parses_b2() {
        let doc = parse_algebra(B2).unwrap();
        assert_eq!(doc.elements, ["1", "0"]);
        let x = doc.to_algebra().unwrap();
        assert_eq!(x.table_rows(), fixture("B2").unwrap().table_rows());
    }

    #[test]
    fn parses_diamond() {
        let x = parse_algebra(DIAMOND).unwrap().to_algebra().unwrap();
        assert_eq!(x, fixture("diamond").unwrap());
    }

    #[test]
    fn rows_in_any_order() {
        let text = "elements: 1 0\nunit: 1\nrow 0: 1 1\nrow 1: 1 0\n";
        let doc = parse_algebra(text).unwrap();
        assert_eq!(doc.table, vec![vec!["1", "0"], vec!["1", "1"]]);
        assert_eq!(doc.name, "unnamed");
    }

    #[test]
    fn non_square_table() {
        let text = "elements: a b c\nunit: a\nrow a: a b c a\nrow b: a a a\nrow c: a a a\n";
        let err = parse_algebra(text).unwrap_err();
        assert!(err.message.starts_with("table not square"), "{err}");
        assert_eq!((err.line, err.col), (3, 14));

        let text = "elements: a b c\nunit: a\nrow a: a b c\nrow b: a a a\n";
        let err = parse_algebra(text).unwrap_err();
        assert!(err.message.starts_with("table not square"), "{err}");
    }

    #[test]
    fn error_positions() {
        let err = parse_algebra("elements: 1 0\nunit: 1\nrow 1: 1 x\n").unwrap_err();
        assert_eq!((err.line, err.col), (3, 10));
        let err = parse_algebra("elements: 1 0\nunit: 2\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 7));
        let err = parse_algebra("elements: 1 0\nbogus: 1\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse_algebra("  elements: 1 0\nunit: 1\nrow z: 1 1\n").unwrap_err();
        assert_eq!((err.line, err.col), (3, 5));
        let err = parse_algebra("elements: 1 1\nunit: 1\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
        let err = parse_algebra("unit: 1\n").unwrap_err();
        assert!(err.message.contains("elements"));
        let err = parse_algebra("no colon here\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn axiom_failures_surface_after_parsing() {
        let text = "elements: 1 0\nunit: 1\nrow 1: 1 0\nrow 0: 1 0\n";
        let doc = parse_algebra(text).unwrap();
        assert!(matches!(doc.to_algebra(), Err(Error::AxiomViolations(_))));
    }

    #[test]
    fn metadata_round_trips() {
        let text = format!("{B2}source: hand-written\nexpect ideals: 2\nexpect spectrum: 1\n");
        let doc = parse_algebra(&text).unwrap();
        assert_eq!(doc.metadata.source.as_deref(), Some("hand-written"));
        assert_eq!(doc.metadata.expected.len(), 2);
        assert_eq!(parse_algebra(&serialize_algebra(&doc)).unwrap(), doc);
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(serde_json::from_str::<AlgebraDocument>(&json).unwrap(), doc);
    }

    #[test]
    fn fixtures_round_trip() {
        for f in fixtures().unwrap() {
            let doc = AlgebraDocument::from_algebra(&f.algebra);
            let text = serialize_algebra(&doc);
            assert_eq!(parse_algebra(&text).unwrap(), doc, "{}", f.name);
            assert_eq!(doc.to_algebra().unwrap(), f.algebra);
        }
    }

    #[test]
    fn poset_files() {
        let text = "name: v\nelements: 1 a b\ntop: 1\ncover a < 1\ncover b < a\n";
        let spec = parse_poset(text).unwrap();
        assert_eq!(spec.covers.len(), 2);
        let x = crate::constructions::poset_algebra(&spec).unwrap();
        assert_eq!(x.table_rows(), fixture("chain3").unwrap().table_rows());
        let err = parse_poset("elements: 1 a\ntop: 1\ncover a < z\n").unwrap_err();
        assert_eq!((err.line, err.col), (3, 11));
        let err = parse_poset("elements: 1 a\ntop: 1\ncover a 1\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn empty_json_report() {
        assert_eq!(
            serialize_report(&[], ReportFormat::Json, true),
            r#"{"schema":1,"reports":[]}"#
        );
    }

    fn label() -> impl Strategy<Value = String> {
        "[a-z0-9()',.]{1,4}"
    }

    proptest! {
        #[test]
        fn text_format_round_trips(
            labels in proptest::collection::hash_set(label(), 1..6),
            name in "[A-Za-z0-9_]{1,8}",
            seed in any::<u64>(),
        ) {
            // the parser only needs well-formed labels, not a valid algebra
            let elements: Vec<String> = labels.into_iter().collect();
            let n = elements.len();
            let mut s = seed;
            let table = (0..n)
                .map(|_| (0..n).map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    elements[(s >> 33) as usize % n].clone()
                }).collect())
                .collect();
            let doc = AlgebraDocument {
                name,
                unit: elements[0].clone(),
                elements,
                table,
                metadata: Metadata::default(),
            };
            prop_assert_eq!(parse_algebra(&serialize_algebra(&doc)).unwrap(), doc);
        }
    }
}
