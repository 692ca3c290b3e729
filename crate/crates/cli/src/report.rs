use std::io;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::ser::{Formatter, PrettyFormatter};

/// One field of a report row.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => sci(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => v.to_string(),
            Cell::Missing => String::new(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) => s.serialize_f64(*v),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Text(v) => s.serialize_str(v),
            Cell::Flag(v) => s.serialize_bool(*v),
            Cell::Missing => s.serialize_none(),
        }
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Ordered key/value list serialized as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Fields(pub Vec<(String, Cell)>);

impl Fields {
    pub fn push(&mut self, key: &str, value: impl Into<Cell>) {
        self.0.push((key.to_string(), value.into()));
    }
}

impl Serialize for Fields {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// Everything a subcommand emits.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub subcommand: &'static str,
    pub config: Fields,
    pub summary: Fields,
    pub checks: Vec<Check>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
    /// Set when some sample failed on its inputs (exit 1 after writing).
    pub input_errors: usize,
}

impl Report {
    pub fn new(subcommand: &'static str, config: Fields, columns: &'static [&'static str]) -> Self {
        Self {
            subcommand,
            config,
            summary: Fields::default(),
            checks: Vec::new(),
            columns,
            rows: Vec::new(),
            input_errors: 0,
        }
    }

    pub fn check(&mut self, name: String, pass: bool) {
        self.checks.push(Check { name, pass });
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# cqnls {}\n# subcommand={}\n", cqnls_core::VERSION, self.subcommand);
        for (k, v) in self.config.0.iter().chain(&self.summary.0) {
            out.push_str(&format!("# {k}={}\n", v.csv()));
        }
        for c in &self.checks {
            out.push_str(&format!("# check={} {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sci17(PrettyFormatter::new()));
        self.serialize(&mut ser).expect("report serialization writes to memory");
        buf.push(b'\n');
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

struct Records<'a>(&'a Report);

impl Serialize for Records<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            let fields = Fields(self.0.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect());
            seq.serialize_element(&fields)?;
        }
        seq.end()
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(7))?;
        map.serialize_entry("tool", "cqnls")?;
        map.serialize_entry("version", cqnls_core::VERSION)?;
        map.serialize_entry("subcommand", self.subcommand)?;
        map.serialize_entry("config", &self.config)?;
        map.serialize_entry("summary", &self.summary)?;
        map.serialize_entry("checks", &self.checks)?;
        map.serialize_entry("records", &Records(self))?;
        map.end()
    }
}

/// Pretty JSON with every float written as `{:.16e}`.
struct Sci17<'a>(PrettyFormatter<'a>);

impl Formatter for Sci17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(sci(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
