//! Deterministic CSV and JSON tables.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bispecial::{Breakpoints, BREAKPOINT_CSV_HEADER};
use crate::construction::recurrence_bound;
use crate::error::{Error, Result};
use crate::family::ParameterFamily;
use crate::frequency::excess_check;
use crate::oracle::DEFAULT_MEMORY_BUDGET;
use crate::suite::oracle_comparison;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    Complexity,
    Bispecial,
    Frequency,
    Recurrence,
}

impl std::str::FromStr for ReportKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complexity" => Ok(ReportKind::Complexity),
            "bispecial" => Ok(ReportKind::Bispecial),
            "frequency" => Ok(ReportKind::Frequency),
            "recurrence" => Ok(ReportKind::Recurrence),
            _ => Err(Error::InvalidArgument(format!("unknown report {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub max_rank: usize,
    pub max_n: usize,
    /// Adds oracle columns to the complexity table.
    pub prefix_len: Option<usize>,
    pub saturation_factor: usize,
    pub memory_budget: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            max_rank: 8,
            max_n: 200,
            prefix_len: None,
            saturation_factor: 2,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// A rendered table plus the reason it stopped early, if it did.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub body: String,
    pub truncated: Option<String>,
}

/// JSON type of a column; big integers and rationals stay decimal strings.
#[derive(Clone, Copy)]
enum Col {
    Int,
    Bool,
    Float,
    Text,
}

struct Table {
    header: Vec<(&'static str, Col)>,
    rows: Vec<Vec<String>>,
    truncated: Option<String>,
}

impl Table {
    fn render(self, kind: &str, fam: &ParameterFamily, format: Format) -> Rendered {
        let body = match format {
            Format::Csv => {
                let names: Vec<_> = self.header.iter().map(|(h, _)| *h).collect();
                let mut out = names.join(",") + "\n";
                for r in &self.rows {
                    out.push_str(&r.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            self.header.iter().zip(r).map(|((h, col), v)| (h.to_string(), cell_json(*col, v))).collect(),
                        )
                    })
                    .collect();
                let doc = json!({
                    "report": kind,
                    "family": fam.name(),
                    "rows": rows,
                    "truncated": self.truncated,
                });
                serde_json::to_string_pretty(&doc).expect("serializes") + "\n"
            }
        };
        Rendered {
            body,
            truncated: self.truncated,
        }
    }
}

fn cell_json(col: Col, cell: &str) -> Value {
    let parsed = match col {
        Col::Int => cell.parse::<i64>().ok().map(Value::from),
        Col::Bool => cell.parse::<bool>().ok().map(Value::Bool),
        Col::Float => cell.parse::<f64>().ok().map(Value::from),
        Col::Text => None,
    };
    parsed.unwrap_or_else(|| Value::String(cell.to_string()))
}

/// Errors that end a table early instead of failing it.
fn stops_table(e: &Error) -> bool {
    matches!(e, Error::Unvalidated { .. } | Error::LevelUnavailable { .. })
}

pub fn render(fam: &ParameterFamily, kind: ReportKind, opts: &ReportOptions, format: Format) -> Result<Rendered> {
    let (name, table) = match kind {
        ReportKind::Complexity => ("complexity", complexity(fam, opts)?),
        ReportKind::Bispecial => ("bispecial", bispecial(fam, opts)?),
        ReportKind::Frequency => ("frequency", frequency(fam, opts)?),
        ReportKind::Recurrence => ("recurrence", recurrence(fam, opts)?),
    };
    Ok(table.render(name, fam, format))
}

fn complexity(fam: &ParameterFamily, opts: &ReportOptions) -> Result<Table> {
    let bp = Breakpoints::new(fam);
    let mut rows = Vec::new();
    let mut truncated = None;
    let oracle = match opts.prefix_len {
        Some(len) => Some(oracle_comparison(fam, opts.max_n, len, opts.saturation_factor, opts.memory_budget)?),
        None => None,
    };
    for n in 0..=opts.max_n {
        let big = BigUint::from(n);
        let (s, p) = match bp.s(&big).and_then(|s| Ok((s, bp.p(&big)?))) {
            Ok(v) => v,
            Err(e) if stops_table(&e) => {
                truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        };
        let mut row = vec![n.to_string(), s.to_string(), p.to_string()];
        if let Some(cmp) = &oracle {
            let r = &cmp.rows[n];
            row.extend([r.s_hat.to_string(), r.p_hat.to_string(), r.saturated.to_string()]);
        }
        rows.push(row);
    }
    let mut header = vec![("n", Col::Int), ("s_symbolic", Col::Int), ("p_symbolic", Col::Text)];
    if oracle.is_some() {
        header.extend([("s_hat", Col::Int), ("p_hat", Col::Text), ("saturated", Col::Bool)]);
    }
    Ok(Table { header, rows, truncated })
}

fn bispecial(fam: &ParameterFamily, opts: &ReportOptions) -> Result<Table> {
    let bp = Breakpoints::new(fam);
    let mut rows = Vec::new();
    let mut truncated = None;
    for i in 0..=opts.max_rank {
        match bp.rank(i) {
            Ok(r) => rows.push(r.csv_row().split(',').map(str::to_string).collect()),
            Err(e) if stops_table(&e) => {
                truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Table {
        header: BREAKPOINT_CSV_HEADER
            .split(',')
            .map(|h| (h, if h == "rank" { Col::Int } else { Col::Text }))
            .collect(),
        rows,
        truncated,
    })
}

fn frequency(fam: &ParameterFamily, opts: &ReportOptions) -> Result<Table> {
    let mut rows = Vec::new();
    let mut truncated = None;
    for i in 0..=opts.max_rank {
        match excess_check(fam, i) {
            Ok(r) => rows.push(vec![
                i.to_string(),
                r.ratio_u0.to_string(),
                r.ratio_v1.to_string(),
                r.bound_u0.to_string(),
                r.bound_v1.to_string(),
                r.excess.to_string(),
                format!("{:.12}", r.excess.approx()),
                r.bounds_hold.to_string(),
                r.floor_ok.map_or_else(|| "n/a".to_string(), |b| b.to_string()),
            ]),
            Err(e) if stops_table(&e) => {
                truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Table {
        header: vec![
            ("i", Col::Int),
            ("ratio_u0", Col::Text),
            ("ratio_v1", Col::Text),
            ("bound_u0", Col::Text),
            ("bound_v1", Col::Text),
            ("excess", Col::Text),
            ("excess_approx", Col::Float),
            ("bounds_hold", Col::Bool),
            ("floor_ok", Col::Bool),
        ],
        rows,
        truncated,
    })
}

fn recurrence(fam: &ParameterFamily, opts: &ReportOptions) -> Result<Table> {
    let mut rows = Vec::new();
    let mut truncated = None;
    for i in 0..=opts.max_rank {
        match recurrence_bound(fam, i) {
            Ok(r) => rows.push(vec![i.to_string(), r.value.to_string()]),
            Err(e) if stops_table(&e) => {
                truncated = Some(e.to_string());
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Table {
        header: vec![("i", Col::Int), ("bound", Col::Text)],
        rows,
        truncated,
    })
}

/// Serializes any report value the way the CLI writes JSON files.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializes") + "\n"
}
