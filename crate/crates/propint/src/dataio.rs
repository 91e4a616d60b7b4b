//! Subject-level dataset loading, subgroup aggregation, and batch interval
//! analysis.
//!
//! Datasets are CSV with a header row. Two columns are mandatory:
//! `subject_id` (non-empty, unique) and `outcome` (0/1, true/false, yes/no,
//! case-insensitive). Every other column becomes a string attribute usable in
//! subgroup filters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::intervals::{construct, Counts, Interval, Method};
use crate::numerics::ConfidenceLevel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubjectRecord {
    pub subject_id: String,
    pub outcome: bool,
    pub attributes: BTreeMap<String, String>,
}

/// Aggregated counts for one subgroup filter. `n` may be 0; converting to
/// `Counts` then reports the empty subgroup instead of panicking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupCounts {
    pub filter: Vec<(String, String)>,
    pub n: u64,
    pub k: u64,
}

impl SubgroupCounts {
    pub fn counts(&self) -> Result<Counts> {
        if self.n == 0 {
            return Err(Error::EmptySubgroup);
        }
        Counts::new(self.n, self.k)
    }
}

fn parse_outcome(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" => Some(true),
        "0" | "false" | "no" => Some(false),
        _ => None,
    }
}

pub fn load_dataset<R: Read>(reader: R) -> Result<Vec<SubjectRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let sid_idx = headers.iter().position(|h| h == "subject_id");
    let out_idx = headers.iter().position(|h| h == "outcome");
    let (sid_idx, out_idx) = match (sid_idx, out_idx) {
        (Some(s), Some(o)) => (s, o),
        _ => {
            return Err(Error::Schema(
                "dataset must provide `subject_id` and `outcome` columns".into(),
            ))
        }
    };

    let mut seen = BTreeSet::new();
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let subject_id = row.get(sid_idx).unwrap_or("").trim().to_string();
        if subject_id.is_empty() {
            return Err(Error::Row { line, message: "empty subject_id".into() });
        }
        if !seen.insert(subject_id.clone()) {
            return Err(Error::Row {
                line,
                message: format!("duplicate subject_id `{subject_id}`"),
            });
        }
        let raw_outcome = row.get(out_idx).unwrap_or("");
        let outcome = parse_outcome(raw_outcome).ok_or_else(|| Error::Row {
            line,
            message: format!("unparseable outcome value `{}`", raw_outcome.trim()),
        })?;
        let mut attributes = BTreeMap::new();
        for (i, field) in row.iter().enumerate() {
            if i != sid_idx && i != out_idx {
                if let Some(name) = headers.get(i) {
                    attributes.insert(name.clone(), field.trim().to_string());
                }
            }
        }
        records.push(SubjectRecord { subject_id, outcome, attributes });
    }
    Ok(records)
}

pub fn load_dataset_path<P: AsRef<Path>>(path: P) -> Result<Vec<SubjectRecord>> {
    load_dataset(std::fs::File::open(path)?)
}

/// Counts records matching every (column, value) pair of `filter`. An empty
/// filter matches the whole dataset. Unknown filter columns are rejected
/// rather than silently matching nothing.
pub fn aggregate(records: &[SubjectRecord], filter: &[(String, String)]) -> Result<SubgroupCounts> {
    if let Some(first) = records.first() {
        for (col, _) in filter {
            if !first.attributes.contains_key(col) {
                return Err(Error::UnknownColumn(col.clone()));
            }
        }
    }
    let mut n = 0u64;
    let mut k = 0u64;
    for rec in records {
        let matches = filter
            .iter()
            .all(|(col, val)| rec.attributes.get(col).map(String::as_str) == Some(val.as_str()));
        if matches {
            n += 1;
            if rec.outcome {
                k += 1;
            }
        }
    }
    Ok(SubgroupCounts { filter: filter.to_vec(), n, k })
}

/// One line of a batch analysis: a subgroup, a method, and either the
/// interval or the reason none could be produced. Row-level failures (an
/// empty subgroup, a regime error) are carried per row so the rest of the
/// report still comes out.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisRow {
    pub filter: Vec<(String, String)>,
    pub method: Method,
    pub level: f64,
    pub n: u64,
    pub k: u64,
    pub outcome: std::result::Result<Interval, String>,
}

/// Cross product of filters and methods. Unknown filter columns abort the
/// whole analysis (they are caller mistakes, not data properties).
pub fn analyze(
    records: &[SubjectRecord],
    filters: &[Vec<(String, String)>],
    methods: &[Method],
    lv: ConfidenceLevel,
) -> Result<Vec<AnalysisRow>> {
    let mut rows = Vec::with_capacity(filters.len() * methods.len());
    for filter in filters {
        let agg = aggregate(records, filter)?;
        for &method in methods {
            let outcome = agg
                .counts()
                .and_then(|c| construct(method, c, lv))
                .map_err(|e| e.to_string());
            rows.push(AnalysisRow {
                filter: filter.clone(),
                method,
                level: lv.level(),
                n: agg.n,
                k: agg.k,
                outcome,
            });
        }
    }
    Ok(rows)
}

/// Blueprint for one homogeneous block of a synthetic dataset: `n` subjects
/// sharing `attributes`, the first `k` of them with outcome 1.
#[derive(Debug, Clone)]
pub struct SubgroupSpec {
    pub attributes: Vec<(&'static str, &'static str)>,
    pub n: u64,
    pub k: u64,
}

/// Renders the blocks as CSV text. Attribute columns are the union over
/// blocks, in first-appearance order; missing values render empty.
pub fn synthetic_dataset(groups: &[SubgroupSpec]) -> String {
    let mut columns: Vec<&'static str> = Vec::new();
    for g in groups {
        for (col, _) in &g.attributes {
            if !columns.contains(col) {
                columns.push(col);
            }
        }
    }
    let mut out = String::from("subject_id,outcome");
    for col in &columns {
        let _ = write!(out, ",{col}");
    }
    out.push('\n');
    let mut serial = 0u64;
    for g in groups {
        for i in 0..g.n {
            serial += 1;
            let outcome = u64::from(i < g.k);
            let _ = write!(out, "S{serial:05},{outcome}");
            for col in &columns {
                let val = g
                    .attributes
                    .iter()
                    .find(|(c, _)| c == col)
                    .map(|(_, v)| *v)
                    .unwrap_or("");
                let _ = write!(out, ",{val}");
            }
            out.push('\n');
        }
    }
    out
}

/// Synthetic trial-style fixture: 2000 subjects, 338 events, including a
/// small subgroup (n=90, k=3) whose Wald lower bound is negative. Published
/// subgroup analyses of this shape are not reproducible without subject-level
/// data; this fixture stands in for exercising the pipeline.
pub fn synthetic_trial_fixture() -> String {
    synthetic_dataset(&[
        SubgroupSpec {
            attributes: vec![("sex", "female"), ("region", "region3"), ("arm", "treatment")],
            n: 90,
            k: 3,
        },
        SubgroupSpec {
            attributes: vec![("sex", "female"), ("region", "region3"), ("arm", "control")],
            n: 90,
            k: 10,
        },
        SubgroupSpec {
            attributes: vec![("sex", "male"), ("region", "region1"), ("arm", "control")],
            n: 1820,
            k: 325,
        },
    ])
}
