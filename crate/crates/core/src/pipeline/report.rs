//! Batch comparison of lower bounds, upper bounds and the Euclidean
//! baseline, written as CSV.
//!
//! Row columns: `instance, n, rho, m_or_k, kind, value, certified, seconds`.
//! `kind` is one of `ETSP`, `LB_exact`, `LB_relaxed`, `BP_heuristic`, `UB`.
//! `certified` says whether the value is a proven bound in its direction:
//! exact ETSP and both LB kinds bound the optimal Dubins tour from below,
//! UB is the cost of a feasible tour, and BP_heuristic is neither. Runtimes
//! are left empty unless requested, so reports are reproducible byte for
//! byte.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{etsp, lower_instance, upper_bound, HeadingPlacement, ProblemInstance, Strategy, HEURISTIC_SALT};
use crate::error::{Error, Result};
use crate::gtsp::{set_level_relaxation, solve_exact, solve_heuristic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "ETSP")]
    Etsp,
    #[serde(rename = "LB_exact")]
    LbExact,
    #[serde(rename = "LB_relaxed")]
    LbRelaxed,
    #[serde(rename = "BP_heuristic")]
    BpHeuristic,
    #[serde(rename = "UB")]
    Ub,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub n: usize,
    pub rho: f64,
    /// Intervals per target for lower bounds, headings per target for upper
    /// bounds, empty for the Euclidean baseline.
    pub m_or_k: Option<usize>,
    pub kind: Kind,
    pub value: f64,
    pub certified: bool,
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub m: usize,
    pub instances: usize,
    /// Mean of (LB − ETSP) / ETSP.
    pub mean_improvement: f64,
    /// Mean of (UB − LB) / LB.
    pub mean_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareOptions {
    pub m_list: Vec<usize>,
    pub k: usize,
    pub placement: HeadingPlacement,
    /// Forced strategy; by default exact up to the cap, relaxed beyond.
    pub strategy: Option<Strategy>,
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Batch {
    pub rows: Vec<ReportRow>,
    pub summary: Vec<SummaryRow>,
}

/// Runs every instance (in parallel) and assembles rows in instance-name
/// order.
pub fn compare(instances: &[ProblemInstance], opts: &CompareOptions) -> Result<Batch> {
    let mut names = BTreeSet::new();
    for inst in instances {
        if !names.insert(inst.name.as_str()) {
            return Err(Error::Invalid(format!("instance name {} appears twice in the batch", inst.name)));
        }
    }
    let mut per: Vec<(String, Vec<ReportRow>)> = instances
        .par_iter()
        .map(|inst| compare_one(inst, opts).map(|rows| (inst.name.clone(), rows)))
        .collect::<Result<_>>()?;
    per.sort_by(|a, b| a.0.cmp(&b.0));
    let rows: Vec<ReportRow> = per.into_iter().flat_map(|(_, r)| r).collect();
    let summary = summarize(&rows, opts);
    Ok(Batch { rows, summary })
}

fn compare_one(inst: &ProblemInstance, opts: &CompareOptions) -> Result<Vec<ReportRow>> {
    let row = |m_or_k, kind, value, certified, seconds: f64| ReportRow {
        instance: inst.name.clone(),
        n: inst.n(),
        rho: inst.rho.get(),
        m_or_k,
        kind,
        value,
        certified,
        seconds: opts.timings.then_some(seconds),
    };
    let mut rows = Vec::new();
    let e = etsp(inst)?;
    rows.push(row(None, Kind::Etsp, e.value, e.exact, e.seconds));
    let strategy = opts.strategy.unwrap_or(Strategy::auto(inst.n()));
    for &m in &opts.m_list {
        let clock = Instant::now();
        let gtsp = lower_instance(inst, m)?;
        let built = clock.elapsed().as_secs_f64();
        match strategy {
            Strategy::Exact => {
                let clock = Instant::now();
                let tour = solve_exact(&gtsp)?;
                rows.push(row(Some(m), Kind::LbExact, tour.cost, true, built + clock.elapsed().as_secs_f64()));
            }
            Strategy::Relaxed => {
                let clock = Instant::now();
                let tour = solve_heuristic(&gtsp, inst.seed ^ HEURISTIC_SALT);
                rows.push(row(Some(m), Kind::BpHeuristic, tour.cost, false, built + clock.elapsed().as_secs_f64()));
            }
        }
        let clock = Instant::now();
        let relaxed = set_level_relaxation(&gtsp)?;
        rows.push(row(Some(m), Kind::LbRelaxed, relaxed, true, built + clock.elapsed().as_secs_f64()));
    }
    let ub = upper_bound(inst, opts.k, opts.placement)?;
    rows.push(row(Some(opts.k), Kind::Ub, ub.value, true, ub.seconds));
    Ok(rows)
}

/// Best certified lower bound per (instance, m): exact if present, else the
/// relaxation.
fn certified_lb(rows: &[ReportRow], instance: &str, m: usize) -> Option<f64> {
    let find = |kind| {
        rows.iter()
            .find(|r| r.instance == instance && r.m_or_k == Some(m) && r.kind == kind)
            .map(|r| r.value)
    };
    find(Kind::LbExact).or_else(|| find(Kind::LbRelaxed))
}

fn summarize(rows: &[ReportRow], opts: &CompareOptions) -> Vec<SummaryRow> {
    let instances: Vec<&str> = rows.iter().filter(|r| r.kind == Kind::Etsp).map(|r| r.instance.as_str()).collect();
    opts.m_list
        .iter()
        .map(|&m| {
            let mut imp = 0.0;
            let mut gap = 0.0;
            for &name in &instances {
                let base = rows.iter().find(|r| r.instance == name && r.kind == Kind::Etsp).map(|r| r.value);
                let ub = rows.iter().find(|r| r.instance == name && r.kind == Kind::Ub).map(|r| r.value);
                let lb = certified_lb(rows, name, m);
                if let (Some(base), Some(ub), Some(lb)) = (base, ub, lb) {
                    imp += (lb - base) / base;
                    gap += (ub - lb) / lb;
                }
            }
            let count = instances.len();
            let mean = |s: f64| if count == 0 { f64::NAN } else { s / count as f64 };
            SummaryRow {
                m,
                instances: count,
                mean_improvement: mean(imp),
                mean_gap: mean(gap),
            }
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io {
            path: "<csv output>".into(),
            source: io,
        },
        other => Error::Invalid(format!("CSV serialization failed: {other:?}")),
    }
}

/// Writes rows (or just the header when there are none).
pub fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T], header: &[&str]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "<csv output>".into(),
        source: e,
    })
}

pub const ROW_HEADER: [&str; 8] = ["instance", "n", "rho", "m_or_k", "kind", "value", "certified", "seconds"];
pub const SUMMARY_HEADER: [&str; 4] = ["m", "instances", "mean_improvement", "mean_gap"];

pub fn report_csv(rows: &[ReportRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, rows, &ROW_HEADER)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub fn summary_csv(summary: &[SummaryRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, summary, &SUMMARY_HEADER)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

/// Human-readable summary table.
pub fn summary_text(summary: &[SummaryRow]) -> String {
    let mut s = String::from("     m  instances  LB vs ETSP  (UB-LB)/LB\n");
    for r in summary {
        s.push_str(&format!(
            "{:>6}  {:>9}  {:>9.3}%  {:>9.3}%\n",
            r.m,
            r.instances,
            100.0 * r.mean_improvement,
            100.0 * r.mean_gap
        ));
    }
    s
}

/// Parses a report written by [`report_csv`].
pub fn read_report(text: &str) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .collect::<std::result::Result<Vec<ReportRow>, _>>()
        .map_err(|e| Error::Parse {
            what: "report CSV".into(),
            reason: e.to_string(),
        })
}
