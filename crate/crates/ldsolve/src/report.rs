//! Result records and their CSV, JSON and plain renderings.

use std::io::{self, Write};

use ldsolve_core::{Cost, SolveOutcome, SolveStatus};
use serde::Serialize;

use crate::config::OutputFormat;

pub const CSV_HEADER: [&str; 9] = [
    "instance",
    "n",
    "ratio",
    "size",
    "objective",
    "opt",
    "pr",
    "fails",
    "time_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    FirstSubproblem,
    TimeLimit,
    Infeasible,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::FirstSubproblem => "first_subproblem",
            Status::TimeLimit => "time_limit",
            Status::Infeasible => "infeasible",
            Status::Error => "error",
        }
    }
}

/// One solved (or failed) instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub instance: String,
    pub n: Option<usize>,
    pub ratio: Option<f64>,
    /// Mean relative size of the level-0 subproblem.
    pub size: Option<f64>,
    pub objective: Option<Cost>,
    /// Level at which the returned tour was found.
    pub opt: Option<usize>,
    /// Level at which optimality was proved.
    pub pr: Option<usize>,
    pub fails: Option<u64>,
    pub nodes: Option<u64>,
    pub root_bound: Option<Cost>,
    pub time_ms: Option<u128>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn from_outcome(instance: &str, n: usize, ratio: f64, outcome: &SolveOutcome) -> Self {
        let s = &outcome.stats;
        let status = match outcome.status {
            SolveStatus::Optimal if outcome.tour.is_none() => Status::Infeasible,
            SolveStatus::Optimal => Status::Optimal,
            SolveStatus::FirstSubproblem => Status::FirstSubproblem,
            SolveStatus::TimeLimit => Status::TimeLimit,
            SolveStatus::Infeasible => Status::Infeasible,
        };
        Self {
            instance: instance.to_string(),
            n: Some(n),
            ratio: Some(ratio),
            size: Some(s.first_subproblem_size),
            objective: outcome.tour.as_ref().map(|t| t.cost()),
            opt: s.opt_discrepancy,
            pr: s.proof_discrepancy,
            fails: Some(s.fails),
            nodes: Some(s.nodes),
            root_bound: Some(s.root_bound).filter(|&b| b < ldsolve_core::SENTINEL),
            time_ms: Some(s.elapsed.as_millis()),
            status,
            route: None,
            error: None,
        }
    }

    pub fn failed(instance: &str, error: impl Into<String>) -> Self {
        Self {
            instance: instance.to_string(),
            n: None,
            ratio: None,
            size: None,
            objective: None,
            opt: None,
            pr: None,
            fails: None,
            nodes: None,
            root_bound: None,
            time_ms: None,
            status: Status::Error,
            route: None,
            error: Some(error.into()),
        }
    }

    fn csv_row(&self) -> [String; 9] {
        let objective = match (self.objective, self.status) {
            (Some(v), _) => v.to_string(),
            (None, Status::Infeasible) => "infeasible".into(),
            (None, Status::Error) => "error".into(),
            (None, _) => String::new(),
        };
        [
            self.instance.clone(),
            opt(self.n),
            opt(self.ratio),
            self.size.map(|s| format!("{s:.3}")).unwrap_or_default(),
            objective,
            opt(self.opt),
            opt(self.pr),
            opt(self.fails),
            opt(self.time_ms),
        ]
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Column means over the records that produced a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Average {
    pub instances: usize,
    pub ratio: Option<f64>,
    pub size: f64,
    pub opt: Option<f64>,
    pub pr: Option<f64>,
    pub fails: f64,
    pub time_ms: f64,
}

impl Average {
    fn csv_row(&self) -> [String; 9] {
        let two = |v: Option<f64>| v.map(|v| format!("{v:.2}")).unwrap_or_default();
        [
            "average".into(),
            String::new(),
            opt(self.ratio),
            format!("{:.3}", self.size),
            String::new(),
            two(self.opt),
            two(self.pr),
            format!("{:.1}", self.fails),
            format!("{:.0}", self.time_ms),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn average(&self) -> Option<Average> {
        let solved: Vec<&Record> = self
            .records
            .iter()
            .filter(|r| r.status != Status::Error)
            .collect();
        if solved.is_empty() {
            return None;
        }
        let mean = |vals: Vec<f64>| {
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
        };
        let ratio = solved[0]
            .ratio
            .filter(|&r| solved.iter().all(|s| s.ratio == Some(r)));
        Some(Average {
            instances: solved.len(),
            ratio,
            size: mean(solved.iter().filter_map(|r| r.size).collect()).unwrap_or(0.0),
            opt: mean(
                solved
                    .iter()
                    .filter_map(|r| r.opt.map(|v| v as f64))
                    .collect(),
            ),
            pr: mean(
                solved
                    .iter()
                    .filter_map(|r| r.pr.map(|v| v as f64))
                    .collect(),
            ),
            fails: mean(
                solved
                    .iter()
                    .filter_map(|r| r.fails.map(|v| v as f64))
                    .collect(),
            )
            .unwrap_or(0.0),
            time_ms: mean(
                solved
                    .iter()
                    .filter_map(|r| r.time_ms.map(|v| v as f64))
                    .collect(),
            )
            .unwrap_or(0.0),
        })
    }

    pub fn write(&self, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => {
                #[derive(Serialize)]
                struct Doc<'a> {
                    records: &'a [Record],
                    average: Option<Average>,
                }
                let doc = Doc {
                    records: &self.records,
                    average: self.average(),
                };
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            OutputFormat::Plain => self.write_plain(out),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.records {
            w.write_record(r.csv_row())?;
        }
        if let Some(avg) = self.average() {
            w.write_record(avg.csv_row())?;
        }
        w.flush()
    }

    fn write_plain(&self, out: &mut dyn Write) -> io::Result<()> {
        let rows: Vec<[String; 9]> = self
            .records
            .iter()
            .map(Record::csv_row)
            .chain(self.average().map(|a| a.csv_row()))
            .collect();
        let mut widths = CSV_HEADER.map(str::len);
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[&str]| -> String {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        writeln!(out, "{}", line(&CSV_HEADER))?;
        for row in &rows {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            writeln!(out, "{}", line(&cells))?;
        }
        for r in self.records.iter().filter(|r| r.error.is_some()) {
            writeln!(
                out,
                "{}: {}",
                r.instance,
                r.error.as_deref().unwrap_or_default()
            )?;
        }
        Ok(())
    }
}

/// Key/value listing of a single record.
pub fn write_single(record: &Record, format: OutputFormat, out: &mut dyn Write) -> io::Result<()> {
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, record)?;
            writeln!(out)
        }
        OutputFormat::Csv => Report {
            records: vec![record.clone()],
        }
        .write_csv(out),
        OutputFormat::Plain => {
            let kv = [
                ("instance", record.instance.clone()),
                ("status", record.status.as_str().to_string()),
                ("n", opt(record.n)),
                ("objective", opt(record.objective)),
                ("root bound", opt(record.root_bound)),
                ("ratio", opt(record.ratio)),
                (
                    "size",
                    record.size.map(|s| format!("{s:.3}")).unwrap_or_default(),
                ),
                ("opt", opt(record.opt)),
                ("pr", opt(record.pr)),
                ("fails", opt(record.fails)),
                ("nodes", opt(record.nodes)),
                ("time_ms", opt(record.time_ms)),
            ];
            for (k, v) in kv {
                if !v.is_empty() {
                    writeln!(out, "{k:<11}{v}")?;
                }
            }
            if let Some(route) = &record.route {
                let r: Vec<String> = route.iter().map(ToString::to_string).collect();
                writeln!(out, "{:<11}{}", "route", r.join(" "))?;
            }
            if let Some(e) = &record.error {
                writeln!(out, "{:<11}{e}", "error")?;
            }
            Ok(())
        }
    }
}
