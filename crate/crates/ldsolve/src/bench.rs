//! Solving single instances and suites into report records.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ldsolve_core::discrepancy::analyze_root;
use ldsolve_core::model::Model;
use ldsolve_core::{solve, Instance, SolveError, SolveOutcome};

use crate::clock::WallClock;
use crate::config::SolveConfig;
use crate::instance_io::{instance_name, load_instance};
use crate::report::{Record, Report};

/// Solves `inst` under `config` with a fresh wall clock.
pub fn solve_instance(inst: &Instance, config: &SolveConfig) -> Result<SolveOutcome, SolveError> {
    let clock = WallClock::start(config.time_limit);
    solve(inst, &config.search_config(inst.kind()), &clock)
}

/// Record for one instance, including the route in visiting order.
pub fn solve_record(inst: &Instance, config: &SolveConfig) -> Result<Record, SolveError> {
    let outcome = solve_instance(inst, config)?;
    let mut record = Record::from_outcome(
        inst.name(),
        inst.n(),
        config.ratio_for(inst.kind()),
        &outcome,
    );
    if config.first_only {
        record.pr = None;
    }
    record.route = outcome
        .tour
        .as_ref()
        .map(|t| Model::new(inst).route(t.successors()));
    Ok(record)
}

/// Instance paths listed in a suite file, one per line, relative to the file. Blank lines
/// and `#` comments are skipped.
pub fn read_suite_list(path: &Path) -> io::Result<Vec<PathBuf>> {
    let text = fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| base.join(l))
        .collect())
}

/// Solves every file in order. A file that fails to load or solve becomes an error row.
pub fn run_suite(paths: &[PathBuf], config: &SolveConfig) -> Report {
    let mut report = Report::default();
    for path in paths {
        let name = instance_name(path);
        let record = match load_instance(path) {
            Err(e) => Record::failed(&name, e.to_string()),
            Ok(inst) => match solve_record(&inst, config) {
                Ok(mut r) => {
                    r.instance = name;
                    r.route = None;
                    r
                }
                Err(e) => Record::failed(&name, e.to_string()),
            },
        };
        report.records.push(record);
    }
    report
}

/// Root analysis summary used by `partition-report`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionSummary {
    pub instance: String,
    pub n: usize,
    pub ratio: f64,
    pub plain_bound: i64,
    pub root_bound: i64,
    pub cuts: usize,
    pub subgradient_iterations: usize,
    pub size: f64,
    pub good_sizes: Vec<usize>,
    pub domain_sizes: Vec<usize>,
    pub max_discrepancy: usize,
    /// Discrepancy bound of each level `0..=max_discrepancy`, rounded up.
    pub level_bounds: Vec<i64>,
    /// Cheapest bad reduced cost per level step, in costs rounded up.
    pub l_list: Vec<i64>,
}

pub fn partition_summary(
    inst: &Instance,
    config: &SolveConfig,
) -> Result<Option<PartitionSummary>, SolveError> {
    let search = config.search_config(inst.kind());
    let Some(root) = analyze_root(inst, &search)? else {
        return Ok(None);
    };
    let part = &root.partition;
    let n = inst.n();
    let scale = root.relaxation.scale();
    Ok(Some(PartitionSummary {
        instance: inst.name().to_string(),
        n,
        ratio: search.ratio,
        plain_bound: ldsolve_core::cost::ceil_div(root.relaxation.plain_bound(), scale),
        root_bound: root.relaxation.bound_ceil(),
        cuts: root.relaxation.cuts().len(),
        subgradient_iterations: root.relaxation.iterations(),
        size: part.relative_size(),
        good_sizes: (0..n).map(|i| part.good().len(i)).collect(),
        domain_sizes: (0..n).map(|i| root.store.domains().len(i)).collect(),
        max_discrepancy: part.max_discrepancy(),
        level_bounds: (0..=part.max_discrepancy())
            .map(|k| root.level_bound(k))
            .collect(),
        l_list: part.l_list()[..part.max_discrepancy()]
            .iter()
            .map(|&c| ldsolve_core::cost::ceil_div(c, scale))
            .collect(),
    }))
}
