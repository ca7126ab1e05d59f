//! Instance files: TSPLIB explicit-weight TSPs and Ascheuer (rbg) TSPTWs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ldsolve_core::{Cost, CostMatrix, Instance, InstanceError, ProblemKind, TimeWindow};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported {field} `{value}`")]
    Unsupported {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: InstanceError },
    #[error("unrecognized instance format")]
    UnknownFormat,
}

impl ParseError {
    /// 1-based line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::Unsupported { line, .. }
            | ParseError::Invalid { line, .. } => Some(*line),
            ParseError::UnknownFormat => None,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsplib,
    Ascheuer,
}

/// Explicit weight layouts. Column variants list the same entries as the transposed row
/// variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WeightFormat {
    Full,
    UpperRow,
    LowerRow,
    UpperDiagRow,
    LowerDiagRow,
}

impl WeightFormat {
    fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "FULL_MATRIX" => WeightFormat::Full,
            "UPPER_ROW" | "LOWER_COL" => WeightFormat::UpperRow,
            "LOWER_ROW" | "UPPER_COL" => WeightFormat::LowerRow,
            "UPPER_DIAG_ROW" | "LOWER_DIAG_COL" => WeightFormat::UpperDiagRow,
            "LOWER_DIAG_ROW" | "UPPER_DIAG_COL" => WeightFormat::LowerDiagRow,
            _ => return None,
        })
    }

    /// Entries of row `i` in file order.
    fn row_cells(self, n: usize, i: usize) -> Vec<(usize, usize)> {
        let cols: Vec<usize> = match self {
            WeightFormat::Full => (0..n).collect(),
            WeightFormat::UpperRow => (i + 1..n).collect(),
            WeightFormat::LowerRow => (0..i).collect(),
            WeightFormat::UpperDiagRow => (i..n).collect(),
            WeightFormat::LowerDiagRow => (0..=i).collect(),
        };
        cols.into_iter().map(|j| (i, j)).collect()
    }

    fn symmetric(self) -> bool {
        self != WeightFormat::Full
    }
}

/// Integer tokens of the lines `[from, to)`, each with its 1-based line number.
fn int_tokens(
    lines: &[&str],
    from: usize,
    to: usize,
) -> Result<Vec<Vec<(usize, Cost)>>, ParseError> {
    let mut rows = Vec::new();
    for (idx, text) in lines.iter().enumerate().take(to).skip(from) {
        let line = idx + 1;
        let mut row = Vec::new();
        for tok in text.split_whitespace() {
            let v: Cost = tok
                .parse()
                .map_err(|_| syntax(line, format!("expected an integer, found `{tok}`")))?;
            row.push((line, v));
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    Ok(rows)
}

fn is_keyword_line(text: &str) -> bool {
    let t = text.trim_start();
    t.starts_with(|c: char| c.is_ascii_alphabetic())
}

/// Parses a TSPLIB file with explicit edge weights.
pub fn parse_tsplib(text: &str) -> Result<Instance, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut name = String::from("unnamed");
    let mut dimension: Option<(usize, usize)> = None;
    let mut format: Option<(WeightFormat, usize)> = None;
    let mut weight_type_seen = false;
    let mut section: Option<(usize, usize)> = None;

    let mut idx = 0;
    while idx < lines.len() {
        let raw = lines[idx].trim();
        let line = idx + 1;
        idx += 1;
        if raw.is_empty() {
            continue;
        }
        if raw == "EOF" {
            break;
        }
        let (key, value) = match raw.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (raw, ""),
        };
        match key {
            "NAME" => name = value.to_string(),
            "TYPE" => {
                if !matches!(value, "TSP" | "ATSP") {
                    return Err(ParseError::Unsupported {
                        line,
                        field: "TYPE",
                        value: value.into(),
                    });
                }
            }
            "COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" => {}
            "DIMENSION" => {
                let n = value
                    .parse()
                    .map_err(|_| syntax(line, format!("invalid DIMENSION `{value}`")))?;
                dimension = Some((n, line));
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EXPLICIT" {
                    return Err(ParseError::Unsupported {
                        line,
                        field: "EDGE_WEIGHT_TYPE",
                        value: value.into(),
                    });
                }
                weight_type_seen = true;
            }
            "EDGE_WEIGHT_FORMAT" => {
                let f =
                    WeightFormat::from_keyword(value).ok_or_else(|| ParseError::Unsupported {
                        line,
                        field: "EDGE_WEIGHT_FORMAT",
                        value: value.into(),
                    })?;
                format = Some((f, line));
            }
            "EDGE_WEIGHT_SECTION" => {
                let start = idx;
                while idx < lines.len() && !is_keyword_line(lines[idx]) {
                    idx += 1;
                }
                section = Some((start, idx));
            }
            "DISPLAY_DATA_SECTION" | "NODE_COORD_SECTION" | "FIXED_EDGES_SECTION" => {
                while idx < lines.len() && !is_keyword_line(lines[idx]) {
                    idx += 1;
                }
            }
            _ => return Err(syntax(line, format!("unknown keyword `{key}`"))),
        }
    }

    let (n, _) = dimension.ok_or_else(|| syntax(lines.len().max(1), "missing DIMENSION"))?;
    if !weight_type_seen {
        return Err(syntax(lines.len().max(1), "missing EDGE_WEIGHT_TYPE"));
    }
    let (format, _) =
        format.ok_or_else(|| syntax(lines.len().max(1), "missing EDGE_WEIGHT_FORMAT"))?;
    let (from, to) =
        section.ok_or_else(|| syntax(lines.len().max(1), "missing EDGE_WEIGHT_SECTION"))?;
    if n < 2 {
        return Err(ParseError::Invalid {
            line: dimension.unwrap().1,
            source: InstanceError::TooSmall(n),
        });
    }

    let rows = int_tokens(&lines, from, to)?;
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| format.row_cells(n, i)).collect();
    let found: usize = rows.iter().map(Vec::len).sum();
    if found != cells.len() {
        return Err(count_mismatch(&rows, format, n, cells.len(), found, to));
    }
    let mut cost = CostMatrix::filled(n, 0);
    for (&(i, j), &(line, v)) in cells.iter().zip(rows.iter().flatten()) {
        if v < 0 {
            return Err(ParseError::Invalid {
                line,
                source: InstanceError::NegativeCost {
                    from: i,
                    to: j,
                    cost: v,
                },
            });
        }
        cost[(i, j)] = v;
        if format.symmetric() {
            cost[(j, i)] = v;
        }
    }
    Instance::tsp(name, cost).map_err(|source| ParseError::Invalid { line: from, source })
}

/// Names the line at fault when the weight count is wrong: the first row of a
/// row-per-line layout with the wrong length, otherwise the first surplus entry or the
/// end of the section.
fn count_mismatch(
    rows: &[Vec<(usize, Cost)>],
    format: WeightFormat,
    n: usize,
    expected: usize,
    found: usize,
    section_end: usize,
) -> ParseError {
    let row_lengths: Vec<usize> = (0..n).map(|i| format.row_cells(n, i).len()).collect();
    let nonempty: Vec<usize> = row_lengths.iter().copied().filter(|&l| l > 0).collect();
    if rows.len() == nonempty.len() {
        if let Some((row, want)) = rows.iter().zip(&nonempty).find(|(r, &w)| r.len() != w) {
            return syntax(
                row[0].0,
                format!("expected {want} weights in this row, found {}", row.len()),
            );
        }
    }
    if found > expected {
        let line = rows
            .iter()
            .flatten()
            .nth(expected)
            .map_or(section_end, |t| t.0);
        return syntax(line, format!("expected {expected} weights, found {found}"));
    }
    let line = rows.last().map_or(section_end, |r| r[0].0);
    syntax(line, format!("expected {expected} weights, found {found}"))
}

/// Parses an Ascheuer TSPTW file: node count, `n x n` cost matrix, then one
/// `release deadline` line per node. Lines starting with `#` are ignored.
pub fn parse_ascheuer(text: &str, name: &str) -> Result<Instance, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut tokens = Vec::new();
    for (idx, raw) in lines.iter().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut on_line = Vec::new();
        for tok in body.split_whitespace() {
            let v: Cost = tok
                .parse()
                .map_err(|_| syntax(idx + 1, format!("expected an integer, found `{tok}`")))?;
            on_line.push(v);
        }
        if !on_line.is_empty() {
            tokens.push((idx + 1, on_line));
        }
    }
    let mut it = tokens.into_iter().peekable();
    let (count_line, first) = it.next().ok_or_else(|| syntax(1, "empty file"))?;
    if first.len() != 1 || first[0] < 2 {
        return Err(syntax(
            count_line,
            "first line must hold the node count (at least 2)",
        ));
    }
    let n = first[0] as usize;

    let mut cost = CostMatrix::filled(n, 0);
    let mut filled = 0;
    let mut last_line = count_line;
    while filled < n * n {
        let Some((line, values)) = it.next() else {
            return Err(syntax(
                last_line,
                format!("cost matrix has {filled} of {} entries", n * n),
            ));
        };
        last_line = line;
        if filled + values.len() > n * n {
            return Err(syntax(line, "cost matrix row runs into the time windows"));
        }
        for v in values {
            let (i, j) = (filled / n, filled % n);
            if v < 0 && i != j {
                return Err(ParseError::Invalid {
                    line,
                    source: InstanceError::NegativeCost {
                        from: i,
                        to: j,
                        cost: v,
                    },
                });
            }
            cost[(i, j)] = v;
            filled += 1;
        }
    }

    let mut windows = Vec::with_capacity(n);
    let mut window_lines = Vec::with_capacity(n);
    for (line, values) in it {
        if values.len() != 2 {
            return Err(syntax(
                line,
                format!("time window line needs 2 values, found {}", values.len()),
            ));
        }
        windows.push(TimeWindow::new(values[0], values[1]));
        window_lines.push(line);
        last_line = line;
    }
    if windows.len() != n {
        return Err(syntax(
            last_line,
            format!("expected {n} time windows, found {}", windows.len()),
        ));
    }
    Instance::tsptw(name, cost, windows).map_err(|source| {
        let line = match source {
            InstanceError::InvertedWindow { node, .. } => window_lines[node],
            _ => count_line,
        };
        ParseError::Invalid { line, source }
    })
}

/// Canonical TSPLIB text: `FULL_MATRIX` with a zero diagonal.
pub fn write_tsplib(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = String::new();
    let kind = if inst.cost().is_symmetric() {
        "TSP"
    } else {
        "ATSP"
    };
    let _ = writeln!(out, "NAME: {}", inst.name());
    let _ = writeln!(out, "TYPE: {kind}");
    let _ = writeln!(out, "DIMENSION: {n}");
    out.push_str(
        "EDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n",
    );
    write_matrix(&mut out, inst);
    out.push_str("EOF\n");
    out
}

/// Canonical Ascheuer text.
pub fn write_ascheuer(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", inst.n());
    write_matrix(&mut out, inst);
    for w in inst.windows().unwrap_or_default() {
        let _ = writeln!(out, "{} {}", w.release, w.deadline);
    }
    out
}

fn write_matrix(out: &mut String, inst: &Instance) {
    let n = inst.n();
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                if i == j {
                    "0".into()
                } else {
                    inst.arc(i, j).to_string()
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}

/// Writes `inst` in the format matching its kind.
pub fn write_instance(inst: &Instance) -> String {
    match inst.kind() {
        ProblemKind::Tsp => write_tsplib(inst),
        ProblemKind::Tsptw => write_ascheuer(inst),
    }
}

/// TSPLIB files open with a keyword; Ascheuer files with the node count.
pub fn sniff(text: &str) -> Option<Format> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())?;
    if first.starts_with(|c: char| c.is_ascii_alphabetic()) {
        Some(Format::Tsplib)
    } else if first.split_whitespace().count() == 1 && first.parse::<u64>().is_ok() {
        Some(Format::Ascheuer)
    } else {
        None
    }
}

/// Parses text of either format. `name` is used when the format carries none.
pub fn parse_instance(text: &str, name: &str) -> Result<Instance, ParseError> {
    match sniff(text) {
        Some(Format::Tsplib) => parse_tsplib(text),
        Some(Format::Ascheuer) => parse_ascheuer(text, name),
        None => Err(ParseError::UnknownFormat),
    }
}

/// Instance name for a path: the file stem.
pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_instance(path: &Path) -> Result<Instance, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, &instance_name(path)).map_err(|source| LoadError::Parse {
        path: path.to_path_buf(),
        source,
    })
}
