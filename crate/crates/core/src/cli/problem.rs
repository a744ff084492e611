//! Versioned JSON problem files.
//!
//! ```text
//! {
//!   "format": "lpcut-problem",
//!   "version": 1,
//!   "vertex_count": 2,
//!   "grid": {"width": 2, "height": 1},
//!   "unaries": [
//!     [0.0,10.0],
//!     [10.0,0.0]
//!   ],
//!   "edges": [
//!     [0,1,[0.0,1.0,1.0,0.0]]
//!   ]
//! }
//! ```
//!
//! `grid` is optional and only affects how labelings are displayed. Numbers
//! are written in shortest round-trip form, so reading a written file gives
//! back the identical energy.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{EnergyError, EnergyFunction};

pub const FORMAT_TAG: &str = "lpcut-problem";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unrecognized format tag {0:?} (expected \"lpcut-problem\")")]
    FormatTag(String),
    #[error("unsupported problem file version {0} (this build reads version 1)")]
    Version(u32),
    #[error("vertex_count is {declared} but {listed} unary terms are listed")]
    VertexCount { declared: usize, listed: usize },
    #[error("grid {width}x{height} does not cover {vertex_count} vertices")]
    GridShape {
        width: usize,
        height: usize,
        vertex_count: usize,
    },
    #[error("invalid problem: {0}")]
    Invalid(#[from] EnergyError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    format: String,
    version: u32,
    vertex_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<GridShape>,
    unaries: Vec<[f64; 2]>,
    edges: Vec<(usize, usize, [f64; 4])>,
}

/// A parsed problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub energy: EnergyFunction,
    pub grid: Option<GridShape>,
}

impl Problem {
    pub fn new(energy: EnergyFunction) -> Self {
        Problem { energy, grid: None }
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, ProblemError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| ProblemError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if file.format != FORMAT_TAG {
        return Err(ProblemError::FormatTag(file.format));
    }
    if file.version != FORMAT_VERSION {
        return Err(ProblemError::Version(file.version));
    }
    if file.vertex_count != file.unaries.len() {
        return Err(ProblemError::VertexCount {
            declared: file.vertex_count,
            listed: file.unaries.len(),
        });
    }
    if let Some(GridShape { width, height }) = file.grid {
        if width.checked_mul(height) != Some(file.vertex_count) {
            return Err(ProblemError::GridShape {
                width,
                height,
                vertex_count: file.vertex_count,
            });
        }
    }
    let unaries: Vec<(f64, f64)> = file.unaries.iter().map(|&[c0, c1]| (c0, c1)).collect();
    let energy = EnergyFunction::from_parts(&unaries, &file.edges)?;
    Ok(Problem {
        energy,
        grid: file.grid,
    })
}

pub fn read_problem(path: &Path) -> Result<Problem, ProblemError> {
    let text = std::fs::read_to_string(path).map_err(|source| ProblemError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem(&text)
}

fn row<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain numeric rows serialize")
}

/// Renders `problem` with one unary or edge per line.
pub fn format_problem(problem: &Problem) -> String {
    let e = &problem.energy;
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": \"{FORMAT_TAG}\",");
    let _ = writeln!(out, "  \"version\": {FORMAT_VERSION},");
    let _ = writeln!(out, "  \"vertex_count\": {},", e.vertex_count());
    if let Some(grid) = &problem.grid {
        let _ = writeln!(
            out,
            "  \"grid\": {{\"width\": {}, \"height\": {}}},",
            grid.width, grid.height
        );
    }
    let unaries: Vec<String> = e.unaries().iter().map(|u| row(&u.values())).collect();
    let edges: Vec<String> = e
        .edges()
        .map(|(i, j, t)| row(&(i, j, t.values())))
        .collect();
    write_list(&mut out, "unaries", &unaries, true);
    write_list(&mut out, "edges", &edges, false);
    out.push_str("}\n");
    out
}

fn write_list(out: &mut String, key: &str, rows: &[String], trailing_comma: bool) {
    let comma = if trailing_comma { "," } else { "" };
    if rows.is_empty() {
        let _ = writeln!(out, "  \"{key}\": []{comma}");
        return;
    }
    let _ = writeln!(out, "  \"{key}\": [");
    for (k, r) in rows.iter().enumerate() {
        let sep = if k + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "    {r}{sep}");
    }
    let _ = writeln!(out, "  ]{comma}");
}

pub fn write_problem(path: &Path, problem: &Problem) -> std::io::Result<()> {
    std::fs::write(path, format_problem(problem))
}
