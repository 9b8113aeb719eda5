//! File formats: CSV vertex lists, SVG polyline rendering, and the
//! flow trace record.
//!
//! CSV files carry one `x,y` header line and one vertex per row, 17
//! significant decimal digits each, so values survive a write-read round
//! trip bit for bit. Closure is implied: the first vertex is not repeated
//! at the end.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use elastica::{DiscreteCurve, Vec2};
use serde::Serialize;

use crate::CliError;

/// One row of `trace.jsonl`; field order is the serialized key order.
#[derive(Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub time: f64,
    pub energy: f64,
    pub length: f64,
    pub product: f64,
    pub lambda: f64,
    pub embedded: bool,
    pub circle_residual: f64,
}

/// Writes a vertex list as CSV with the `x,y` header.
pub fn write_csv(path: &Path, vertices: &[Vec2]) -> std::io::Result<()> {
    write_csv_to(BufWriter::new(File::create(path)?), vertices)
}

/// Like [`write_csv`], into an already-opened sink.
pub fn write_csv_to<W: Write>(mut out: W, vertices: &[Vec2]) -> std::io::Result<()> {
    writeln!(out, "x,y")?;
    for v in vertices {
        writeln!(out, "{:.16e},{:.16e}", v.x, v.y)?;
    }
    out.flush()
}

/// Reads a CSV vertex list back into a closed curve. The `x,y` header is
/// optional; every other non-empty line must be two decimal numbers
/// separated by a comma.
pub fn read_csv(path: &Path) -> Result<DiscreteCurve, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut vertices = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if index == 0 && line.eq_ignore_ascii_case("x,y") {
            continue;
        }
        let Some((a, b)) = line.split_once(',') else {
            return Err(parse_error(path, index, "expected two comma-separated values"));
        };
        let x = a.trim().parse::<f64>();
        let y = b.trim().parse::<f64>();
        match (x, y) {
            (Ok(x), Ok(y)) => vertices.push(Vec2::new(x, y)),
            _ => return Err(parse_error(path, index, "expected two decimal numbers")),
        }
    }
    DiscreteCurve::new(vertices).map_err(CliError::Core)
}

fn parse_error(path: &Path, index: usize, message: &str) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line: index + 1,
        message: message.to_string(),
    }
}

/// Renders the closed polyline as a standalone SVG, into an
/// already-opened sink. The y axis is flipped so the mathematical
/// orientation matches the rendered one.
pub fn write_svg_to<W: Write>(mut out: W, vertices: &[Vec2]) -> std::io::Result<()> {
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        min_x = min_x.min(v.x);
        max_x = max_x.max(v.x);
        min_y = min_y.min(v.y);
        max_y = max_y.max(v.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let pad = 0.05 * extent;
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        min_x - pad,
        -max_y - pad,
        (max_x - min_x) + 2.0 * pad,
        (max_y - min_y) + 2.0 * pad
    )?;
    write!(out, r#"  <polygon fill="none" stroke="black" stroke-width="{:.6}" points=""#, 0.004 * extent)?;
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            write!(out, " ")?;
        }
        write!(out, "{:.6},{:.6}", v.x, -v.y)?;
    }
    writeln!(out, r#""/>"#)?;
    writeln!(out, "</svg>")?;
    out.flush()
}
