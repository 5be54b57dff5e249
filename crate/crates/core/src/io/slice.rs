//! Plain-text plane slices.
//!
//! `#` header lines carry the quantity, plane, time, parameters and both coordinate axes; the
//! body is one row per line with 17 significant digits, which round-trips every f64 exactly.
//! Gnuplot reads the body with `plot 'file' matrix with image`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grid::{Plane, ScalarSlice};

/// A slice plus the metadata written with it.
#[derive(Debug, Clone, PartialEq)]
pub struct TextSlice {
    pub quantity: String,
    pub time: f64,
    pub parameters: String,
    pub slice: ScalarSlice,
}

const AXES: [&str; 3] = ["x", "y", "z"];

fn row(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(" ")
}

pub fn export_slice(s: &TextSlice) -> String {
    let [r, c] = s.slice.plane.in_plane_axes();
    let mut out = String::new();
    writeln!(out, "# diracsim slice").unwrap();
    writeln!(out, "# quantity {}", s.quantity).unwrap();
    writeln!(out, "# plane {}", s.slice.plane).unwrap();
    writeln!(out, "# time {:.16e}", s.time).unwrap();
    writeln!(out, "# parameters {}", s.parameters).unwrap();
    writeln!(out, "# rows {} {}", AXES[r], s.slice.rows).unwrap();
    writeln!(out, "# cols {} {}", AXES[c], s.slice.cols).unwrap();
    writeln!(out, "# row_coords {}", row(&s.slice.row_coords)).unwrap();
    writeln!(out, "# col_coords {}", row(&s.slice.col_coords)).unwrap();
    for i in 0..s.slice.rows {
        out.push_str(&row(&s.slice.values[i * s.slice.cols..(i + 1) * s.slice.cols]));
        out.push('\n');
    }
    out
}

fn parse_reals(text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| Error::Format(format!("bad number `{t}`: {e}"))))
        .collect()
}

pub fn import_slice(text: &str) -> Result<TextSlice> {
    let mut quantity = None;
    let mut plane = None;
    let mut time = None;
    let mut parameters = String::new();
    let mut rows = None;
    let mut cols = None;
    let mut row_coords = None;
    let mut col_coords = None;
    let mut values = Vec::new();
    let mut body_rows = 0;
    for line in text.lines() {
        if let Some(h) = line.strip_prefix('#') {
            let h = h.trim();
            let (key, rest) = h.split_once(' ').unwrap_or((h, ""));
            match key {
                "quantity" => quantity = Some(rest.to_string()),
                "plane" => plane = Some(Plane::parse(rest).map_err(|e| Error::Format(e.to_string()))?),
                "time" => time = Some(parse_reals(rest)?.first().copied().ok_or_else(|| Error::Format("empty time".into()))?),
                "parameters" => parameters = rest.to_string(),
                "rows" | "cols" => {
                    let n = rest
                        .split_whitespace()
                        .nth(1)
                        .and_then(|v| v.parse::<usize>().ok())
                        .ok_or_else(|| Error::Format(format!("bad `{key}` header")))?;
                    if key == "rows" {
                        rows = Some(n)
                    } else {
                        cols = Some(n)
                    }
                }
                "row_coords" => row_coords = Some(parse_reals(rest)?),
                "col_coords" => col_coords = Some(parse_reals(rest)?),
                _ => {}
            }
        } else if !line.trim().is_empty() {
            values.extend(parse_reals(line)?);
            body_rows += 1;
        }
    }
    let missing = |what: &str| Error::Format(format!("slice header lacks `{what}`"));
    let (rows, cols) = (rows.ok_or_else(|| missing("rows"))?, cols.ok_or_else(|| missing("cols"))?);
    if body_rows != rows || values.len() != rows * cols {
        return Err(Error::Format(format!(
            "expected {rows}×{cols} values, found {} in {body_rows} rows",
            values.len()
        )));
    }
    let row_coords = row_coords.ok_or_else(|| missing("row_coords"))?;
    let col_coords = col_coords.ok_or_else(|| missing("col_coords"))?;
    if row_coords.len() != rows || col_coords.len() != cols {
        return Err(Error::Format("coordinate headers disagree with the matrix shape".into()));
    }
    Ok(TextSlice {
        quantity: quantity.ok_or_else(|| missing("quantity"))?,
        time: time.ok_or_else(|| missing("time"))?,
        parameters,
        slice: ScalarSlice {
            plane: plane.ok_or_else(|| missing("plane"))?,
            rows,
            cols,
            row_coords,
            col_coords,
            values,
        },
    })
}
