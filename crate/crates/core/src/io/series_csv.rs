//! CSV time series: time, V̄_x, V̄_y, V̄_z, Σ̄_x, Σ̄_y, Σ̄_z, norm.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub time: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub norm: f64,
}

impl SeriesRow {
    pub fn new(time: f64, v: [f64; 3], s: [f64; 3], norm: f64) -> Self {
        SeriesRow {
            time,
            vx: v[0],
            vy: v[1],
            vz: v[2],
            sx: s[0],
            sy: s[1],
            sz: s[2],
            norm,
        }
    }

    pub fn velocity(&self) -> [f64; 3] {
        [self.vx, self.vy, self.vz]
    }

    pub fn spin(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_series(w: impl std::io::Write, rows: &[SeriesRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["time", "vx", "vy", "vz", "sx", "sy", "sz", "norm"]).map_err(csv_err)?;
    for r in rows {
        let rec = [r.time, r.vx, r.vy, r.vz, r.sx, r.sy, r.sz, r.norm].map(|v| format!("{v:.16e}"));
        wr.write_record(&rec).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_series(r: impl std::io::Read) -> Result<Vec<SeriesRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

pub fn write_series_file(path: &Path, rows: &[SeriesRow]) -> Result<()> {
    write_series(std::fs::File::create(path)?, rows)
}

pub fn read_series_file(path: &Path) -> Result<Vec<SeriesRow>> {
    read_series(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rows = vec![
            SeriesRow::new(0.0, [0.0, 0.0, 1.0], [0.0, 0.0, 1.0], 1.0),
            SeriesRow::new(0.1, [1e-17, -0.3, 0.987654321], [0.1, 0.2, 1.0 / 3.0], 0.9999999999),
        ];
        let mut buf = Vec::new();
        write_series(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("time,vx,vy,vz,sx,sy,sz,norm\n"));
        assert_eq!(read_series(buf.as_slice()).unwrap(), rows);
    }
}
