//! Regular 3D lattices and the bispinor fields that live on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{wavenumbers, Fft3};
use crate::spinor::{Axis, Bispinor, Momentum3};

/// Node `(i, j, k)` sits at `origin + (i dx, j dy, k dz)`. Storage is x-slowest, z-fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositionGrid {
    pub n: [usize; 3],
    pub spacing: [f64; 3],
    pub origin: [f64; 3],
}

impl PositionGrid {
    pub fn new(n: [usize; 3], spacing: [f64; 3], origin: [f64; 3]) -> Result<Self> {
        if n.iter().any(|&v| v < 2) {
            return Err(Error::InvalidInput(format!(
                "grid needs at least 2 nodes per axis, got {n:?}"
            )));
        }
        if spacing.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "grid spacings must be positive, got {spacing:?}"
            )));
        }
        Ok(PositionGrid { n, spacing, origin })
    }

    /// Grid with node `n/2` at the origin along every axis.
    pub fn centered(n: [usize; 3], spacing: [f64; 3]) -> Result<Self> {
        let origin = std::array::from_fn(|a| -((n[a] / 2) as f64) * spacing[a]);
        Self::new(n, spacing, origin)
    }

    pub fn cubic(n: usize, h: f64) -> Result<Self> {
        Self::centered([n; 3], [h; 3])
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + k
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.n[2];
        let j = (idx / self.n[2]) % self.n[1];
        let i = idx / (self.n[1] * self.n[2]);
        [i, j, k]
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.spacing[axis]
    }

    pub fn position(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        std::array::from_fn(|a| self.coord(a, ijk[a]))
    }

    pub fn extent(&self) -> [f64; 3] {
        std::array::from_fn(|a| self.n[a] as f64 * self.spacing[a])
    }

    /// Node index nearest to coordinate `x` on `axis`, if inside the grid.
    pub fn nearest_index(&self, axis: usize, x: f64) -> Option<usize> {
        let f = (x - self.origin[axis]) / self.spacing[axis];
        let i = f.round();
        if i < 0.0 || i > (self.n[axis] - 1) as f64 || (f - i).abs() > 1e-6 {
            return None;
        }
        Some(i as usize)
    }

    /// Mirror partner of node `i` under x_a → −x_a, if it lies on the grid.
    pub fn mirror_index(&self, axis: usize, i: usize) -> Option<usize> {
        self.nearest_index(axis, -self.coord(axis, i))
    }

    pub fn is_uniform(&self) -> bool {
        let h = self.spacing[0];
        self.spacing.iter().all(|&s| (s - h).abs() <= 1e-12 * h)
    }

    pub fn is_power_of_two(&self) -> bool {
        self.n.iter().all(|v| v.is_power_of_two())
    }

    /// Angular wavenumbers per axis in FFT order.
    pub fn wavenumbers(&self) -> [Vec<f64>; 3] {
        std::array::from_fn(|a| wavenumbers(self.n[a], self.spacing[a]))
    }

    /// Volume element of the dual momentum lattice.
    pub fn momentum_cell_volume(&self) -> f64 {
        (0..3)
            .map(|a| 2.0 * PI / (self.n[a] as f64 * self.spacing[a]))
            .product()
    }
}

/// A bispinor per node plus a time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct BispinorField {
    pub grid: PositionGrid,
    pub time: f64,
    pub data: Vec<Bispinor>,
}

impl BispinorField {
    pub fn zeros(grid: PositionGrid, time: f64) -> Self {
        BispinorField {
            grid,
            time,
            data: vec![Bispinor::ZERO; grid.len()],
        }
    }

    pub fn from_fn(grid: PositionGrid, time: f64, f: impl Fn([f64; 3]) -> Bispinor) -> Self {
        let data = (0..grid.len()).map(|idx| f(grid.position(idx))).collect();
        BispinorField { grid, time, data }
    }

    /// Σ|Ψ|² times the cell volume.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> &Bispinor {
        &self.data[self.grid.index(i, j, k)]
    }

    /// ‖a − b‖ over the grid (same quadrature weight as the norm).
    pub fn l2_distance(&self, other: &BispinorField) -> f64 {
        assert_eq!(self.grid.n, other.grid.n);
        let s: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm_sqr())
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    /// Fraction of the norm sitting in the outermost `layers` node layers.
    pub fn boundary_mass(&self, layers: usize) -> f64 {
        let n = self.grid.n;
        let edge = |i: usize, a: usize| i < layers || i + layers >= n[a];
        let mut outer = 0.0;
        for (idx, s) in self.data.iter().enumerate() {
            let [i, j, k] = self.grid.unravel(idx);
            if edge(i, 0) || edge(j, 1) || edge(k, 2) {
                outer += s.norm_sqr();
            }
        }
        let total: f64 = self.data.iter().map(|s| s.norm_sqr()).sum();
        if total == 0.0 {
            0.0
        } else {
            outer / total
        }
    }

    pub fn component(&self, c: usize) -> Vec<Complex64> {
        self.data.iter().map(|s| s.0[c]).collect()
    }

    pub fn set_component(&mut self, c: usize, values: &[Complex64]) {
        for (s, v) in self.data.iter_mut().zip(values) {
            s.0[c] = *v;
        }
    }

    /// Transform to the continuum-normalized momentum representation,
    /// Ψ(p) = (2π)^{-3/2} ∫ e^{-ip·r} Ψ(r) d³r, sampled on the dual FFT lattice.
    pub fn to_momentum(&self) -> MomentumField {
        let fft = Fft3::new(self.grid.n);
        self.to_momentum_with(&fft)
    }

    pub fn to_momentum_with(&self, fft: &Fft3) -> MomentumField {
        let grid = self.grid;
        let ks = grid.wavenumbers();
        let scale = grid.cell_volume() / (2.0 * PI).powf(1.5);
        let mut out = BispinorField::zeros(grid, self.time);
        for c in 0..4 {
            let mut buf = self.component(c);
            fft.forward(&mut buf);
            out.set_component(c, &buf);
        }
        let data = out
            .data
            .into_iter()
            .enumerate()
            .map(|(idx, s)| {
                let [i, j, k] = grid.unravel(idx);
                let phase = -(ks[0][i] * grid.origin[0]
                    + ks[1][j] * grid.origin[1]
                    + ks[2][k] * grid.origin[2]);
                s * (Complex64::from_polar(1.0, phase) * scale)
            })
            .collect();
        MomentumField {
            grid,
            time: self.time,
            data,
        }
    }
}

/// Momentum-space samples Ψ(p_k) on the lattice dual to `grid`, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumField {
    pub grid: PositionGrid,
    pub time: f64,
    pub data: Vec<Bispinor>,
}

impl MomentumField {
    pub fn momentum(&self, idx: usize) -> Momentum3 {
        momentum_at(&self.grid, &self.grid.wavenumbers(), idx)
    }

    /// Σ|Ψ(p)|² Δ³p; equals the position-space norm by Parseval.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|s| s.norm_sqr()).sum::<f64>() * self.grid.momentum_cell_volume()
    }

    /// Fraction of the norm on the Nyquist planes (index n/2 of any even axis).
    pub fn nyquist_mass(&self) -> f64 {
        let n = self.grid.n;
        let mut edge = 0.0;
        let mut total = 0.0;
        for (idx, s) in self.data.iter().enumerate() {
            let ijk = self.grid.unravel(idx);
            let w = s.norm_sqr();
            total += w;
            if (0..3).any(|a| n[a] % 2 == 0 && ijk[a] == n[a] / 2) {
                edge += w;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            edge / total
        }
    }

    pub fn to_position(&self) -> BispinorField {
        let fft = Fft3::new(self.grid.n);
        self.to_position_with(&fft)
    }

    pub fn to_position_with(&self, fft: &Fft3) -> BispinorField {
        let grid = self.grid;
        let ks = grid.wavenumbers();
        let scale = grid.momentum_cell_volume() / (2.0 * PI).powf(1.5);
        let mut staged = BispinorField::zeros(grid, self.time);
        for (idx, (dst, src)) in staged.data.iter_mut().zip(&self.data).enumerate() {
            let [i, j, k] = grid.unravel(idx);
            let phase = ks[0][i] * grid.origin[0]
                + ks[1][j] * grid.origin[1]
                + ks[2][k] * grid.origin[2];
            *dst = *src * (Complex64::from_polar(1.0, phase) * scale);
        }
        for c in 0..4 {
            let mut buf = staged.component(c);
            fft.inverse(&mut buf);
            staged.set_component(c, &buf);
        }
        staged
    }
}

pub(crate) fn momentum_at(grid: &PositionGrid, ks: &[Vec<f64>; 3], idx: usize) -> Momentum3 {
    let [i, j, k] = grid.unravel(idx);
    Momentum3([ks[0][i], ks[1][j], ks[2][k]])
}

/// Axis-aligned plane through the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    /// Axis held fixed.
    pub normal: Axis,
    /// Coordinate of the plane along `normal`.
    pub value: f64,
}

impl Plane {
    pub fn new(normal: Axis, value: f64) -> Self {
        Plane { normal, value }
    }

    /// Parses `"z=0"`, `"y=-1.5"` and so on.
    pub fn parse(text: &str) -> Result<Self> {
        let (axis, value) = text
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("plane `{text}` is not of the form axis=value")))?;
        let normal = match axis.trim() {
            "x" => Axis::X,
            "y" => Axis::Y,
            "z" => Axis::Z,
            other => return Err(Error::InvalidInput(format!("unknown plane axis `{other}`"))),
        };
        let value = value
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::InvalidInput(format!("plane `{text}`: {e}")))?;
        Ok(Plane { normal, value })
    }

    /// The two in-plane axes in increasing order.
    pub fn in_plane_axes(&self) -> [usize; 2] {
        match self.normal {
            Axis::X => [1, 2],
            Axis::Y => [0, 2],
            Axis::Z => [0, 1],
        }
    }
}

impl std::fmt::Display for Plane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = match self.normal {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        write!(f, "{a}={}", self.value)
    }
}

/// Real scalar samples on a plane: `values[row * cols + col]`, rows along the first in-plane axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSlice {
    pub plane: Plane,
    pub rows: usize,
    pub cols: usize,
    pub row_coords: Vec<f64>,
    pub col_coords: Vec<f64>,
    pub values: Vec<f64>,
}

/// Extracts a plane of per-node scalars.
pub fn slice_scalar(grid: &PositionGrid, values: &[f64], plane: Plane) -> Result<ScalarSlice> {
    let a = plane.normal.index();
    let fixed = grid.nearest_index(a, plane.value).ok_or_else(|| {
        Error::InvalidInput(format!(
            "plane {plane} does not coincide with a grid plane (range {:.4} .. {:.4})",
            grid.coord(a, 0),
            grid.coord(a, grid.n[a] - 1)
        ))
    })?;
    let [r, c] = plane.in_plane_axes();
    let mut out = Vec::with_capacity(grid.n[r] * grid.n[c]);
    for i in 0..grid.n[r] {
        for j in 0..grid.n[c] {
            let mut ijk = [0; 3];
            ijk[a] = fixed;
            ijk[r] = i;
            ijk[c] = j;
            out.push(values[grid.index(ijk[0], ijk[1], ijk[2])]);
        }
    }
    Ok(ScalarSlice {
        plane,
        rows: grid.n[r],
        cols: grid.n[c],
        row_coords: (0..grid.n[r]).map(|i| grid.coord(r, i)).collect(),
        col_coords: (0..grid.n[c]).map(|j| grid.coord(c, j)).collect(),
        values: out,
    })
}
