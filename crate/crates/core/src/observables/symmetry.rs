//! Discrete symmetry operations and the metrics used to check their conservation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Fft3;
use crate::grid::{BispinorField, PositionGrid};
use crate::spectral::SpectralEngine;
use crate::spinor::{apply_matrix, Bispinor, DiracMatrix};

/// Number of rotation angles sampled by the axial metrics.
pub const AXIAL_ANGLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryKind {
    /// Rotation about the z axis.
    Axial,
    /// z → −z.
    ZParity,
    /// (x, y) → (−x, −y).
    XyParity,
}

/// max |ρ − Tρ| / max ρ over the nodes where Tρ is available.
pub fn symmetry_metrics(grid: &PositionGrid, density: &[f64], which: SymmetryKind) -> f64 {
    let peak = density.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let dev = match which {
        SymmetryKind::ZParity => mirror_deviation(grid, density, &[2]),
        SymmetryKind::XyParity => mirror_deviation(grid, density, &[0, 1]),
        SymmetryKind::Axial => axial_deviation(grid, density),
    };
    dev / peak
}

fn mirror_deviation(grid: &PositionGrid, density: &[f64], axes: &[usize]) -> f64 {
    (0..grid.len())
        .into_par_iter()
        .filter_map(|idx| {
            let mut ijk = grid.unravel(idx);
            for &a in axes {
                ijk[a] = grid.mirror_index(a, ijk[a])?;
            }
            Some((density[idx] - density[grid.index(ijk[0], ijk[1], ijk[2])]).abs())
        })
        .reduce(|| 0.0, f64::max)
}

/// Bilinear sample of one z-plane at (x, y); `None` outside the grid.
fn bilinear(grid: &PositionGrid, density: &[f64], k: usize, x: f64, y: f64) -> Option<f64> {
    let fx = (x - grid.origin[0]) / grid.spacing[0];
    let fy = (y - grid.origin[1]) / grid.spacing[1];
    if fx < 0.0 || fy < 0.0 {
        return None;
    }
    let (i, j) = (fx.floor() as usize, fy.floor() as usize);
    if i + 1 >= grid.n[0] || j + 1 >= grid.n[1] {
        return None;
    }
    let (u, v) = (fx - i as f64, fy - j as f64);
    let at = |a: usize, b: usize| density[grid.index(a, b, k)];
    Some(
        (1.0 - u) * (1.0 - v) * at(i, j)
            + u * (1.0 - v) * at(i + 1, j)
            + (1.0 - u) * v * at(i, j + 1)
            + u * v * at(i + 1, j + 1),
    )
}

fn axial_deviation(grid: &PositionGrid, density: &[f64]) -> f64 {
    let ext = grid.extent();
    let half = |a: usize| {
        let lo = grid.origin[a];
        let hi = lo + ext[a];
        lo.abs().min(hi.abs())
    };
    let radius = half(0).min(half(1)) - grid.spacing[0].max(grid.spacing[1]);
    let angles: Vec<(f64, f64)> = (1..AXIAL_ANGLES)
        .map(|k| (2.0 * PI * k as f64 / AXIAL_ANGLES as f64).sin_cos())
        .collect();
    (0..grid.len())
        .into_par_iter()
        .filter_map(|idx| {
            let r = grid.position(idx);
            if r[0].hypot(r[1]) > radius {
                return None;
            }
            let k = grid.unravel(idx)[2];
            let worst = angles
                .iter()
                .filter_map(|&(s, c)| bilinear(grid, density, k, c * r[0] - s * r[1], s * r[0] + c * r[1]))
                .map(|v| (v - density[idx]).abs())
                .fold(0.0, f64::max);
            Some(worst)
        })
        .reduce(|| 0.0, f64::max)
}

/// Axial metric of the spectral solution at time `t`, evaluated exactly between nodes.
///
/// On each listed z-plane the density is sampled at radii 0, h, 2h, … along the x axis and at
/// [`AXIAL_ANGLES`] rotations of those points; the metric is the largest spread over angles at one
/// radius, divided by the largest density seen.
pub fn axial_metric_spectral(engine: &SpectralEngine, t: f64, planes: &[usize]) -> f64 {
    let grid = engine.grid;
    let h = grid.spacing[0].min(grid.spacing[1]);
    let ext = grid.extent();
    let rmax = (ext[0].min(ext[1])) / 2.0 - grid.spacing[0].max(grid.spacing[1]);
    let nr = (rmax / h).floor() as usize;
    let mut spread = 0.0f64;
    let mut peak = 0.0f64;
    for &k in planes {
        let interp = engine.plane_interpolant(t, k);
        let rows: Vec<(f64, f64)> = (0..=nr)
            .into_par_iter()
            .map(|ir| {
                let r = ir as f64 * h;
                let vals: Vec<f64> = (0..AXIAL_ANGLES)
                    .map(|a| {
                        let (s, c) = (2.0 * PI * a as f64 / AXIAL_ANGLES as f64).sin_cos();
                        interp.eval(c * r, s * r).norm_sqr()
                    })
                    .collect();
                let hi = vals.iter().copied().fold(f64::MIN, f64::max);
                let lo = vals.iter().copied().fold(f64::MAX, f64::min);
                (hi - lo, hi)
            })
            .collect();
        for (d, hi) in rows {
            spread = spread.max(d);
            peak = peak.max(hi);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        spread / peak
    }
}

/// z-plane indices whose peak density is at least `fraction` of the global peak.
pub fn significant_planes(grid: &PositionGrid, density: &[f64], fraction: f64) -> Vec<usize> {
    let nz = grid.n[2];
    let mut plane_max = vec![0.0f64; nz];
    for (idx, &d) in density.iter().enumerate() {
        let k = idx % nz;
        plane_max[k] = plane_max[k].max(d);
    }
    let peak = plane_max.iter().copied().fold(0.0, f64::max);
    (0..nz).filter(|&k| plane_max[k] >= fraction * peak).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscreteSymmetry {
    /// βR: Ψ′(r) = βΨ(−r).
    P,
    /// Σ_z R_x R_y.
    Pxy,
    /// Σ_x β R_x.
    Px,
    /// Σ_y β R_y.
    Py,
    /// Σ_z β R_z.
    Pz,
    /// Ψ′(x, y, z) = α_x Ψ*(x, y, −z).
    AntiunitaryZ,
}

impl DiscreteSymmetry {
    pub const ALL: [DiscreteSymmetry; 6] = [
        DiscreteSymmetry::P,
        DiscreteSymmetry::Pxy,
        DiscreteSymmetry::Px,
        DiscreteSymmetry::Py,
        DiscreteSymmetry::Pz,
        DiscreteSymmetry::AntiunitaryZ,
    ];

    /// Spinor matrix and reflected axes.
    fn parts(self) -> (DiracMatrix, &'static [usize]) {
        match self {
            DiscreteSymmetry::P => (DiracMatrix::BETA, &[0, 1, 2]),
            DiscreteSymmetry::Pxy => (DiracMatrix::SIGMA_Z, &[0, 1]),
            DiscreteSymmetry::Px => (DiracMatrix::SIGMA_X * DiracMatrix::BETA, &[0]),
            DiscreteSymmetry::Py => (DiracMatrix::SIGMA_Y * DiracMatrix::BETA, &[1]),
            DiscreteSymmetry::Pz => (DiracMatrix::SIGMA_Z * DiracMatrix::BETA, &[2]),
            DiscreteSymmetry::AntiunitaryZ => (DiracMatrix::ALPHA_X, &[2]),
        }
    }
}

/// Applies the operation node by node; nodes whose mirror image is off the grid become zero.
/// Every operation here squares to the identity (no extra phase).
pub fn apply_discrete_symmetry(field: &BispinorField, op: DiscreteSymmetry) -> BispinorField {
    let grid = field.grid;
    let (m, axes) = op.parts();
    let conj = op == DiscreteSymmetry::AntiunitaryZ;
    let data = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let mut ijk = grid.unravel(idx);
            for &a in axes {
                match grid.mirror_index(a, ijk[a]) {
                    Some(i) => ijk[a] = i,
                    None => return Bispinor::ZERO,
                }
            }
            let s = field.data[grid.index(ijk[0], ijk[1], ijk[2])];
            apply_matrix(&m, &if conj { s.conj() } else { s })
        })
        .collect();
    BispinorField {
        grid,
        time: field.time,
        data,
    }
}

/// ‖Î_z Ψ − jΨ‖ / ‖Ψ‖ with Î_z = −i(x∂_y − y∂_x) + Σ_z/2, derivatives taken spectrally.
pub fn angular_momentum_residual(field: &BispinorField, j: f64) -> Result<f64> {
    let norm = field.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput("zero field".into()));
    }
    let grid = field.grid;
    let fft = Fft3::new(grid.n);
    let ks = grid.wavenumbers();
    let scale = 1.0 / grid.len() as f64;
    let deriv = |values: &[Complex64], axis: usize| -> Vec<Complex64> {
        let mut buf = values.to_vec();
        fft.forward(&mut buf);
        for (idx, v) in buf.iter_mut().enumerate() {
            let k = ks[axis][grid.unravel(idx)[axis]];
            // The Nyquist mode has no odd derivative.
            let k = if 2 * grid.unravel(idx)[axis] == grid.n[axis] { 0.0 } else { k };
            *v *= Complex64::new(0.0, k * scale);
        }
        fft.inverse(&mut buf);
        buf
    };
    let mut out = field.data.clone();
    for c in 0..4 {
        let comp = field.component(c);
        let dx = deriv(&comp, 0);
        let dy = deriv(&comp, 1);
        let half_sz = if c % 2 == 0 { 0.5 } else { -0.5 };
        for idx in 0..grid.len() {
            let r = grid.position(idx);
            let lz = Complex64::new(0.0, -1.0) * (dy[idx] * r[0] - dx[idx] * r[1]);
            out[idx].0[c] = lz + comp[idx] * (half_sz - j);
        }
    }
    let res: f64 = out.iter().map(Bispinor::norm_sqr).sum::<f64>() * grid.cell_volume();
    Ok((res / norm).sqrt())
}
