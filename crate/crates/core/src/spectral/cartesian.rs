//! Plane-wave synthesis on a periodic Cartesian grid.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::Fft3;
use crate::grid::{momentum_at, BispinorField, MomentumField, PositionGrid};
use crate::packet::{initial_bispinor_field, PolarizedState};
use crate::spectral::mode::propagate;
use crate::spinor::Bispinor;

/// Largest tolerated fraction of the norm on the Nyquist planes.
pub const ALIASING_LIMIT: f64 = 1e-6;
/// Largest tolerated fraction of the norm in the outermost node layer.
pub const BOUNDARY_LIMIT: f64 = 1e-6;

/// Holds Ψ(p, 0) on the lattice dual to `grid` and evolves it mode by mode.
pub struct SpectralEngine {
    pub state: PolarizedState,
    pub grid: PositionGrid,
    fft: Fft3,
    initial: MomentumField,
    wavenumbers: [Vec<f64>; 3],
}

impl SpectralEngine {
    /// Samples the initial field, checks resolution, box size and aliasing, and transforms it.
    pub fn new(state: PolarizedState, grid: PositionGrid) -> Result<Self> {
        let field = initial_bispinor_field(&state, grid)?;
        let boundary = field.boundary_mass(1);
        if boundary > BOUNDARY_LIMIT {
            return Err(Error::BoundaryMass {
                mass: boundary,
                limit: BOUNDARY_LIMIT,
            });
        }
        Self::from_field(state, &field)
    }

    /// Starts from an already sampled Ψ(r, 0).
    pub fn from_field(state: PolarizedState, field: &BispinorField) -> Result<Self> {
        let fft = Fft3::new(field.grid.n);
        let initial = field.to_momentum_with(&fft);
        let mass = initial.nyquist_mass();
        if mass > ALIASING_LIMIT {
            return Err(Error::Aliasing {
                mass,
                limit: ALIASING_LIMIT,
            });
        }
        Ok(SpectralEngine {
            state,
            grid: field.grid,
            fft,
            wavenumbers: field.grid.wavenumbers(),
            initial,
        })
    }

    pub fn initial_momentum(&self) -> &MomentumField {
        &self.initial
    }

    /// Ψ(p, t) on the momentum lattice.
    pub fn momentum_at(&self, t: f64) -> MomentumField {
        let grid = self.grid;
        let ks = &self.wavenumbers;
        let data = self
            .initial
            .data
            .par_iter()
            .enumerate()
            .map(|(idx, s)| propagate(s, momentum_at(&grid, ks, idx), t))
            .collect();
        MomentumField { grid, time: t, data }
    }

    /// Ψ(r, t) on every grid node.
    pub fn synthesize(&self, t: f64) -> BispinorField {
        let mut field = self.momentum_at(t).to_position_with(&self.fft);
        field.time = t;
        field
    }

    /// As [`synthesize`](Self::synthesize), failing when the packet has reached the box edge.
    pub fn synthesize_checked(&self, t: f64) -> Result<BispinorField> {
        let field = self.synthesize(t);
        let mass = field.boundary_mass(1);
        if mass > BOUNDARY_LIMIT {
            return Err(Error::BoundaryMass {
                mass,
                limit: BOUNDARY_LIMIT,
            });
        }
        Ok(field)
    }

    /// Ψ(r, t) at an arbitrary point by direct summation over all modes (slow; for spot checks).
    pub fn evaluate(&self, r: [f64; 3], t: f64) -> Bispinor {
        let grid = self.grid;
        let ks = &self.wavenumbers;
        let scale = grid.momentum_cell_volume() / (2.0 * std::f64::consts::PI).powf(1.5);
        let sum = self
            .initial
            .data
            .par_chunks(grid.n[1] * grid.n[2])
            .enumerate()
            .map(|(i, slab)| {
                let mut acc = Bispinor::ZERO;
                for (off, s) in slab.iter().enumerate() {
                    let p = momentum_at(&grid, ks, i * slab.len() + off);
                    let phase = p.0[0] * r[0] + p.0[1] * r[1] + p.0[2] * r[2];
                    acc += propagate(s, p, t) * Complex64::from_polar(1.0, phase);
                }
                acc
            })
            .collect::<Vec<_>>();
        let mut total = Bispinor::ZERO;
        for s in sum {
            total += s;
        }
        total * scale
    }

    /// Band-limited interpolant of Ψ(·, ·, z, t) on the plane through grid node `kz`.
    pub fn plane_interpolant(&self, t: f64, kz: usize) -> PlaneInterpolant {
        let grid = self.grid;
        let [nx, ny, nz] = grid.n;
        let z = grid.coord(2, kz);
        let ks = &self.wavenumbers;
        let psi = self.momentum_at(t);
        let scale = grid.momentum_cell_volume() / (2.0 * std::f64::consts::PI).powf(1.5);
        let ez: Vec<Complex64> = ks[2].iter().map(|k| Complex64::from_polar(scale, k * z)).collect();
        let coeffs = psi
            .data
            .par_chunks(nz)
            .map(|line| {
                let mut acc = Bispinor::ZERO;
                for (s, e) in line.iter().zip(&ez) {
                    acc += *s * *e;
                }
                acc
            })
            .collect();
        PlaneInterpolant {
            n: [nx, ny],
            kx: ks[0].clone(),
            ky: ks[1].clone(),
            z,
            coeffs,
        }
    }
}

/// Σ_{kx,ky} c(kx, ky) e^{i(kx x + ky y)} for one z-plane; exact between nodes for the
/// discrete-mode solution.
#[derive(Debug, Clone)]
pub struct PlaneInterpolant {
    n: [usize; 2],
    kx: Vec<f64>,
    ky: Vec<f64>,
    pub z: f64,
    coeffs: Vec<Bispinor>,
}

impl PlaneInterpolant {
    pub fn eval(&self, x: f64, y: f64) -> Bispinor {
        let ey: Vec<Complex64> = self.ky.iter().map(|k| Complex64::from_polar(1.0, k * y)).collect();
        let mut total = Bispinor::ZERO;
        for (i, kx) in self.kx.iter().enumerate() {
            let row = &self.coeffs[i * self.n[1]..(i + 1) * self.n[1]];
            let mut acc = Bispinor::ZERO;
            for (c, e) in row.iter().zip(&ey) {
                acc += *c * *e;
            }
            total += acc * Complex64::from_polar(1.0, kx * x);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::GaussianPacket;
    use approx::assert_abs_diff_eq;

    fn engine(d: f64, delta: f64, k0: f64, n: [usize; 3], h: f64) -> SpectralEngine {
        let s = PolarizedState::example_i(GaussianPacket::new(d, delta, k0).unwrap());
        SpectralEngine::new(s, PositionGrid::centered(n, [h; 3]).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_at_zero_time() {
        let e = engine(1.0, 1.5, 0.5, [32, 32, 32], 0.5);
        let f0 = initial_bispinor_field(&e.state, e.grid).unwrap();
        let f = e.synthesize(0.0);
        assert!(f.l2_distance(&f0) / f0.norm().sqrt() < 1e-10);
    }

    #[test]
    fn norm_is_conserved() {
        let e = engine(1.0, 1.0, 0.0, [32, 32, 32], 0.5);
        for t in [0.0, 1.0, 3.3] {
            assert_abs_diff_eq!(e.momentum_at(t).norm(), e.initial_momentum().norm(), epsilon = 1e-12);
            assert_abs_diff_eq!(e.synthesize(t).norm(), e.initial_momentum().norm(), epsilon = 1e-12);
        }
    }

    #[test]
    fn point_and_plane_evaluation_match_nodes() {
        let e = engine(1.0, 1.0, 0.3, [24, 24, 24], 0.5);
        let f = e.synthesize(1.2);
        let idx = e.grid.index(13, 10, 12);
        let direct = e.evaluate(e.grid.position(idx), 1.2);
        assert!((direct - f.data[idx]).norm() < 1e-12);
        let plane = e.plane_interpolant(1.2, 12);
        let via_plane = plane.eval(e.grid.coord(0, 13), e.grid.coord(1, 10));
        assert!((via_plane - f.data[idx]).norm() < 1e-12);
        let off = [0.13, -0.41, plane.z];
        assert!((plane.eval(off[0], off[1]) - e.evaluate(off, 1.2)).norm() < 1e-12);
    }

    #[test]
    fn coarse_or_small_boxes_are_rejected() {
        let s = PolarizedState::example_i(GaussianPacket::new(1.0, 1.0, 0.0).unwrap());
        let small = PositionGrid::cubic(8, 0.5).unwrap();
        assert!(SpectralEngine::new(s, small).is_err());
        // Resolved on the nodes but with a carrier near the Nyquist wavenumber.
        let fast = PolarizedState::example_i(GaussianPacket::new(2.0, 2.0, 5.5).unwrap());
        let g = PositionGrid::cubic(32, 0.5).unwrap();
        assert!(matches!(SpectralEngine::new(fast, g), Err(Error::Aliasing { .. })));
    }
}
