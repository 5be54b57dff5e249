//! In-place 3D FFT over row-major (x slowest, z fastest) complex arrays.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Unnormalized forward (e^{-i}) and inverse (e^{+i}) 3D transforms for one set of dimensions.
pub struct Fft3 {
    dims: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

impl Fft3 {
    pub fn new(dims: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let forward = dims.map(|n| planner.plan_fft_forward(n));
        let inverse = dims.map(|n| planner.plan_fft_inverse(n));
        Fft3 {
            dims,
            forward,
            inverse,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// Inverse transform without the 1/N factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>; 3]) {
        let [nx, ny, nz] = self.dims;
        assert_eq!(data.len(), nx * ny * nz, "buffer does not match FFT dimensions");
        let scratch_len = plans
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        let mut scratch = vec![Complex64::default(); scratch_len];

        // z: contiguous lines.
        plans[2].process_with_scratch(data, &mut scratch);

        // y: stride nz inside each x-slab.
        let mut line = vec![Complex64::default(); ny.max(nx)];
        for ix in 0..nx {
            let slab = &mut data[ix * ny * nz..(ix + 1) * ny * nz];
            for iz in 0..nz {
                for iy in 0..ny {
                    line[iy] = slab[iy * nz + iz];
                }
                plans[1].process_with_scratch(&mut line[..ny], &mut scratch);
                for iy in 0..ny {
                    slab[iy * nz + iz] = line[iy];
                }
            }
        }

        // x: stride ny*nz.
        let plane = ny * nz;
        for j in 0..plane {
            for ix in 0..nx {
                line[ix] = data[ix * plane + j];
            }
            plans[0].process_with_scratch(&mut line[..nx], &mut scratch);
            for ix in 0..nx {
                data[ix * plane + j] = line[ix];
            }
        }
    }
}

/// Angular wavenumbers of an FFT axis in standard order (0, 1, …, n/2−1, −n/2, …, −1) · 2π/(n h).
pub fn wavenumbers(n: usize, spacing: f64) -> Vec<f64> {
    let scale = 2.0 * std::f64::consts::PI / (n as f64 * spacing);
    (0..n)
        .map(|k| {
            let signed = if k < n.div_ceil(2) {
                k as i64
            } else {
                k as i64 - n as i64
            };
            signed as f64 * scale
        })
        .collect()
}
