//! Pointwise bilinears and grid moments.

use rayon::prelude::*;

use crate::grid::{BispinorField, MomentumField, PositionGrid};
use crate::spinor::Bispinor;

/// Σ_i |Ψ_i|² at every node.
pub fn probability_density(field: &BispinorField) -> Vec<f64> {
    field.data.par_iter().map(Bispinor::norm_sqr).collect()
}

/// Spin density components at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDensityField {
    pub grid: PositionGrid,
    pub time: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl SpinDensityField {
    pub fn component(&self, axis: usize) -> &[f64] {
        match axis {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }
}

/// ⟨ψ|Σ|ψ⟩ for one bispinor.
#[inline]
pub fn spin_bilinear(s: &Bispinor) -> [f64; 3] {
    let [a, b, c, d] = s.0;
    let m = a.conj() * b + c.conj() * d;
    [
        2.0 * m.re,
        2.0 * m.im,
        a.norm_sqr() - b.norm_sqr() + c.norm_sqr() - d.norm_sqr(),
    ]
}

/// ⟨ψ|α|ψ⟩ for one bispinor.
#[inline]
pub fn velocity_bilinear(s: &Bispinor) -> [f64; 3] {
    let [a, b, c, d] = s.0;
    let xy = a.conj() * d + b.conj() * c;
    let yz = a.conj() * d - b.conj() * c;
    let z = a.conj() * c - b.conj() * d;
    [2.0 * xy.re, 2.0 * yz.im, 2.0 * z.re]
}

pub fn spin_density(field: &BispinorField) -> SpinDensityField {
    let s: Vec<[f64; 3]> = field.data.par_iter().map(spin_bilinear).collect();
    SpinDensityField {
        grid: field.grid,
        time: field.time,
        x: s.iter().map(|v| v[0]).collect(),
        y: s.iter().map(|v| v[1]).collect(),
        z: s.iter().map(|v| v[2]).collect(),
    }
}

/// Σ over nodes of a per-node 3-vector times `weight`, reduced slab by slab in a fixed order.
fn moment(data: &[Bispinor], chunk: usize, weight: f64, f: impl Fn(usize, &Bispinor) -> [f64; 3] + Sync) -> [f64; 3] {
    let parts: Vec<[f64; 3]> = data
        .par_chunks(chunk)
        .enumerate()
        .map(|(c, slab)| {
            let mut acc = [0.0; 3];
            for (o, s) in slab.iter().enumerate() {
                let v = f(c * chunk + o, s);
                for a in 0..3 {
                    acc[a] += v[a];
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; 3];
    for p in parts {
        for a in 0..3 {
            total[a] += p[a];
        }
    }
    total.map(|v| v * weight)
}

fn slab(grid: &PositionGrid) -> usize {
    grid.n[1] * grid.n[2]
}

/// V̄ = ∫Ψ⁺(p) α Ψ(p) dp on the momentum lattice (units of c).
pub fn velocity_expectation_grid(field: &MomentumField) -> [f64; 3] {
    moment(&field.data, slab(&field.grid), field.grid.momentum_cell_volume(), |_, s| velocity_bilinear(s))
}

/// The same moment in position space; α is local so both representations agree.
pub fn velocity_expectation_position(field: &BispinorField) -> [f64; 3] {
    moment(&field.data, slab(&field.grid), field.grid.cell_volume(), |_, s| velocity_bilinear(s))
}

/// Σ̄ = ∫Ψ⁺ Σ Ψ d³r.
pub fn spin_expectation(field: &BispinorField) -> [f64; 3] {
    moment(&field.data, slab(&field.grid), field.grid.cell_volume(), |_, s| spin_bilinear(s))
}

pub fn spin_expectation_momentum(field: &MomentumField) -> [f64; 3] {
    moment(&field.data, slab(&field.grid), field.grid.momentum_cell_volume(), |_, s| spin_bilinear(s))
}

/// ∫ r |Ψ|² d³r.
pub fn mean_position(field: &BispinorField) -> [f64; 3] {
    let g = field.grid;
    moment(&field.data, slab(&g), g.cell_volume(), |idx, s| {
        let r = g.position(idx);
        let w = s.norm_sqr();
        [r[0] * w, r[1] * w, r[2] * w]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{initial_bispinor_field, GaussianPacket, PolarizedState};
    use crate::spinor::{Axis, DiracMatrix};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bispinor(rng: &mut ChaCha8Rng) -> Bispinor {
        Bispinor(std::array::from_fn(|_| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        }))
    }

    #[test]
    fn bilinears_match_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = random_bispinor(&mut rng);
            let v = velocity_bilinear(&s);
            let sp = spin_bilinear(&s);
            for a in Axis::ALL {
                let ev = DiracMatrix::alpha(a).expectation(&s);
                let es = DiracMatrix::sigma(a).expectation(&s);
                assert_abs_diff_eq!(v[a.index()], ev.re, epsilon = 1e-13);
                assert_abs_diff_eq!(sp[a.index()], es.re, epsilon = 1e-13);
                assert!(ev.im.abs() < 1e-13 && es.im.abs() < 1e-13);
            }
            let norm = s.norm_sqr();
            assert!(sp.iter().map(|x| x * x).sum::<f64>().sqrt() <= norm * (1.0 + 1e-12));
        }
    }

    #[test]
    fn initial_moments() {
        let g = PositionGrid::cubic(32, 0.5).unwrap();
        let si = PolarizedState::example_i(GaussianPacket::new(1.5, 1.5, 0.0).unwrap());
        let fi = initial_bispinor_field(&si, g).unwrap();
        let rho = probability_density(&fi);
        assert_abs_diff_eq!(rho.iter().sum::<f64>() * g.cell_volume(), fi.norm(), epsilon = 1e-14);
        let v = velocity_expectation_position(&fi);
        assert_abs_diff_eq!(v[2], fi.norm(), epsilon = 1e-12);
        assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
        let vm = velocity_expectation_grid(&fi.to_momentum());
        for a in 0..3 {
            assert_abs_diff_eq!(vm[a], v[a], epsilon = 1e-12);
        }
        let sd = spin_density(&fi);
        for i in 0..g.len() {
            assert_abs_diff_eq!(sd.z[i], rho[i], epsilon = 1e-15);
            assert!(sd.x[i].abs() < 1e-16 && sd.y[i].abs() < 1e-16);
        }
        let sii = PolarizedState::example_ii(GaussianPacket::new(1.5, 1.5, 0.0).unwrap());
        let fii = initial_bispinor_field(&sii, g).unwrap();
        let v = velocity_expectation_position(&fii);
        assert_abs_diff_eq!(v[0], fii.norm(), epsilon = 1e-12);
        assert!(v[1].abs() < 1e-14 && v[2].abs() < 1e-14);
        let c = mean_position(&fii);
        assert!(c.iter().all(|x| x.abs() < 1e-12));
    }
}
