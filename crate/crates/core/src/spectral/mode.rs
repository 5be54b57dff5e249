//! Exact free evolution of a single momentum mode.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::Result;
use crate::spinor::{energy, free_spinors, project_coefficients, Bispinor, DiracMatrix, Momentum3};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Ψ(p, t) for one momentum, envelope factor excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumModeState {
    pub p: Momentum3,
    pub psi: Bispinor,
    pub t: f64,
}

impl MomentumModeState {
    pub fn new(phi: &Bispinor, p: Momentum3) -> Result<Self> {
        Ok(MomentumModeState {
            p,
            psi: phi.normalized()?,
            t: 0.0,
        })
    }

    /// Advances by `dt` (negative allowed).
    pub fn advance(&self, dt: f64) -> Self {
        MomentumModeState {
            p: self.p,
            psi: propagate(&self.psi, self.p, dt),
            t: self.t + dt,
        }
    }
}

/// e^{−iH(p)t} = cos λt − i sin λt · H(p)/λ.
pub fn propagator(p: Momentum3, t: f64) -> DiracMatrix {
    let lam = energy(p);
    let (s, c) = (lam * t).sin_cos();
    let h = DiracMatrix::hamiltonian(p);
    let k = Complex64::new(0.0, -s / lam);
    DiracMatrix(std::array::from_fn(|i| {
        std::array::from_fn(|j| h.0[i][j] * k + if i == j { c } else { 0.0 })
    }))
}

/// H(p)ψ without forming the matrix.
#[inline]
pub fn hamiltonian_mode(p: Momentum3, s: &Bispinor) -> Bispinor {
    let [p1, p2, p3] = p.0;
    let [a, b, c, d] = s.0;
    let pp = Complex64::new(p1, p2);
    let pm = Complex64::new(p1, -p2);
    Bispinor([
        a + c * p3 + d * pm,
        b + c * pp - d * p3,
        -c + a * p3 + b * pm,
        -d + a * pp - b * p3,
    ])
}

/// e^{−iH(p)t} ψ, the form used by the engines.
#[inline]
pub fn propagate(s: &Bispinor, p: Momentum3, t: f64) -> Bispinor {
    let lam = energy(p);
    let (sn, cs) = (lam * t).sin_cos();
    let h = hamiltonian_mode(p, s);
    let k = Complex64::new(0.0, -sn / lam);
    Bispinor(std::array::from_fn(|i| s.0[i] * cs + h.0[i] * k))
}

/// Σ_r C_r U_r e^{−iE_r t}, built from the projection coefficients and the free spinors.
pub fn evolve_mode_general(phi: &Bispinor, p: Momentum3, t: f64) -> Result<Bispinor> {
    let c = project_coefficients(phi, p)?;
    let mut out = Bispinor::ZERO;
    for (cr, u) in c.iter().zip(free_spinors(p)) {
        out += u.u * (*cr * Complex64::from_polar(1.0, -u.energy() * t));
    }
    Ok(out)
}

/// Closed form for the polarization (1, 0, 1, 0)/√2.
pub fn evolve_mode_example_i(p: Momentum3, t: f64) -> Bispinor {
    let [p1, p2, p3] = p.0;
    let lam = energy(p);
    let em = Complex64::from_polar(1.0, -lam * t);
    let ep = Complex64::from_polar(1.0, lam * t);
    let k = 0.5 * FRAC_1_SQRT_2;
    let a = (1.0 + p3) / lam;
    let b = (1.0 - p3) / lam;
    let psi1 = (em * (1.0 + a) + ep * (1.0 - a)) * k;
    let psi2 = Complex64::new(p2, -p1) * ((lam * t).sin() * FRAC_1_SQRT_2 / lam);
    let psi3 = (em * (1.0 - b) + ep * (1.0 + b)) * k;
    Bispinor([psi1, psi2, psi3, psi2])
}

/// Closed form for the polarization (1, 0, 0, 1)/√2.
pub fn evolve_mode_example_ii(p: Momentum3, t: f64) -> Bispinor {
    let [p1, p2, p3] = p.0;
    let lam = energy(p);
    let em = Complex64::from_polar(1.0, -lam * t);
    let ep = Complex64::from_polar(1.0, lam * t);
    let k = 0.5 * FRAC_1_SQRT_2;
    let a = (ONE + Complex64::new(p1, -p2)) / lam;
    let b = (ONE - Complex64::new(p1, p2)) / lam;
    let psi1 = (em * (ONE + a) + ep * (ONE - a)) * k;
    let psi2 = Complex64::new(0.0, p3 * (lam * t).sin() * FRAC_1_SQRT_2 / lam);
    let psi4 = (em * (ONE - b) + ep * (ONE + b)) * k;
    Bispinor([psi1, psi2, -psi2, psi4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{example_i_polarization, example_ii_polarization};
    use crate::spinor::apply_matrix;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist(a: &Bispinor, b: &Bispinor) -> f64 {
        (*a - *b).norm()
    }

    #[test]
    fn identity_at_zero_time() {
        let phi = Bispinor::new(
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.2, 0.5),
            Complex64::new(0.0, 0.7),
            Complex64::new(1.1, 0.0),
        );
        let p = Momentum3::new(0.4, -1.2, 0.9);
        let out = evolve_mode_general(&phi, p, 0.0).unwrap();
        assert!(dist(&out, &phi.normalized().unwrap()) < 1e-14);
    }

    #[test]
    fn rest_frame_phases() {
        for t in [0.0, 0.3, 2.0, 11.0] {
            let out = evolve_mode_general(&example_i_polarization(), Momentum3::default(), t).unwrap();
            let want = Bispinor::new(
                Complex64::from_polar(FRAC_1_SQRT_2, -t),
                Complex64::default(),
                Complex64::from_polar(FRAC_1_SQRT_2, t),
                Complex64::default(),
            );
            assert!(dist(&out, &want) < 1e-14);
            assert!(dist(&evolve_mode_example_i(Momentum3::default(), t), &want) < 1e-14);
        }
    }

    #[test]
    fn closed_forms_match_projection_route() {
        let p = Momentum3::new(0.3, 0.4, 0.5);
        let general = evolve_mode_general(&example_i_polarization(), p, 1.7).unwrap();
        assert!(dist(&general, &evolve_mode_example_i(p, 1.7)) < 1e-13);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let p = Momentum3::new(
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
                rng.random_range(-5.0..5.0),
            );
            let t = rng.random_range(-20.0..20.0);
            let gi = evolve_mode_general(&example_i_polarization(), p, t).unwrap();
            let gii = evolve_mode_general(&example_ii_polarization(), p, t).unwrap();
            assert!(dist(&gi, &evolve_mode_example_i(p, t)) < 1e-13);
            assert!(dist(&gii, &evolve_mode_example_ii(p, t)) < 1e-13);
            let direct = propagate(&example_ii_polarization(), p, t);
            assert!(dist(&gii, &direct) < 1e-13);
        }
    }

    #[test]
    fn example_i_read_offs() {
        let psi = evolve_mode_example_i(Momentum3::default(), 4.2);
        assert_eq!(psi.0[1], Complex64::default());
        assert_eq!(psi.0[3], Complex64::default());
        let t = std::f64::consts::PI / (2.0 * 2f64.sqrt());
        let psi = evolve_mode_example_i(Momentum3::new(1.0, 0.0, 0.0), t);
        assert_abs_diff_eq!(psi.0[1].re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(psi.0[1].im, -0.5, epsilon = 1e-15);
        assert_eq!(psi.0[1], psi.0[3]);
        assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn example_ii_read_offs() {
        let (p3, t) = (0.8, 2.3);
        let psi = evolve_mode_example_ii(Momentum3::new(0.0, 0.0, p3), t);
        let lam = (1.0 + p3 * p3).sqrt();
        let want = p3 * (lam * t).sin() / (lam * 2f64.sqrt());
        assert_abs_diff_eq!(psi.0[1].im, want, epsilon = 1e-15);
        assert_eq!(psi.0[1], -psi.0[2]);
        let psi0 = evolve_mode_example_ii(Momentum3::new(0.3, -0.2, 0.9), 0.0);
        assert!(dist(&psi0, &example_ii_polarization()) < 1e-15);
    }

    #[test]
    fn group_property_and_matrix_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = Momentum3::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let (t1, t2) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
            let phi = example_i_polarization();
            let two = propagate(&propagate(&phi, p, t1), p, t2);
            let one = propagate(&phi, p, t1 + t2);
            assert!(dist(&one, &two) < 1e-13);
            let via_matrix = apply_matrix(&propagator(p, t1), &phi);
            assert!(dist(&via_matrix, &propagate(&phi, p, t1)) < 1e-14);
            let state = MomentumModeState::new(&phi, p).unwrap().advance(t1).advance(t2);
            assert!(dist(&state.psi, &one) < 1e-13);
            assert_abs_diff_eq!(state.psi.norm_sqr(), 1.0, epsilon = 1e-13);
        }
    }
}
