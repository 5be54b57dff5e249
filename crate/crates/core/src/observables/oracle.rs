//! Velocity and spin expectations by momentum quadrature.
//!
//! Each mode contributes a(p) + b(p) cos 2λt + c(p) sin 2λt to the expectation of a constant
//! matrix, so a table of (λ, Σa, Σb, Σc) per radius makes whole time series cheap. The
//! two example polarizations use the closed-form integrands; any other polarization uses the
//! coefficients derived from U(t) = cos λt − i sin λt · H/λ:
//!
//! a = (A + B/λ²)/2, b = (A − B/λ²)/2, c = Im X / λ
//!
//! with A = ⟨φ|O|φ⟩, B = ⟨Hφ|O|Hφ⟩, X = ⟨φ|O|Hφ⟩.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::density::{spin_bilinear, velocity_bilinear};
use crate::observables::series::{ObservableSeries, Provenance};
use crate::packet::{GaussianPacket, PolarizationKind, PolarizedState};
use crate::spectral::mode::hamiltonian_mode;
use crate::quadrature::{PanelRule, PANEL_ORDER, PHASE_PER_PANEL};
use crate::spectral::rule::{converge, MomentumRule, AZIMUTH_POINTS};
use crate::spinor::{energy, project_coefficients, Axis, Bispinor, DiracMatrix, Momentum3};

/// Absolute tolerance on oracle values between successive refinements.
pub const ORACLE_TOLERANCE: f64 = 1e-11;
const PROBE_TIMES: usize = 33;
const MIN_RADIAL_PANELS: usize = 8;
const POLAR_PANELS: usize = 4;

/// Intervals of μ = cos θ on the sphere |p| = r where the envelope is above its cutoff:
/// lo ≤ r μ ≤ hi and r √(1 − μ²) ≤ pmax.
fn polar_support(r: f64, pmax: f64, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let (a, b) = ((lo / r).max(-1.0), (hi / r).min(1.0));
    if a >= b {
        return Vec::new();
    }
    if r <= pmax {
        return vec![(a, b)];
    }
    let m = (1.0 - (pmax / r).powi(2)).sqrt();
    [(a, b.min(-m)), (a.max(m), b)].into_iter().filter(|(x, y)| x < y).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    Velocity,
    Spin,
}

/// (a, b, c) triple per Cartesian component.
pub type Coefficients = ([f64; 3], [f64; 3], [f64; 3]);

/// Closed-form integrand coefficients for the (1,0,1,0)/√2 polarization.
pub fn coefficients_example_i(quantity: Quantity, p: Momentum3) -> Coefficients {
    let [p1, p2, p3] = p.0;
    let lam = energy(p);
    let l2 = lam * lam;
    match quantity {
        Quantity::Velocity => (
            [p1 * p3 / l2, p2 * p3 / l2, p3 * p3 / l2],
            [-p1 * p3 / l2, -p2 * p3 / l2, 1.0 - p3 * p3 / l2],
            [p2 / lam, -p1 / lam, 0.0],
        ),
        Quantity::Spin => {
            let q2 = p1 * p1 + p2 * p2;
            (
                [p3 * p1 / l2, p3 * p2 / l2, (l2 - q2) / l2],
                [-p3 * p1 / l2, -p3 * p2 / l2, q2 / l2],
                [p2 / lam, -p1 / lam, 0.0],
            )
        }
    }
}

/// Closed-form integrand coefficients for the (1,0,0,1)/√2 polarization.
pub fn coefficients_example_ii(quantity: Quantity, p: Momentum3) -> Coefficients {
    let [p1, p2, p3] = p.0;
    let lam = energy(p);
    let l2 = lam * lam;
    match quantity {
        Quantity::Velocity => (
            [p1 * p1 / l2, p1 * p2 / l2, p1 * p3 / l2],
            [1.0 - p1 * p1 / l2, -p1 * p2 / l2, -p1 * p3 / l2],
            [0.0, 1.0 / lam, 0.0],
        ),
        Quantity::Spin => (
            [-p3 / l2, 0.0, p1 / l2],
            [p3 / l2, 0.0, -p1 / l2],
            [0.0, p3 / lam, -p2 / lam],
        ),
    }
}

/// Coefficients for an arbitrary normalized polarization.
pub fn coefficients_general(quantity: Quantity, phi: &Bispinor, p: Momentum3) -> Coefficients {
    let lam = energy(p);
    let l2 = lam * lam;
    let hphi = hamiltonian_mode(p, phi);
    let (a_exp, b_exp) = match quantity {
        Quantity::Velocity => (velocity_bilinear(phi), velocity_bilinear(&hphi)),
        Quantity::Spin => (spin_bilinear(phi), spin_bilinear(&hphi)),
    };
    let mut a = [0.0; 3];
    let mut b = [0.0; 3];
    let mut c = [0.0; 3];
    for axis in Axis::ALL {
        let i = axis.index();
        let m = match quantity {
            Quantity::Velocity => DiracMatrix::alpha(axis),
            Quantity::Spin => DiracMatrix::sigma(axis),
        };
        let x = phi.inner(&crate::spinor::apply_matrix(&m, &hphi));
        a[i] = 0.5 * (a_exp[i] + b_exp[i] / l2);
        b[i] = 0.5 * (a_exp[i] - b_exp[i] / l2);
        c[i] = x.im / lam;
    }
    (a, b, c)
}

fn coefficients(state: &PolarizedState, quantity: Quantity, p: Momentum3) -> Coefficients {
    match state.kind() {
        PolarizationKind::ExampleI => coefficients_example_i(quantity, p),
        PolarizationKind::ExampleII => coefficients_example_ii(quantity, p),
        PolarizationKind::General => coefficients_general(quantity, &state.phi, p),
    }
}

/// Precomputed expectation series for one state and quantity.
#[derive(Debug, Clone)]
pub struct OracleTable {
    pub quantity: Quantity,
    /// Σ a(p)|f|² w over all nodes: the time-independent part.
    pub constant: [f64; 3],
    lam: Vec<f64>,
    cos_coef: Vec<[f64; 3]>,
    sin_coef: Vec<[f64; 3]>,
    pub t_max: f64,
}

impl OracleTable {
    /// Builds the table resolved for 0 ≤ t ≤ `t_max`, refining until values at probe times agree
    /// within [`ORACLE_TOLERANCE`].
    pub fn new(state: &PolarizedState, quantity: Quantity, t_max: f64) -> Result<Self> {
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(Error::InvalidInput(format!("t_max must be finite and ≥ 0, got {t_max}")));
        }
        let probes: Vec<f64> = (0..PROBE_TIMES)
            .map(|i| t_max * i as f64 / (PROBE_TIMES - 1) as f64)
            .collect();
        let (table, _) = converge(
            ORACLE_TOLERANCE,
            |r| {
                let t = Self::build(state, quantity, t_max, r);
                let v: Vec<[f64; 3]> = probes.iter().map(|&s| t.eval(s)).collect();
                Ok((t, v))
            },
            |a, b| {
                a.1.iter()
                    .zip(&b.1)
                    .flat_map(|(x, y)| (0..3).map(move |i| (x[i] - y[i]).abs()))
                    .fold(0.0, f64::max)
            },
            |a| a.1.last().map(|v| v[2]).unwrap_or(0.0),
        )?;
        Ok(table)
    }

    /// One table at a fixed refinement level.
    ///
    /// The phase depends on |p| alone, so the rule is spherical: radial panels follow the phase
    /// (dλ/d|p| < 1, hence at most 2t per unit radius) while the polar panels at each radius cover
    /// only the envelope support, which keeps narrow anisotropic envelopes resolved.
    pub fn build(state: &PolarizedState, quantity: Quantity, t_max: f64, refine: usize) -> Self {
        let packet = &state.packet;
        let refine = refine.max(1);
        let (pmax, lo, hi) = packet.momentum_cutoffs();
        let rmax = pmax.hypot(lo.abs().max(hi.abs()));
        let base = ((rmax * 2.0 * t_max) / PHASE_PER_PANEL).ceil() as usize;
        let radial = PanelRule::uniform(0.0, rmax, base.max(MIN_RADIAL_PANELS) * refine, PANEL_ORDER);
        let nphi = AZIMUTH_POINTS;
        let dphi = 2.0 * PI / nphi as f64;
        let azimuth: Vec<(f64, f64)> = (0..nphi)
            .map(|k| (2.0 * PI * (k as f64 + 0.25) / nphi as f64).sin_cos())
            .collect();
        let rows: Vec<(f64, Coefficients)> = radial
            .nodes
            .par_iter()
            .zip(radial.weights.par_iter())
            .map(|(&r, &wr)| {
                let mut acc: Coefficients = ([0.0; 3], [0.0; 3], [0.0; 3]);
                for piece in polar_support(r, pmax, lo, hi) {
                    let rule = PanelRule::uniform(piece.0, piece.1, POLAR_PANELS * refine, PANEL_ORDER);
                    for (&mu, &wmu) in rule.nodes.iter().zip(&rule.weights) {
                        let p_perp = r * (1.0 - mu * mu).max(0.0).sqrt();
                        let pz = r * mu;
                        let dens = packet.momentum_density(p_perp, pz);
                        if dens == 0.0 {
                            continue;
                        }
                        let w = dens * r * r * wr * wmu * dphi;
                        for &(sin, cos) in &azimuth {
                            let p = Momentum3::new(p_perp * cos, p_perp * sin, pz);
                            let (a, b, c) = coefficients(state, quantity, p);
                            for i in 0..3 {
                                acc.0[i] += w * a[i];
                                acc.1[i] += w * b[i];
                                acc.2[i] += w * c[i];
                            }
                        }
                    }
                }
                ((1.0 + r * r).sqrt(), acc)
            })
            .collect();
        let mut constant = [0.0; 3];
        let mut lam = Vec::with_capacity(rows.len());
        let mut cos_coef = Vec::with_capacity(rows.len());
        let mut sin_coef = Vec::with_capacity(rows.len());
        for (l, (a, b, c)) in rows {
            for i in 0..3 {
                constant[i] += a[i];
            }
            if b.iter().chain(&c).any(|v| *v != 0.0) {
                lam.push(l);
                cos_coef.push(b);
                sin_coef.push(c);
            }
        }
        OracleTable {
            quantity,
            constant,
            lam,
            cos_coef,
            sin_coef,
            t_max,
        }
    }

    pub fn eval(&self, t: f64) -> [f64; 3] {
        let parts: Vec<[f64; 3]> = self
            .lam
            .par_chunks(1024)
            .zip(self.cos_coef.par_chunks(1024))
            .zip(self.sin_coef.par_chunks(1024))
            .map(|((l, b), c)| {
                let mut acc = [0.0; 3];
                for k in 0..l.len() {
                    let (s, co) = (2.0 * l[k] * t).sin_cos();
                    for i in 0..3 {
                        acc[i] += b[k][i] * co + c[k][i] * s;
                    }
                }
                acc
            })
            .collect();
        let mut out = self.constant;
        for p in parts {
            for i in 0..3 {
                out[i] += p[i];
            }
        }
        out
    }

    /// Series over the given times; all of them should lie in [0, `t_max`].
    pub fn series(&self, times: &[f64]) -> Result<ObservableSeries> {
        if let Some(t) = times.iter().find(|t| **t > self.t_max * (1.0 + 1e-12) || **t < 0.0) {
            return Err(Error::InvalidInput(format!(
                "time {t} outside the resolved range [0, {}]",
                self.t_max
            )));
        }
        let values = times.iter().map(|&t| self.eval(t)).collect();
        match self.quantity {
            Quantity::Velocity => ObservableSeries::velocity(Provenance::QuadratureOracle, times.to_vec(), values),
            Quantity::Spin => ObservableSeries::vector("spin", Provenance::QuadratureOracle, times.to_vec(), values),
        }
    }
}

/// V̄(t) for the (1,0,1,0)/√2 polarization.
pub fn velocity_oracle_example_i(packet: &GaussianPacket, t: f64) -> Result<[f64; 3]> {
    Ok(OracleTable::new(&PolarizedState::example_i(*packet), Quantity::Velocity, t)?.eval(t))
}

/// V̄(t) for the (1,0,0,1)/√2 polarization.
pub fn velocity_oracle_example_ii(packet: &GaussianPacket, t: f64) -> Result<[f64; 3]> {
    Ok(OracleTable::new(&PolarizedState::example_ii(*packet), Quantity::Velocity, t)?.eval(t))
}

/// Σ̄(t) for either example polarization.
pub fn spin_oracle(packet: &GaussianPacket, kind: PolarizationKind, t: f64) -> Result<[f64; 3]> {
    let state = match kind {
        PolarizationKind::ExampleI => PolarizedState::example_i(*packet),
        PolarizationKind::ExampleII => PolarizedState::example_ii(*packet),
        PolarizationKind::General => {
            return Err(Error::InvalidInput(
                "spin_oracle takes an example polarization; use OracleTable for others".into(),
            ))
        }
    };
    Ok(OracleTable::new(&state, Quantity::Spin, t)?.eval(t))
}

/// Oracle series for any state at the given times.
pub fn oracle_series(state: &PolarizedState, quantity: Quantity, times: &[f64]) -> Result<ObservableSeries> {
    let t_max = times.iter().copied().fold(0.0, f64::max);
    OracleTable::new(state, quantity, t_max)?.series(times)
}

/// Time-independent velocity component and its pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftVelocity {
    pub axis: Axis,
    /// ∫|f|² p_μ/λ² [D + Σ_ν p_ν ⟨α_ν⟩].
    pub total: f64,
    /// ⟨α_μ⟩ ∫|f|² p_μ²/λ².
    pub initial_velocity_term: f64,
    /// D ∫|f|² p_μ/λ², with D = |φ₁|² + |φ₂|² − |φ₃|² − |φ₄|².
    pub mass_term: f64,
    /// Σ_{ν≠μ} ⟨α_ν⟩ ∫|f|² p_μ p_ν/λ²; zero for envelopes even in each transverse direction.
    pub cross_term: f64,
    /// ∫|f|² p_μ/λ · (|C₁|² + |C₂|² − |C₃|² − |C₄|²), from the energy-basis projection.
    pub per_mode: f64,
}

const DRIFT_TOLERANCE: f64 = 1e-12;

/// Constant part of V̄_μ for an arbitrary polarization (normalized internally).
pub fn drift_velocity_general(phi: &Bispinor, packet: &GaussianPacket, mu: Axis) -> Result<DriftVelocity> {
    let phi = phi.normalized()?;
    packet.validate()?;
    let alpha = velocity_bilinear(&phi);
    let d = phi.0[0].norm_sqr() + phi.0[1].norm_sqr() - phi.0[2].norm_sqr() - phi.0[3].norm_sqr();
    let m = mu.index();
    // [total, p_μ²/λ², p_μ/λ², cross, per-mode]
    let eval = |r: usize| -> Result<[f64; 5]> {
        let rule = MomentumRule::new(packet, 0.0, 0.0, r);
        let mut acc = [0.0; 5];
        for node in rule.nodes() {
            let dens = packet.momentum_density(node.p_perp, node.p.0[2]);
            if dens == 0.0 {
                continue;
            }
            let w = dens * node.weight;
            let p = node.p.0;
            let lam = energy(node.p);
            let l2 = lam * lam;
            let dot: f64 = (0..3).map(|v| p[v] * alpha[v]).sum();
            let cross: f64 = (0..3).filter(|&v| v != m).map(|v| p[v] * alpha[v]).sum();
            let c = project_coefficients(&phi, node.p)?;
            let sign = c[0].norm_sqr() + c[1].norm_sqr() - c[2].norm_sqr() - c[3].norm_sqr();
            acc[0] += w * p[m] / l2 * (d + dot);
            acc[1] += w * p[m] * p[m] / l2;
            acc[2] += w * p[m] / l2;
            acc[3] += w * p[m] / l2 * cross;
            acc[4] += w * p[m] / lam * sign;
        }
        Ok(acc)
    };
    let v = converge(
        DRIFT_TOLERANCE,
        eval,
        |a, b| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        |a| a[0],
    )?;
    Ok(DriftVelocity {
        axis: mu,
        total: v[0],
        initial_velocity_term: alpha[m] * v[1],
        mass_term: d * v[2],
        cross_term: v[3],
        per_mode: v[4],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{example_i_polarization, example_ii_polarization};
    use crate::quadrature::{PanelRule, PANEL_ORDER};
    use crate::spectral::mode::propagate;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 2π ∫|f|² g(p⊥, p_z) p⊥ dp⊥ dp_z, independent of the table machinery.
    fn radial_integral(packet: &GaussianPacket, g: impl Fn(f64, f64) -> f64) -> f64 {
        let (pmax, lo, hi) = packet.momentum_cutoffs();
        let perp = PanelRule::uniform(0.0, pmax, 16, PANEL_ORDER);
        let pz = PanelRule::uniform(lo, hi, 16, PANEL_ORDER);
        let mut acc = 0.0;
        for (&q, &wq) in perp.nodes.iter().zip(&perp.weights) {
            for (&z, &wz) in pz.nodes.iter().zip(&pz.weights) {
                acc += wq * wz * q * packet.momentum_density(q, z) * g(q, z);
            }
        }
        2.0 * std::f64::consts::PI * acc
    }

    fn random_p(rng: &mut ChaCha8Rng) -> Momentum3 {
        Momentum3::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        )
    }

    fn value((a, b, c): Coefficients, lam: f64, t: f64) -> [f64; 3] {
        let (s, co) = (2.0 * lam * t).sin_cos();
        std::array::from_fn(|i| a[i] + b[i] * co + c[i] * s)
    }

    #[test]
    fn general_coefficients_match_direct_evolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let phi = Bispinor(std::array::from_fn(|_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }))
            .normalized()
            .unwrap();
            let p = random_p(&mut rng);
            let t = rng.random_range(0.0..20.0);
            let psi = propagate(&phi, p, t);
            let lam = energy(p);
            let v = value(coefficients_general(Quantity::Velocity, &phi, p), lam, t);
            let s = value(coefficients_general(Quantity::Spin, &phi, p), lam, t);
            let dv = velocity_bilinear(&psi);
            let ds = spin_bilinear(&psi);
            for i in 0..3 {
                assert_abs_diff_eq!(v[i], dv[i], epsilon = 1e-12);
                assert_abs_diff_eq!(s[i], ds[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_integrands_match_general_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let (pi, pii) = (example_i_polarization(), example_ii_polarization());
        for _ in 0..300 {
            let p = random_p(&mut rng);
            for q in [Quantity::Velocity, Quantity::Spin] {
                let (a, b, c) = coefficients_example_i(q, p);
                let (ga, gb, gc) = coefficients_general(q, &pi, p);
                let (e, f, g) = coefficients_example_ii(q, p);
                let (ha, hb, hc) = coefficients_general(q, &pii, p);
                for i in 0..3 {
                    assert_abs_diff_eq!(a[i], ga[i], epsilon = 1e-13);
                    assert_abs_diff_eq!(b[i], gb[i], epsilon = 1e-13);
                    assert_abs_diff_eq!(c[i], gc[i], epsilon = 1e-13);
                    assert_abs_diff_eq!(e[i], ha[i], epsilon = 1e-13);
                    assert_abs_diff_eq!(f[i], hb[i], epsilon = 1e-13);
                    assert_abs_diff_eq!(g[i], hc[i], epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn initial_values() {
        let p = GaussianPacket::new(1.0, 5.0, 0.0).unwrap();
        let v = velocity_oracle_example_i(&p, 0.0).unwrap();
        assert_abs_diff_eq!(v[2], 1.0, epsilon = 1e-11);
        let v = velocity_oracle_example_ii(&p, 0.0).unwrap();
        assert_abs_diff_eq!(v[0], 1.0, epsilon = 1e-11);
        let s = spin_oracle(&p, PolarizationKind::ExampleI, 0.0).unwrap();
        assert_abs_diff_eq!(s[2], 1.0, epsilon = 1e-11);
    }

    #[test]
    fn zero_identities() {
        let p0 = GaussianPacket::new(1.0, 5.0, 0.0).unwrap();
        let p1 = GaussianPacket::new(2.5, 5.0, 1.0).unwrap();
        let ti = OracleTable::new(&PolarizedState::example_i(p1), Quantity::Velocity, 10.0).unwrap();
        let si = OracleTable::new(&PolarizedState::example_i(p1), Quantity::Spin, 10.0).unwrap();
        let tii = OracleTable::new(&PolarizedState::example_ii(p1), Quantity::Velocity, 10.0).unwrap();
        let sii0 = OracleTable::new(&PolarizedState::example_ii(p0), Quantity::Spin, 10.0).unwrap();
        let sii1 = OracleTable::new(&PolarizedState::example_ii(p1), Quantity::Spin, 10.0).unwrap();
        for t in [0.0, 1.3, 4.0, 9.7] {
            let (v, s) = (ti.eval(t), si.eval(t));
            assert!(v[0].abs() < 1e-10 && v[1].abs() < 1e-10);
            assert!(s[0].abs() < 1e-10 && s[1].abs() < 1e-10);
            assert!(tii.eval(t)[2].abs() < 1e-10);
            assert!(sii0.eval(t).iter().all(|x| x.abs() < 1e-10));
            assert!(sii1.eval(t)[2].abs() < 1e-10);
        }
        // k₀ ≠ 0: the x–y spin components move.
        assert!(sii1.eval(3.0)[0].abs() > 1e-4 || sii1.eval(3.0)[1].abs() > 1e-4);
    }

    #[test]
    fn table_matches_independent_radial_integral() {
        let p = GaussianPacket::new(5.0, 5.0, 0.0).unwrap();
        let t = OracleTable::new(&PolarizedState::example_i(p), Quantity::Velocity, 1.0).unwrap();
        let want = radial_integral(&p, |q, z| z * z / (1.0 + q * q + z * z));
        assert_abs_diff_eq!(t.constant[2], want, epsilon = 1e-12);
        assert_abs_diff_eq!(t.constant[2], 0.018239, epsilon = 1e-5);
    }

    #[test]
    fn drift_reduces_to_closed_form_constants() {
        for (d, delta, k0) in [(5.0, 5.0, 0.0), (2.5, 5.0, 1.0), (1.0, 5.0, 0.0)] {
            let p = GaussianPacket::new(d, delta, k0).unwrap();
            let di = drift_velocity_general(&example_i_polarization(), &p, Axis::Z).unwrap();
            let want_i = radial_integral(&p, |q, z| z * z / (1.0 + q * q + z * z));
            assert_abs_diff_eq!(di.total, want_i, epsilon = 1e-10);
            let dii = drift_velocity_general(&example_ii_polarization(), &p, Axis::X).unwrap();
            let want_ii = radial_integral(&p, |q, z| 0.5 * q * q / (1.0 + q * q + z * z));
            assert_abs_diff_eq!(dii.total, want_ii, epsilon = 1e-10);
            for dv in [di, dii] {
                assert_abs_diff_eq!(dv.initial_velocity_term + dv.mass_term + dv.cross_term, dv.total, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn per_mode_route_differs_from_closed_form_by_one_power_of_lambda() {
        // The energy-basis route carries p_μ/λ, not p_μ/λ², and matches the closed form.
        let p = GaussianPacket::new(1.0, 1.0, 0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let phi = Bispinor(std::array::from_fn(|_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            }));
            for mu in Axis::ALL {
                let dv = drift_velocity_general(&phi, &p, mu).unwrap();
                assert_abs_diff_eq!(dv.per_mode, dv.total, epsilon = 1e-11);
            }
        }
    }
}
