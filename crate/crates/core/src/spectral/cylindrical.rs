//! Synthesis on a (ρ, z) half plane by Bessel-kernel quadrature for the two worked polarizations.
//!
//! After the azimuthal integral each component becomes
//! `K Σ_pz e^{i p_z z} w_z Σ_p⊥ w_⊥ f p⊥ [...] J_m(p⊥ ρ)` with `K = 1/(2√π)`; only three radial
//! sums per (point, p_z) are needed:
//!
//! * `A = Σ f p⊥ cos λt J₀`
//! * `B = Σ f p⊥ sin λt / λ J₀`
//! * `C = Σ f p⊥² sin λt / λ J₁`
//!
//! Example i: Ψ₁ = K∫(A − i(1+p_z)B), Ψ₂ = Ψ₄ = e^{iα} K∫C, Ψ₃ = K∫(A + i(1−p_z)B).
//! Example ii: Ψ₁ = K∫(A − iB) + e^{−iα} K∫C, Ψ₂ = −Ψ₃ = iK∫p_z B, Ψ₄ = K∫(A + iB) + e^{iα} K∫C.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{bessel_j01, j0_zero_estimate};
use crate::error::{Error, Result};
use crate::packet::{PolarizationKind, PolarizedState, AMPLITUDE_CUTOFF_RATIO};
use crate::quadrature::{PanelRule, PANEL_ORDER, PHASE_PER_PANEL};
use crate::spinor::Bispinor;

/// Absolute tolerance on field values for the refinement check.
pub const CYLINDRICAL_TOLERANCE: f64 = 1e-10;

/// Sample points of the half plane ρ ≥ 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RzGrid {
    pub rho: Vec<f64>,
    pub z: Vec<f64>,
}

impl RzGrid {
    pub fn new(rho: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        if rho.is_empty() || z.is_empty() {
            return Err(Error::InvalidInput("empty (rho, z) grid".into()));
        }
        if rho.iter().any(|r| !(r.is_finite() && *r >= 0.0)) || z.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("rho must be finite and >= 0, z finite".into()));
        }
        Ok(RzGrid { rho, z })
    }

    /// `n_rho` points on [0, rho_max] and `n_z` on [−z_max, z_max].
    pub fn uniform(rho_max: f64, n_rho: usize, z_max: f64, n_z: usize) -> Result<Self> {
        let lin = |a: f64, b: f64, n: usize| -> Vec<f64> {
            if n == 1 {
                vec![a]
            } else {
                (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
            }
        };
        Self::new(lin(0.0, rho_max, n_rho), lin(-z_max, z_max, n_z))
    }

    pub fn len(&self) -> usize {
        self.rho.len() * self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ψ(ρ, α, z, t) = Σ_m e^{imα} f_{c,m}(ρ, z, t), m ∈ {−1, 0, 1}, stored per point.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalField {
    pub kind: PolarizationKind,
    pub t: f64,
    pub grid: RzGrid,
    /// `harmonics[i_rho * n_z + i_z][component][m + 1]`.
    pub harmonics: Vec<[[Complex64; 3]; 4]>,
}

impl CylindricalField {
    pub fn index(&self, i_rho: usize, i_z: usize) -> usize {
        i_rho * self.grid.z.len() + i_z
    }

    pub fn value(&self, i_rho: usize, i_z: usize, alpha: f64) -> Bispinor {
        let h = &self.harmonics[self.index(i_rho, i_z)];
        let e = [
            Complex64::from_polar(1.0, -alpha),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, alpha),
        ];
        Bispinor(std::array::from_fn(|c| (0..3).map(|m| h[c][m] * e[m]).sum()))
    }

    pub fn density(&self, i_rho: usize, i_z: usize, alpha: f64) -> f64 {
        self.value(i_rho, i_z, alpha).norm_sqr()
    }
}

struct Table {
    q: Vec<f64>,
    /// Per (q, pz): w_q f q cos λt, w_q f q sin λt / λ.
    cos_term: Vec<f64>,
    sin_term: Vec<f64>,
    pz: Vec<f64>,
    wz: Vec<f64>,
}

fn radial_breakpoints(pmax: f64, rho_max: f64, rate: f64, refine: usize) -> Vec<f64> {
    let mut coarse = vec![0.0];
    if rho_max > 0.0 {
        let mut k = 1;
        loop {
            let q = j0_zero_estimate(k) / rho_max;
            if q >= pmax {
                break;
            }
            coarse.push(q);
            k += 1;
        }
    }
    coarse.push(pmax);
    let mut out = vec![0.0];
    for w in coarse.windows(2) {
        let pieces = (((w[1] - w[0]) * rate / PHASE_PER_PANEL).ceil() as usize).max(1) * refine;
        for i in 1..=pieces {
            out.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
        }
    }
    if out.len() < 5 {
        let n = 4 * refine;
        return (0..=n).map(|i| pmax * i as f64 / n as f64).collect();
    }
    out
}

fn build_table(state: &PolarizedState, grid: &RzGrid, t: f64, refine: usize) -> Table {
    let pk = &state.packet;
    let (pmax, lo, hi) = pk.momentum_cutoffs_at(AMPLITUDE_CUTOFF_RATIO);
    let rho_max = grid.rho.iter().cloned().fold(0.0, f64::max);
    let z_max = grid.z.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let t_abs = t.abs();
    let qrule = PanelRule::from_breakpoints(&radial_breakpoints(pmax, rho_max, rho_max + t_abs, refine), PANEL_ORDER);
    let zpanels = (((hi - lo) * (z_max + t_abs) / PHASE_PER_PANEL).ceil() as usize).max(4) * refine;
    let zrule = PanelRule::uniform(lo, hi, zpanels, PANEL_ORDER);
    let nz = zrule.len();
    let mut cos_term = vec![0.0; qrule.len() * nz];
    let mut sin_term = vec![0.0; qrule.len() * nz];
    for (i, (&q, &wq)) in qrule.nodes.iter().zip(&qrule.weights).enumerate() {
        for (j, &pz) in zrule.nodes.iter().enumerate() {
            let lam = (1.0 + q * q + pz * pz).sqrt();
            let (s, c) = (lam * t).sin_cos();
            let base = wq * pk.momentum_rz(q, pz) * q;
            cos_term[i * nz + j] = base * c;
            sin_term[i * nz + j] = base * s / lam;
        }
    }
    Table {
        q: qrule.nodes,
        cos_term,
        sin_term,
        pz: zrule.nodes,
        wz: zrule.weights,
    }
}

fn point(kind: PolarizationKind, table: &Table, rho: f64, z: f64) -> [[Complex64; 3]; 4] {
    let nz = table.pz.len();
    let mut a = vec![0.0; nz];
    let mut b = vec![0.0; nz];
    let mut c = vec![0.0; nz];
    for (i, &q) in table.q.iter().enumerate() {
        let (j0, j1) = bessel_j01(q * rho);
        let row_c = &table.cos_term[i * nz..(i + 1) * nz];
        let row_s = &table.sin_term[i * nz..(i + 1) * nz];
        for j in 0..nz {
            a[j] += row_c[j] * j0;
            b[j] += row_s[j] * j0;
            c[j] += row_s[j] * q * j1;
        }
    }
    let k = 0.5 / PI.sqrt();
    let i = Complex64::new(0.0, 1.0);
    let zero = Complex64::default();
    let mut sa = zero;
    let mut sb = zero;
    let mut sc = zero;
    let mut szb = zero;
    for j in 0..nz {
        let e = Complex64::from_polar(table.wz[j] * k, table.pz[j] * z);
        sa += e * a[j];
        sb += e * b[j];
        sc += e * c[j];
        szb += e * (table.pz[j] * b[j]);
    }
    match kind {
        PolarizationKind::ExampleI => [
            [zero, sa - i * (sb + szb), zero],
            [zero, zero, sc],
            [zero, sa + i * (sb - szb), zero],
            [zero, zero, sc],
        ],
        _ => [
            [sc, sa - i * sb, zero],
            [zero, i * szb, zero],
            [zero, -i * szb, zero],
            [zero, sa + i * sb, sc],
        ],
    }
}

fn synthesize_with(state: &PolarizedState, grid: &RzGrid, t: f64, refine: usize) -> CylindricalField {
    let kind = state.kind();
    let table = build_table(state, grid, t, refine);
    let nz = grid.z.len();
    let harmonics = (0..grid.len())
        .into_par_iter()
        .map(|idx| point(kind, &table, grid.rho[idx / nz], grid.z[idx % nz]))
        .collect();
    CylindricalField {
        kind,
        t,
        grid: grid.clone(),
        harmonics,
    }
}

/// Ψ(ρ, α, z, t) for the polarizations (1, 0, 1, 0)/√2 and (1, 0, 0, 1)/√2 with an axially
/// symmetric envelope. The panel layout is checked against a doubled one on the extreme points.
pub fn synthesize_cylindrical(state: &PolarizedState, grid: &RzGrid, t: f64) -> Result<CylindricalField> {
    if state.kind() == PolarizationKind::General {
        return Err(Error::Unsupported(
            "cylindrical synthesis is available for (1,0,1,0)/sqrt2 and (1,0,0,1)/sqrt2 only".into(),
        ));
    }
    if state.packet.m_axial != 0 {
        return Err(Error::Unsupported("cylindrical synthesis needs m_axial = 0".into()));
    }
    let field = synthesize_with(state, grid, t, 1);
    let probe_rho: Vec<f64> = [0.0, grid.rho.iter().cloned().fold(0.0, f64::max)].to_vec();
    let z_abs = grid.z.iter().map(|z| z.abs()).fold(0.0, f64::max);
    let probe = RzGrid::new(probe_rho.clone(), vec![-z_abs, 0.0, z_abs])?;
    let coarse_table = build_table(state, grid, t, 1);
    let fine_table = build_table(state, grid, t, 2);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &r in &probe.rho {
        for &z in &probe.z {
            let a = point(field.kind, &coarse_table, r, z);
            let b = point(field.kind, &fine_table, r, z);
            for c in 0..4 {
                for m in 0..3 {
                    worst = worst.max((a[c][m] - b[c][m]).norm());
                    scale = scale.max(b[c][m].norm());
                }
            }
        }
    }
    if worst > CYLINDRICAL_TOLERANCE {
        return Err(Error::Quadrature {
            estimate: scale,
            error: worst,
            tolerance: CYLINDRICAL_TOLERANCE,
        });
    }
    Ok(field)
}
