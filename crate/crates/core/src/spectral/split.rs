//! Positive/negative-energy content of a polarized packet.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::packet::{PolarizationKind, PolarizedState};
use crate::quadrature::{PanelRule, PANEL_ORDER};
use crate::spectral::rule::{converge, AZIMUTH_POINTS};
use crate::spinor::{energy, project_coefficients, Momentum3};

/// (w₊, w₋) = (|C₁|² + |C₂|², |C₃|² + |C₄|²) at momentum `p`, envelope excluded.
pub fn energy_split(state: &PolarizedState, p: Momentum3) -> Result<(f64, f64)> {
    if state.kind() == PolarizationKind::ExampleI {
        return Ok(energy_split_example_i(p));
    }
    energy_split_projected(state, p)
}

/// ½(1 ± p_z/λ_p), valid for the polarization (1, 0, 1, 0)/√2.
pub fn energy_split_example_i(p: Momentum3) -> (f64, f64) {
    let r = p.0[2] / energy(p);
    (0.5 * (1.0 + r), 0.5 * (1.0 - r))
}

/// Split from the basis coefficients for any polarization.
pub fn energy_split_projected(state: &PolarizedState, p: Momentum3) -> Result<(f64, f64)> {
    let c = project_coefficients(&state.phi, p)?;
    Ok((c[0].norm_sqr() + c[1].norm_sqr(), c[2].norm_sqr() + c[3].norm_sqr()))
}

/// W±(p_z) = ∫ |f|² w± p⊥ dp⊥ dφ sampled at the requested p_z.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WCurve {
    pub pz: Vec<f64>,
    pub w_plus: Vec<f64>,
    pub w_minus: Vec<f64>,
}

impl WCurve {
    /// Trapezoid integrals (∫W₊, ∫W₋) over the sampled range.
    pub fn integrals(&self) -> (f64, f64) {
        let trap = |w: &[f64]| {
            self.pz
                .windows(2)
                .zip(w.windows(2))
                .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
                .sum::<f64>()
        };
        (trap(&self.w_plus), trap(&self.w_minus))
    }
}

const W_TOLERANCE: f64 = 1e-12;

/// Radial-azimuthal integral at one p_z.
fn w_at(state: &PolarizedState, pz: f64, refine: usize) -> Result<(f64, f64)> {
    let (pmax, _, _) = state.packet.momentum_cutoffs();
    let rule = PanelRule::uniform(0.0, pmax, 8 * refine, PANEL_ORDER);
    let dphi = 2.0 * PI / AZIMUTH_POINTS as f64;
    let mut acc = (0.0, 0.0);
    for (&q, &w) in rule.nodes.iter().zip(&rule.weights) {
        let dens = state.packet.momentum_density(q, pz) * q * w * dphi;
        if dens == 0.0 {
            continue;
        }
        for k in 0..AZIMUTH_POINTS {
            let phi = dphi * (k as f64 + 0.25);
            let (wp, wm) = energy_split(state, Momentum3::new(q * phi.cos(), q * phi.sin(), pz))?;
            acc.0 += dens * wp;
            acc.1 += dens * wm;
        }
    }
    Ok(acc)
}

/// Longitudinal distributions of the two energy branches.
pub fn w_curve(state: &PolarizedState, pz_samples: &[f64]) -> Result<WCurve> {
    if state.packet.m_axial != 0 {
        return Err(Error::Unsupported("W± curves need an m_axial = 0 envelope".into()));
    }
    let mut out = WCurve {
        pz: pz_samples.to_vec(),
        w_plus: Vec::with_capacity(pz_samples.len()),
        w_minus: Vec::with_capacity(pz_samples.len()),
    };
    for &pz in pz_samples {
        let (wp, wm) = converge(
            W_TOLERANCE,
            |r| w_at(state, pz, r),
            |a, b| (a.0 - b.0).abs().max((a.1 - b.1).abs()),
            |a| a.0 + a.1,
        )?;
        out.w_plus.push(wp);
        out.w_minus.push(wm);
    }
    Ok(out)
}

/// p_z samples spanning the envelope support.
pub fn default_pz_samples(state: &PolarizedState, count: usize) -> Vec<f64> {
    let (_, lo, hi) = state.packet.momentum_cutoffs();
    let count = count.max(2);
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// (∫W₊ dp_z, ∫W₋ dp_z) by Gauss–Legendre over the full support.
pub fn w_totals(state: &PolarizedState) -> Result<(f64, f64)> {
    let (_, lo, hi) = state.packet.momentum_cutoffs();
    converge(
        W_TOLERANCE,
        |r| {
            let rule = PanelRule::uniform(lo, hi, 8 * r, PANEL_ORDER);
            let mut acc = (0.0, 0.0);
            for (&pz, &w) in rule.nodes.iter().zip(&rule.weights) {
                let (a, b) = w_at(state, pz, 2)?;
                acc.0 += w * a;
                acc.1 += w * b;
            }
            Ok(acc)
        },
        |a, b| (a.0 - b.0).abs().max((a.1 - b.1).abs()),
        |a| a.0 + a.1,
    )
}
