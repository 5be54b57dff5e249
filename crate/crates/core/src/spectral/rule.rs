//! Momentum-space quadrature over the support of a Gaussian envelope.
//!
//! Every momentum integral in the crate uses the same policy: cut the envelope where
//! |f|²/peak drops below 1e-14, tile (p⊥, p_z) with 16-point Gauss–Legendre panels narrow enough
//! for the fastest phase in the integrand, sample the azimuth uniformly, and confirm convergence
//! by doubling the panel count.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::packet::GaussianPacket;
use crate::quadrature::{PanelRule, PANEL_ORDER, PHASE_PER_PANEL};
use crate::spinor::Momentum3;

/// Uniform azimuth samples; exact for angular harmonics |m| < `AZIMUTH_POINTS`.
pub const AZIMUTH_POINTS: usize = 8;

/// Tensor rule in (p⊥, p_z, φ) with the cylindrical Jacobian folded into the weights.
#[derive(Debug, Clone)]
pub struct MomentumRule {
    pub perp: PanelRule,
    pub pz: PanelRule,
    pub azimuth: Vec<f64>,
}

/// Node of a [`MomentumRule`]: momentum and weight including p⊥ dp⊥ dp_z dφ.
#[derive(Debug, Clone, Copy)]
pub struct MomentumNode {
    pub p: Momentum3,
    pub p_perp: f64,
    pub weight: f64,
}

impl MomentumRule {
    /// `rate_perp`, `rate_z`: largest phase derivatives (rad per unit momentum) of the integrand
    /// in each direction. `refine` multiplies the panel count.
    pub fn new(packet: &GaussianPacket, rate_perp: f64, rate_z: f64, refine: usize) -> Self {
        let (pmax, lo, hi) = packet.momentum_cutoffs();
        let refine = refine.max(1);
        MomentumRule {
            perp: panels(0.0, pmax, rate_perp, refine),
            pz: panels(lo, hi, rate_z, refine),
            azimuth: (0..AZIMUTH_POINTS)
                .map(|k| 2.0 * PI * (k as f64 + 0.25) / AZIMUTH_POINTS as f64)
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.perp.len() * self.pz.len() * self.azimuth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes grouped by (p⊥, p_z) pair, azimuth fastest.
    pub fn nodes(&self) -> impl Iterator<Item = MomentumNode> + '_ {
        let dphi = 2.0 * PI / self.azimuth.len() as f64;
        self.perp.nodes.iter().zip(&self.perp.weights).flat_map(move |(&q, &wq)| {
            self.pz.nodes.iter().zip(&self.pz.weights).flat_map(move |(&pz, &wz)| {
                self.azimuth.iter().map(move |&phi| MomentumNode {
                    p: Momentum3::new(q * phi.cos(), q * phi.sin(), pz),
                    p_perp: q,
                    weight: q * wq * wz * dphi,
                })
            })
        })
    }
}

fn panels(a: f64, b: f64, rate: f64, refine: usize) -> PanelRule {
    let base = ((b - a) * rate.abs() / PHASE_PER_PANEL).ceil() as usize;
    PanelRule::uniform(a, b, base.max(4) * refine, PANEL_ORDER)
}

/// Evaluates `eval` with refinement 1, 2, 4, … until two successive results agree within `tol`
/// (measured by `distance`), returning the finer one.
pub fn converge<T>(
    tol: f64,
    mut eval: impl FnMut(usize) -> Result<T>,
    distance: impl Fn(&T, &T) -> f64,
    magnitude: impl Fn(&T) -> f64,
) -> Result<T> {
    let mut coarse = eval(1)?;
    let mut refine = 2;
    let mut last_err = f64::INFINITY;
    while refine <= 8 {
        let fine = eval(refine)?;
        last_err = distance(&coarse, &fine);
        if last_err <= tol {
            return Ok(fine);
        }
        coarse = fine;
        refine *= 2;
    }
    Err(Error::Quadrature {
        estimate: magnitude(&coarse),
        error: last_err,
        tolerance: tol,
    })
}
