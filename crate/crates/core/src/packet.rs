//! Gaussian initial states with arbitrary bispinor polarization.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BispinorField, PositionGrid};
use crate::spinor::{Bispinor, Momentum3};

/// |f(p_max)|² / |f|²_peak at the momentum cutoff used by all quadratures.
pub const MOMENTUM_CUTOFF_RATIO: f64 = 1e-14;

/// Stricter cutoff for integrals linear in f (field synthesis): |f|/peak < 1e-14.
pub const AMPLITUDE_CUTOFF_RATIO: f64 = 1e-28;

/// Relative deviation of the sampled norm from 1 beyond which a grid is rejected.
pub const RESOLUTION_TOLERANCE: f64 = 0.01;

/// Gaussian envelope F(ρ, z) e^{imα}, transverse width `d`, longitudinal width `delta`
/// and mean longitudinal wavenumber `k0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    pub d: f64,
    pub delta: f64,
    pub k0: f64,
    #[serde(default)]
    pub m_axial: i32,
}

impl GaussianPacket {
    pub fn new(d: f64, delta: f64, k0: f64) -> Result<Self> {
        Self::with_axial(d, delta, k0, 0)
    }

    pub fn with_axial(d: f64, delta: f64, k0: f64, m_axial: i32) -> Result<Self> {
        let p = GaussianPacket {
            d,
            delta,
            k0,
            m_axial,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::InvalidInput(format!("packet width d must be > 0, got {}", self.d)));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "packet width delta must be > 0, got {}",
                self.delta
            )));
        }
        if !self.k0.is_finite() {
            return Err(Error::InvalidInput("k0 must be finite".into()));
        }
        Ok(())
    }

    /// Normalization π^{-3/4} / (d √Δ) of the position envelope.
    pub fn position_prefactor(&self) -> f64 {
        1.0 / (self.d * self.delta.sqrt() * PI.powf(0.75))
    }

    /// Normalization d √Δ π^{-3/4} of the momentum envelope; fixed by ∫|f|² d³p = 1.
    pub fn momentum_prefactor(&self) -> f64 {
        self.d * self.delta.sqrt() / PI.powf(0.75)
    }

    /// Axially symmetric part F(ρ, z) including the e^{i k0 z} carrier.
    pub fn envelope_rz(&self, rho: f64, z: f64) -> Complex64 {
        let a = -rho * rho / (2.0 * self.d * self.d) - z * z / (2.0 * self.delta * self.delta);
        Complex64::from_polar(self.position_prefactor() * a.exp(), self.k0 * z)
    }

    /// f(p⊥, p_z), real for this family.
    pub fn momentum_rz(&self, p_perp: f64, pz: f64) -> f64 {
        let dz = pz - self.k0;
        let a = -p_perp * p_perp * self.d * self.d / 2.0 - dz * dz * self.delta * self.delta / 2.0;
        self.momentum_prefactor() * a.exp()
    }

    /// |f(p⊥, p_z)|².
    pub fn momentum_density(&self, p_perp: f64, pz: f64) -> f64 {
        let f = self.momentum_rz(p_perp, pz);
        f * f
    }

    /// (p⊥_max, p_z range) outside of which |f|²/peak < [`MOMENTUM_CUTOFF_RATIO`].
    pub fn momentum_cutoffs(&self) -> (f64, f64, f64) {
        self.momentum_cutoffs_at(MOMENTUM_CUTOFF_RATIO)
    }

    /// Cutoffs where |f|²/peak falls below `ratio`.
    pub fn momentum_cutoffs_at(&self, ratio: f64) -> (f64, f64, f64) {
        let s = (-ratio.ln()).sqrt();
        let pz = s / self.delta;
        (s / self.d, self.k0 - pz, self.k0 + pz)
    }

    pub fn is_spherical(&self) -> bool {
        (self.d - self.delta).abs() <= 1e-12 * self.d
    }
}

/// Which of the two worked polarizations a state carries, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolarizationKind {
    /// (1, 0, 1, 0)/√2: axially symmetric evolution.
    ExampleI,
    /// (1, 0, 0, 1)/√2: axial symmetry lost for t > 0.
    ExampleII,
    General,
}

/// Envelope plus a unit-norm polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedState {
    pub packet: GaussianPacket,
    pub phi: Bispinor,
}

impl PolarizedState {
    /// Normalizes `phi`; a zero polarization is rejected.
    pub fn new(packet: GaussianPacket, phi: Bispinor) -> Result<Self> {
        packet.validate()?;
        Ok(PolarizedState {
            packet,
            phi: phi.normalized()?,
        })
    }

    pub fn example_i(packet: GaussianPacket) -> Self {
        PolarizedState {
            packet,
            phi: example_i_polarization(),
        }
    }

    pub fn example_ii(packet: GaussianPacket) -> Self {
        PolarizedState {
            packet,
            phi: example_ii_polarization(),
        }
    }

    pub fn kind(&self) -> PolarizationKind {
        classify_polarization(&self.phi)
    }

    /// F(r) at a Cartesian point, including the e^{imα} factor.
    pub fn envelope_position(&self, r: [f64; 3]) -> Complex64 {
        let [x, y, z] = r;
        let rho = x.hypot(y);
        let base = self.packet.envelope_rz(rho, z);
        if self.packet.m_axial == 0 {
            base
        } else {
            base * Complex64::from_polar(1.0, self.packet.m_axial as f64 * y.atan2(x))
        }
    }

    /// f(p); only the m = 0 envelope has a closed-form transform here.
    pub fn envelope_momentum(&self, p: Momentum3) -> Result<Complex64> {
        if self.packet.m_axial != 0 {
            return Err(Error::Unsupported(
                "closed-form momentum envelope requires m_axial = 0".into(),
            ));
        }
        let [p1, p2, p3] = p.0;
        Ok(Complex64::new(self.packet.momentum_rz(p1.hypot(p2), p3), 0.0))
    }

    /// Ψ(r, 0) = F(r) φ.
    pub fn initial_value(&self, r: [f64; 3]) -> Bispinor {
        self.phi * self.envelope_position(r)
    }
}

pub fn example_i_polarization() -> Bispinor {
    Bispinor::from_real([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0])
}

pub fn example_ii_polarization() -> Bispinor {
    Bispinor::from_real([FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])
}

/// Matches a unit polarization against the two worked examples (up to a global phase).
pub fn classify_polarization(phi: &Bispinor) -> PolarizationKind {
    let same = |target: Bispinor| (phi.inner(&target).norm() - 1.0).abs() < 1e-12;
    if same(example_i_polarization()) {
        PolarizationKind::ExampleI
    } else if same(example_ii_polarization()) {
        PolarizationKind::ExampleII
    } else {
        PolarizationKind::General
    }
}

/// Samples F(r)·φ on every node without any resolution check.
pub fn sample_initial_field(state: &PolarizedState, grid: PositionGrid) -> BispinorField {
    BispinorField::from_fn(grid, 0.0, |r| state.initial_value(r))
}

/// Samples the initial state and rejects grids whose discrete norm is off by more than 1%.
pub fn initial_bispinor_field(state: &PolarizedState, grid: PositionGrid) -> Result<BispinorField> {
    let field = sample_initial_field(state, grid);
    let discrete_norm = field.norm();
    if (discrete_norm - 1.0).abs() > RESOLUTION_TOLERANCE {
        return Err(Error::UnderResolved { discrete_norm });
    }
    Ok(field)
}
