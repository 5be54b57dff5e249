//! Exact evolution in momentum space and synthesis back to position space.

pub mod cartesian;
pub mod cylindrical;
pub mod mode;
pub mod rule;
pub mod split;

pub use cartesian::{PlaneInterpolant, SpectralEngine};
pub use cylindrical::{synthesize_cylindrical, CylindricalField, RzGrid};
pub use mode::{
    evolve_mode_example_i, evolve_mode_example_ii, evolve_mode_general, propagate, propagator,
    MomentumModeState,
};
pub use split::{energy_split, w_curve, WCurve};

use crate::error::Result;
use crate::grid::{BispinorField, PositionGrid};
use crate::packet::PolarizedState;

/// One-shot Cartesian synthesis of Ψ(r, t).
pub fn synthesize_cartesian(state: &PolarizedState, grid: PositionGrid, t: f64) -> Result<BispinorField> {
    SpectralEngine::new(*state, grid).map(|e| e.synthesize(t))
}
