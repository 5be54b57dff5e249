//! Natural units used by every public operation.
//!
//! ħ = m = c = 1. Lengths are in Compton wavelengths λ_k = ħ/mc, times in t₀ = λ_k/c,
//! momenta in mc, energies in mc² and velocities in c. For an electron
//! λ_k ≈ 3.8616e-13 m and t₀ ≈ 1.2881e-21 s.

/// Marker for the fixed convention ħ = m = c = 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitSystem;

impl UnitSystem {
    pub const HBAR: f64 = 1.0;
    pub const MASS: f64 = 1.0;
    pub const LIGHT_SPEED: f64 = 1.0;

    /// Reduced Compton wavelength of the electron in metres.
    pub const ELECTRON_COMPTON_WAVELENGTH_M: f64 = 3.861_592_679_6e-13;
    /// λ_k / c for the electron in seconds.
    pub const ELECTRON_TIME_UNIT_S: f64 = 1.288_088_668_2e-21;

    pub fn length_to_metres(self, length: f64) -> f64 {
        length * Self::ELECTRON_COMPTON_WAVELENGTH_M
    }

    pub fn time_to_seconds(self, time: f64) -> f64 {
        time * Self::ELECTRON_TIME_UNIT_S
    }
}
