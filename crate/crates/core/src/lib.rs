//! Free 3D Dirac wave packets in natural units (ħ = m = c = 1).
//!
//! Two independent engines evolve a polarized Gaussian bispinor packet:
//!
//! * [`spectral`]: exact per-mode evolution in momentum space, synthesized back to position
//!   space by FFT on a Cartesian grid or by Bessel-kernel quadrature on a (ρ, z) half plane.
//! * [`fdtd`]: a leap-frog finite-difference integrator with a central-difference Hamiltonian.
//!
//! [`observables`] computes densities, spin densities, velocity and spin expectations (both as
//! grid moments and as quadrature oracles), the Zitterbewegung fit, the constant drift velocity
//! for arbitrary polarization and the discrete-symmetry metrics. [`io`] holds run configuration,
//! presets and the on-disk formats used by the `diracsim` command-line driver.

pub mod bessel;
pub mod error;
pub mod fdtd;
pub mod fft;
pub mod grid;
pub mod io;
pub mod observables;
pub mod packet;
pub mod quadrature;
pub mod spectral;
pub mod spinor;
pub mod units;

pub use error::{Error, Result};
pub use grid::{BispinorField, MomentumField, PositionGrid};
pub use packet::{GaussianPacket, PolarizedState};
pub use spinor::{Bispinor, DiracMatrix, FreeSpinor, Momentum3};
