//! Densities, expectation values, oracles, Zitterbewegung fits and symmetry checks.

pub mod density;
pub mod oracle;
pub mod series;
pub mod symmetry;
pub mod zb;

pub use density::{
    mean_position, probability_density, spin_density, spin_expectation, velocity_expectation_grid,
    velocity_expectation_position, SpinDensityField,
};
pub use oracle::{
    drift_velocity_general, oracle_series, spin_oracle, velocity_oracle_example_i,
    velocity_oracle_example_ii, DriftVelocity, OracleTable, Quantity,
};
pub use series::{ObservableSeries, Provenance, SeriesValues};
pub use symmetry::{
    angular_momentum_residual, apply_discrete_symmetry, axial_metric_spectral, symmetry_metrics,
    DiscreteSymmetry, SymmetryKind,
};
pub use zb::{zb_fit, ZbFit};
