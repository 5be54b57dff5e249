//! Run configuration, presets, the scenario driver and the on-disk formats.

pub mod config;
pub mod dump;
pub mod presets;
pub mod scenario;
pub mod series_csv;
pub mod slice;

pub use config::{parse_config, parse_config_with, override_config, EngineChoice, Observable, RunConfig};
pub use dump::{read_dump, write_dump};
pub use presets::{preset, preset_names, preset_with};
pub use scenario::{run_scenario, ScenarioReport};
pub use series_csv::{read_series_file, write_series_file, SeriesRow};
pub use slice::{export_slice, import_slice, TextSlice};
