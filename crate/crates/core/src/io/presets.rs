//! Built-in scenarios, one per standard plot.

use crate::error::{Error, Result};
use crate::io::config::{parse_config_with, RunConfig};

macro_rules! preset {
    ($name:literal) => {
        ($name, include_str!(concat!("../../presets/", $name, ".toml")))
    };
}

/// (name, TOML text) pairs; the files live in `crates/core/presets/`.
pub const PRESETS: &[(&str, &str)] = &[
    preset!("fig1a"),
    preset!("fig1b"),
    preset!("fig1b-text"),
    preset!("fig2a"),
    preset!("fig2b"),
    preset!("fig3a"),
    preset!("fig3b"),
    preset!("fig4"),
    preset!("fig5"),
    preset!("fig6"),
    preset!("fig7"),
    preset!("fig7-text"),
];

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            Error::Config(format!(
                "unknown preset `{name}`; available: {}",
                preset_names().collect::<Vec<_>>().join(", ")
            ))
        })
}

/// First comment line of the preset file.
pub fn preset_title(name: &str) -> Result<&'static str> {
    Ok(preset_text(name)?
        .lines()
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .map(str::trim)
        .unwrap_or(""))
}

pub fn preset(name: &str) -> Result<RunConfig> {
    preset_with(name, &[])
}

pub fn preset_with(name: &str, overrides: &[String]) -> Result<RunConfig> {
    parse_config_with(preset_text(name)?, overrides)
}
