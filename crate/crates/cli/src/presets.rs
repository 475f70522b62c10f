//! Committed figure configurations.

use crate::config::RawConfig;
use crate::output::Artifact;
use crate::scenario::Scenario;
use crate::{run_scenario, CliError};
use std::path::Path;

/// (file name, contents) of every preset, grouped by figure below.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig1.conf", include_str!("../presets/fig1.conf")),
    ("fig2.conf", include_str!("../presets/fig2.conf")),
    ("fig3.conf", include_str!("../presets/fig3.conf")),
    ("fig4.conf", include_str!("../presets/fig4.conf")),
    ("fig5a.conf", include_str!("../presets/fig5a.conf")),
    ("fig5b.conf", include_str!("../presets/fig5b.conf")),
    ("fig6a.conf", include_str!("../presets/fig6a.conf")),
    ("fig6b.conf", include_str!("../presets/fig6b.conf")),
    ("fig7a.conf", include_str!("../presets/fig7a.conf")),
    ("fig7b.conf", include_str!("../presets/fig7b.conf")),
    ("fig7c.conf", include_str!("../presets/fig7c.conf")),
    ("fig8a.conf", include_str!("../presets/fig8a.conf")),
    ("fig8b.conf", include_str!("../presets/fig8b.conf")),
    ("fig8c.conf", include_str!("../presets/fig8c.conf")),
    ("fig9.conf", include_str!("../presets/fig9.conf")),
    ("fig10_phi_kappa_noisy.conf", include_str!("../presets/fig10_phi_kappa_noisy.conf")),
    ("fig10_phi_kappa_noiseless.conf", include_str!("../presets/fig10_phi_kappa_noiseless.conf")),
    ("fig10_phi_gamma_noisy.conf", include_str!("../presets/fig10_phi_gamma_noisy.conf")),
    ("fig10_phi_gamma_noiseless.conf", include_str!("../presets/fig10_phi_gamma_noiseless.conf")),
    ("fig10_sigma_kappa.conf", include_str!("../presets/fig10_sigma_kappa.conf")),
    ("fig10_sigma_gamma.conf", include_str!("../presets/fig10_sigma_gamma.conf")),
];

pub const FIGURES: &[&str] = &["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"];

/// Presets of `figure`: `fig5` covers `fig5a.conf` and `fig5b.conf`, `fig1` only `fig1.conf`.
pub fn presets_for(figure: &str) -> Vec<(&'static str, &'static str)> {
    PRESETS
        .iter()
        .copied()
        .filter(|(name, _)| {
            let rest = name.strip_prefix(figure).unwrap_or("0");
            !rest.starts_with(|c: char| c.is_ascii_digit())
        })
        .collect()
}

/// Parses one preset exactly as committed.
pub fn scenario(name: &str, text: &str) -> Result<Scenario, CliError> {
    let raw = RawConfig::parse(text, name)?;
    Ok(Scenario::from_raw(&raw, None)?)
}

/// Runs every preset of `figure`, placing outputs under `dir`.
pub fn run_figure(figure: &str, dir: &Path) -> Result<Vec<Artifact>, CliError> {
    let list = presets_for(figure);
    if list.is_empty() {
        return Err(CliError::Config(crate::config::ConfigError::global(format!(
            "unknown figure `{figure}`, expected one of {}",
            FIGURES.join(", ")
        ))));
    }
    let mut out = Vec::new();
    for (name, text) in list {
        let s = scenario(name, text)?;
        let file = s.output.clone().unwrap_or_else(|| Path::new(name).with_extension("csv"));
        out.extend(run_scenario(&s, Some(&dir.join(file)))?);
    }
    Ok(out)
}
