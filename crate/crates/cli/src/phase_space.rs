//! Wigner panels and their quadrature-marginal cross-check.

use crate::output::{fmt_f64, sibling, stem_of, Artifact};
use crate::plot;
use crate::scenario::{Panel, Scenario};
use crate::CliError;
use cavity_sense::analytic::{bosonic_cat_components, wigner_cat, GridSpec, WignerGrid};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

/// One evaluated panel with its oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelResult {
    pub label: String,
    pub components: Vec<(Complex64, Complex64)>,
    pub grid: WignerGrid,
    /// max |∫W d(Im ζ) − P(x)| over the grid.
    pub marginal_error: f64,
}

/// Probability density of the quadrature x = Re ζ for 𝒩⁻¹ Σ w_j |β_j⟩,
/// using ψ_β(x) = (2/π)^{1/4} exp(−(x − β_r)² + 2iβ_i x − iβ_rβ_i).
pub fn quadrature_density(components: &[(Complex64, Complex64)], x: f64) -> f64 {
    let mut norm = Complex64::new(0.0, 0.0);
    for (wj, bj) in components {
        for (wk, bk) in components {
            let overlap = (-0.5 * bj.norm_sqr() - 0.5 * bk.norm_sqr() + bj.conj() * bk).exp();
            norm += wj.conj() * wk * overlap;
        }
    }
    let amp: Complex64 = components
        .iter()
        .map(|(w, b)| {
            let e = Complex64::new(-(x - b.re).powi(2), 2.0 * b.im * x - b.re * b.im);
            w * e.exp()
        })
        .sum();
    (2.0 / PI).sqrt() * amp.norm_sqr() / norm.re
}

/// max over grid columns of |Σ_rows W·Δ − P(x)|.
pub fn marginal_error(components: &[(Complex64, Complex64)], grid: &WignerGrid) -> f64 {
    let step = if grid.im.len() > 1 { grid.im[1] - grid.im[0] } else { 1.0 };
    grid.re
        .iter()
        .enumerate()
        .map(|(j, &x)| (grid.values.column(j).sum() * step - quadrature_density(components, x)).abs())
        .fold(0.0, f64::max)
}

fn components(s: &Scenario, panel: &Panel) -> cavity_sense::Result<(String, Vec<(Complex64, Complex64)>)> {
    match panel {
        Panel::Cat { chi_t, label } => {
            Ok((format!("chi_t_sqrt_n = {}", fmt_f64(*label)), bosonic_cat_components(s.params.n, s.params.alpha, *chi_t)?))
        }
        Panel::Amplitudes(c) => Ok(("amplitudes".to_string(), c.clone())),
    }
}

pub fn evaluate(s: &Scenario) -> Result<Vec<PanelResult>, CliError> {
    let spec = s.wigner.as_ref().ok_or_else(|| CliError::Numeric("scenario has no wigner section".into()))?;
    let mut out = Vec::new();
    for panel in &spec.panels {
        let (label, comps) = components(s, panel).map_err(|e| CliError::Numeric(e.to_string()))?;
        let reach = comps.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
        let half = spec.half.unwrap_or(reach + 4.0);
        let grid = wigner_cat(&comps, GridSpec::square(Complex64::new(0.0, 0.0), half, spec.step))
            .map_err(|e| CliError::Numeric(e.to_string()))?;
        let marginal_error = marginal_error(&comps, &grid);
        out.push(PanelResult { label, components: comps, grid, marginal_error });
    }
    Ok(out)
}

fn matrix_file(header: &str, r: &PanelResult) -> String {
    let g = &r.grid;
    let step = |v: &[f64]| if v.len() > 1 { v[1] - v[0] } else { 0.0 };
    let mut s = format!(
        "{header}\n# {}\n# re: start {} step {} count {}\n# im: start {} step {} count {}\n",
        r.label,
        fmt_f64(g.re[0]),
        fmt_f64(step(&g.re)),
        g.re.len(),
        fmt_f64(g.im[0]),
        fmt_f64(step(&g.im)),
        g.im.len()
    );
    for row in g.values.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.8e}")).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Matrix files, an oracle report and a plot script under `stem`.
pub fn artifacts(s: &Scenario, results: &[PanelResult], out: &Path) -> Vec<Artifact> {
    let stem = stem_of(out);
    let header = s.header();
    let mut files = Vec::new();
    let mut report = vec![header.clone(), "panel,label,integral,min,marginal_error".to_string()];
    let mut names = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let path = sibling(&stem, &format!(".panel{i}.dat"));
        names.push(path.file_name().unwrap().to_string_lossy().into_owned());
        files.push(Artifact::new(path, matrix_file(&header, r)));
        report.push(format!("{i},{},{},{},{}", r.label, fmt_f64(r.grid.integral()), fmt_f64(r.grid.min()), fmt_f64(r.marginal_error)));
    }
    files.push(Artifact::new(sibling(&stem, ".report.csv"), report.join("\n") + "\n"));
    files.push(Artifact::new(sibling(&stem, ".plot.py"), plot::wigner_script(&names)));
    files
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_coherent_state_marginal_is_gaussian() {
        let comps = vec![(Complex64::new(1.0, 0.0), Complex64::new(1.5, -0.5))];
        let p = quadrature_density(&comps, 1.5);
        assert!((p - (2.0 / PI).sqrt()).abs() < 1e-14);
        let grid = wigner_cat(&comps, GridSpec::square(Complex64::new(1.5, -0.5), 5.0, 0.1)).unwrap();
        assert!(marginal_error(&comps, &grid) < 1e-8);
    }

    #[test]
    fn cat_marginal_matches_oracle() {
        let comps = bosonic_cat_components(4, 2.0, 0.4).unwrap();
        let grid = wigner_cat(&comps, GridSpec::square(Complex64::new(0.0, 0.0), 6.0, 0.05)).unwrap();
        assert!((grid.integral() - 1.0).abs() < 1e-6);
        assert!(marginal_error(&comps, &grid) < 1e-6);
    }
}
