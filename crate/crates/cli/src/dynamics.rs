//! Tavis-Cummings evolution against the resonant effective model.

use crate::output::{fmt_f64, Table};
use crate::scenario::Scenario;
use crate::CliError;
use cavity_sense::simulator::{
    build_hamiltonian, default_n_max, evolve_unitary, FockOp, HamiltonianSpec, JointSpace, JointState, SimConfig, SpinOp, SpinSpace,
};
use cavity_sense::SpinAxis;
use num_complex::Complex64;
use rayon::prelude::*;

pub const DYNAMICS_COLUMNS: &[&str] =
    &["t", "sz_tavis_cummings", "sz_effective", "sz_effective_corrected", "qfi_db_tavis_cummings", "qfi_db_effective_corrected"];

/// ⟨S_z⟩ and 4⟨ΔY²⟩ sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub t: Vec<f64>,
    pub sz: Vec<f64>,
    pub qfi: Vec<f64>,
}

/// Evolves |−z⟩|α⟩ under `spec`, sampling `points` times in [0, t_stop].
pub fn trace(
    spec: HamiltonianSpec,
    n: u64,
    alpha: f64,
    t_stop: f64,
    points: usize,
    n_max: Option<usize>,
    cfg: &SimConfig,
) -> cavity_sense::Result<Trace> {
    let space = JointSpace::new(SpinSpace::Dicke(n), n_max.unwrap_or_else(|| default_n_max(alpha)))?;
    let h = build_hamiltonian(&spec, &space, cfg)?;
    let sz = space.spin_op(SpinOp::Z);
    let y = space.fock_op(FockOp::Y);
    let mut state = JointState::coherent(space, SpinAxis::MinusZ, Complex64::new(alpha, 0.0))?;
    let dt = t_stop / (points - 1) as f64;
    let mut out = Trace { t: Vec::with_capacity(points), sz: Vec::with_capacity(points), qfi: Vec::with_capacity(points) };
    for i in 0..points {
        if i > 0 {
            state = evolve_unitary(&state, &h, dt, cfg)?;
        }
        out.t.push(i as f64 * dt);
        out.sz.push(state.expect(&sz).re);
        out.qfi.push(4.0 * state.variance(&y));
    }
    Ok(out)
}

/// Local maxima (t, value) with parabolic refinement.
pub fn peaks(t: &[f64], v: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let (a, b, c) = (v[i - 1], v[i], v[i + 1]);
            let denom = a - 2.0 * b + c;
            let (shift, top) = if denom < 0.0 {
                let s = 0.5 * (a - c) / denom;
                (s, b - 0.25 * (a - c) * s)
            } else {
                (0.0, b)
            };
            out.push((t[i] + shift * (t[i + 1] - t[i]), top));
        }
    }
    out
}

/// max_k |peak_a[k] − peak_b[k]| / (N/2) over the common peaks.
pub fn envelope_discrepancy(a: &[(f64, f64)], b: &[(f64, f64)], n: u64) -> Option<f64> {
    let k = a.len().min(b.len());
    if k == 0 {
        return None;
    }
    Some(a.iter().zip(b).take(k).map(|(x, y)| (x.1 - y.1).abs()).fold(0.0, f64::max) / (n as f64 / 2.0))
}

/// The three models used in comparisons: TC, effective, effective with the frequency correction.
pub fn models(g: f64, alpha: f64) -> [HamiltonianSpec; 3] {
    let nbar = alpha * alpha;
    [
        HamiltonianSpec::TavisCummings { g, delta_c: 0.0 },
        HamiltonianSpec::ResonantEffective { g, nbar, include_correction: false },
        HamiltonianSpec::ResonantEffective { g, nbar, include_correction: true },
    ]
}

/// TC and corrected-effective ⟨S_z⟩ envelopes and their discrepancy.
pub fn compare(n: u64, alpha: f64, g: f64, t_stop: f64, points: usize, cfg: &SimConfig) -> cavity_sense::Result<f64> {
    let [tc, _, eff] = models(g, alpha);
    let (a, b) = rayon::join(|| trace(tc, n, alpha, t_stop, points, None, cfg), || trace(eff, n, alpha, t_stop, points, None, cfg));
    let (a, b) = (a?, b?);
    envelope_discrepancy(&peaks(&a.t, &a.sz), &peaks(&b.t, &b.sz), n)
        .ok_or_else(|| cavity_sense::Error::Numeric("no oscillation peaks in the sampled window".into()))
}

pub fn run_dynamics(s: &Scenario) -> Result<Table, CliError> {
    let spec = s.dynamics.ok_or_else(|| CliError::Numeric("scenario has no dynamics section".into()))?;
    let p = &s.params;
    let cfg = SimConfig { max_bytes: s.max_bytes, ..SimConfig::default() };
    let traces: Vec<Trace> = models(p.g, p.alpha)
        .par_iter()
        .map(|&m| trace(m, p.n, p.alpha, spec.t_stop, spec.points, spec.n_max, &cfg))
        .collect::<cavity_sense::Result<_>>()
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let mut t = Table::new(s.header(), DYNAMICS_COLUMNS);
    if let Some(title) = &s.title {
        t.comment(title);
    }
    t.comment(format!("n = {}, alpha = {}, g = {}, initial state |-z>|alpha>", p.n, fmt_f64(p.alpha), fmt_f64(p.g)));
    let pk: Vec<Vec<(f64, f64)>> = traces.iter().map(|tr| peaks(&tr.t, &tr.sz)).collect();
    if let Some(d) = envelope_discrepancy(&pk[0], &pk[2], p.n) {
        t.comment(format!("envelope_discrepancy = {}", fmt_f64(d)));
    }
    t.comment(format!("n_over_alpha_sq = {}", fmt_f64(p.n_f64() / (p.alpha * p.alpha))));
    let db = |q: f64| fmt_f64(10.0 * (q / 4.0).log10());
    for i in 0..spec.points {
        t.rows.push(vec![
            fmt_f64(traces[0].t[i]),
            fmt_f64(traces[0].sz[i]),
            fmt_f64(traces[1].sz[i]),
            fmt_f64(traces[2].sz[i]),
            db(traces[0].qfi[i]),
            db(traces[2].qfi[i]),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_refinement_recovers_cosine_maxima() {
        let t: Vec<f64> = (0..400).map(|i| i as f64 * 0.05).collect();
        let v: Vec<f64> = t.iter().map(|x| (2.0 * x).cos() * (-0.05 * x).exp()).collect();
        let p = peaks(&t, &v);
        assert!(p.len() >= 5);
        assert!((p[0].0 - std::f64::consts::PI).abs() < 0.02);
    }

    #[test]
    fn single_atom_rabi_frequency() {
        // the corrected effective model and TC share the Rabi frequency 2g√n̄
        let cfg = SimConfig::default();
        let [tc, _, eff] = models(1.0, 4.0);
        let a = trace(tc, 1, 4.0, 3.0, 301, None, &cfg).unwrap();
        let b = trace(eff, 1, 4.0, 3.0, 301, None, &cfg).unwrap();
        let pa = peaks(&a.t, &a.sz);
        let pb = peaks(&b.t, &b.sz);
        assert!((pa[0].0 - pb[0].0).abs() < 0.05 * pa[0].0);
        assert!((pa[0].0 - std::f64::consts::PI / 8.0).abs() < 0.05 * pa[0].0);
    }
}
