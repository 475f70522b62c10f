//! Time optimisation with closed-form comparison.

use crate::output::fmt_f64;
use crate::scenario::{Objective, Regime, Scenario};
use crate::sweep::{optimize_qfi, optimize_sensitivity, qfi_bracket, time_bracket};
use crate::CliError;
use cavity_sense::analytic::{
    gamma_sensitivity, ideal_sensitivity, kappa_optimum, qfi_loss_optimum, QfiMethod, WindowPosition, MAX_DENSE_N,
};
use cavity_sense::optimize::{Optimum, Trend};
use cavity_sense::{MeasurementAngle, SystemParams};

/// Numerical optimum next to its closed-form prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumReport {
    pub objective: Objective,
    pub regime: Regime,
    pub optimum: Optimum,
    pub predicted_t: Option<f64>,
    pub predicted_value: Option<f64>,
    pub window: Option<WindowPosition>,
}

impl OptimumReport {
    pub fn t_ratio(&self) -> Option<f64> {
        self.predicted_t.map(|p| self.optimum.t() / p)
    }

    pub fn value_ratio(&self) -> Option<f64> {
        self.predicted_value.map(|p| self.optimum.value() / p)
    }

    pub fn render(&self, header: &str) -> String {
        let status = match &self.optimum {
            Optimum::Interior { .. } => "interior",
            Optimum::Monotone { trend: Trend::Increasing, .. } => "monotone_increasing",
            Optimum::Monotone { trend: Trend::Decreasing, .. } => "monotone_decreasing",
        };
        let evals = match &self.optimum {
            Optimum::Interior { evaluations, .. } | Optimum::Monotone { evaluations, .. } => *evaluations,
        };
        let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_else(|| "none".into());
        let mut lines = vec![
            header.to_string(),
            format!("objective = {}", if self.objective == Objective::Gain { "gain" } else { "qfi" }),
            format!("regime = {}", self.regime.name()),
            format!("status = {status}"),
            format!("t_opt = {}", fmt_f64(self.optimum.t())),
            format!("value = {}", fmt_f64(self.optimum.value())),
            format!("evaluations = {evals}"),
            format!("closed_form_t_opt = {}", opt(self.predicted_t)),
            format!("closed_form_value = {}", opt(self.predicted_value)),
            format!("ratio_t = {}", opt(self.t_ratio())),
            format!("ratio_value = {}", opt(self.value_ratio())),
        ];
        if self.objective == Objective::Gain {
            let g = cavity_sense::metrological_gain(self.optimum.value()).unwrap_or(f64::NAN);
            lines.push(format!("gain_db = {}", fmt_f64(g)));
        }
        if let Some(w) = self.window {
            lines.push(format!("window = {}", format!("{w:?}").to_lowercase()));
        }
        lines.join("\n") + "\n"
    }
}

/// Closed-form optimal time and value for the gain objective.
pub fn predicted_gain_optimum(p: &SystemParams, regime: Regime, phi: MeasurementAngle) -> (Option<f64>, Option<f64>) {
    match regime {
        Regime::Kappa => match kappa_optimum(p) {
            Ok(o) => (Some(o.t_opt), Some(o.delta_beta_sq)),
            Err(_) => (None, None),
        },
        Regime::Gamma => {
            let t = 1.0 / (3.0 * p.gamma);
            let v = gamma_sensitivity(p, t, phi).ok().map(|g| g.short_time);
            (Some(t), v)
        }
        Regime::Ideal => {
            // sin(χτ/2)cos^{N−1}(χτ/2) peaks at tan²(χτ/2) = 1/(N − 1)
            if p.n < 2 {
                return (None, None);
            }
            let t = 2.0 * (1.0 / (p.n_f64() - 1.0).sqrt()).atan() / p.chi();
            let v = ideal_sensitivity(p, t, cavity_sense::analytic::Observable::SpinY).ok().map(|s| s.value);
            (Some(t), v)
        }
    }
}

pub fn run_optimize(s: &Scenario) -> Result<OptimumReport, CliError> {
    let p = &s.params;
    let numeric = |e: cavity_sense::Error| CliError::Numeric(e.to_string());
    match s.objective {
        Objective::Gain => {
            let (lo, hi) = s.grid.map(|g| (g.start, g.stop)).unwrap_or_else(|| time_bracket(p, s.regime));
            let optimum = optimize_sensitivity(p, &s.protocol, s.regime, lo, hi).map_err(numeric)?;
            let (predicted_t, predicted_value) = predicted_gain_optimum(p, s.regime, s.protocol.phi);
            Ok(OptimumReport { objective: s.objective, regime: s.regime, optimum, predicted_t, predicted_value, window: None })
        }
        Objective::Qfi => {
            let method = match s.method {
                crate::scenario::MethodSel::Eigendecomposition if p.n <= MAX_DENSE_N => QfiMethod::Eigendecomposition,
                _ => QfiMethod::GaussianAnalytic,
            };
            let (lo, hi) = s.grid.map(|g| (g.start, g.stop)).unwrap_or_else(|| qfi_bracket(p));
            let optimum = optimize_qfi(p, s.regime, method, lo, hi).map_err(numeric)?;
            let closed = (s.regime == Regime::Kappa).then(|| qfi_loss_optimum(p).ok()).flatten();
            Ok(OptimumReport {
                objective: s.objective,
                regime: s.regime,
                optimum,
                predicted_t: closed.map(|c| c.t_opt),
                predicted_value: closed.map(|c| c.reported),
                window: closed.map(|c| c.position),
            })
        }
    }
}
