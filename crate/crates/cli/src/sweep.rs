//! Sensitivity and QFI curves over one sweep axis.

use crate::output::{fmt_f64, fmt_opt, Table};
use crate::scenario::{MethodSel, Model, Regime, Scenario, SweepAxis};
use crate::CliError;
use cavity_sense::analytic::{
    describe_flags, detection_noise_sensitivity, gamma_moments, gamma_sensitivity, gaussian_qfi, ideal_moments, ideal_qfi, kappa_moments,
    kappa_optimum, kappa_protocol_sensitivity, loss_spin_density, qfi_loss_optimum, qfi_with_loss, NoiseRegime, QfiMethod, Validity,
    MAX_DENSE_N,
};
use cavity_sense::moments::qfi_gain_db;
use cavity_sense::optimize::{minimize_time, Optimum, DEFAULT_REL_TOL};
use cavity_sense::{auto_phi, metrological_gain, sensitivity_from_moments, Error, MeasurementAngle, ProtocolConfig, SystemParams};
use rayon::prelude::*;

pub const SENSITIVITY_COLUMNS: &[&str] = &["sweep_value", "delta_beta_sq", "gain_db", "qfi_bound_db", "validity_flags"];
pub const QFI_COLUMNS: &[&str] = &["sweep_value", "method", "qfi", "qfi_bound_db", "validity_flags"];

/// Half-width, in decades, of the time bracket around a closed-form optimum.
const BRACKET_DECADES: f64 = 1.0;

/// Parameters and schedule at one sweep value.
pub fn point(s: &Scenario, x: f64) -> (SystemParams, ProtocolConfig) {
    let mut p = s.params;
    let mut c = s.protocol;
    match s.sweep {
        Some(SweepAxis::Time) => {
            c.tau1 = x;
            c.tau2 = x;
        }
        Some(SweepAxis::Tau2) => c.tau2 = x,
        Some(SweepAxis::Phi) => c.phi = MeasurementAngle::Fixed(x),
        Some(SweepAxis::SigmaDet) => c.sigma_det = x,
        Some(SweepAxis::KappaRatio) => p.kappa = p.chi() * p.alpha * p.n_f64().sqrt() / x,
        None => {}
    }
    (p, c)
}

fn angle(phi: MeasurementAngle, m: &cavity_sense::MomentSet) -> f64 {
    match phi {
        MeasurementAngle::Fixed(p) => p,
        MeasurementAngle::Auto => auto_phi(m),
    }
}

fn kappa_flags(p: &SystemParams, tau: f64) -> Vec<Validity> {
    let chi_sqrt_n = p.chi() * p.n_f64().sqrt();
    vec![Validity::new("chi_sqrt_n_tau_small", chi_sqrt_n * tau <= 0.1), Validity::new("kappa_tau_small", p.kappa * tau <= 0.1)]
}

/// (δβ)² at β = 0 with its validity conditions.
pub fn sensitivity(p: &SystemParams, c: &ProtocolConfig, regime: Regime) -> cavity_sense::Result<(f64, Vec<Validity>)> {
    c.validate()?;
    match regime {
        Regime::Ideal => {
            let m = if c.tau1 == c.tau2 {
                ideal_moments(p, c.tau1, 0.0)?
            } else {
                kappa_moments(&SystemParams { kappa: 0.0, ..*p }, c.tau1, c.tau2, 0.0)?
            };
            let v = sensitivity_from_moments(&m, angle(c.phi, &m), c.sigma_det)?;
            Ok((v, vec![Validity::new("dissipation_ignored", p.kappa == 0.0 && p.gamma == 0.0)]))
        }
        Regime::Kappa => {
            let v = kappa_protocol_sensitivity(p, c.tau1, c.tau2, c.phi, c.sigma_det)?;
            Ok((v, kappa_flags(p, c.tau1.max(c.tau2))))
        }
        Regime::Gamma => {
            if c.tau1 != c.tau2 {
                return Err(Error::InvalidParameter("the gamma regime needs tau1 = tau2".into()));
            }
            let m = gamma_moments(p, c.tau1, 0.0)?;
            let phi = angle(c.phi, &m);
            let v = sensitivity_from_moments(&m, phi, c.sigma_det)?;
            let flags = gamma_sensitivity(p, c.tau1, MeasurementAngle::Fixed(phi))?.flags;
            Ok((v, flags))
        }
    }
}

/// Short-time (δβ)² with detection noise; φ is taken from the signal axis.
pub fn closed_form_sensitivity(p: &SystemParams, c: &ProtocolConfig, regime: Regime) -> cavity_sense::Result<(f64, Vec<Validity>)> {
    let MeasurementAngle::Fixed(phi) = c.phi else {
        return Err(Error::InvalidParameter("closed-form sensitivity needs a fixed phi".into()));
    };
    let noise = match regime {
        Regime::Ideal => NoiseRegime::Ideal,
        Regime::Kappa => NoiseRegime::Kappa,
        Regime::Gamma => NoiseRegime::Gamma,
    };
    let d = detection_noise_sensitivity(p, c.tau1, phi, c.sigma_det, noise)?;
    Ok((d.value, vec![Validity::new("detection_noise_robust", d.robust)]))
}

/// QFI of the generated state at time t, where a formula exists.
pub fn qfi_bound(p: &SystemParams, t: f64, regime: Regime) -> Option<f64> {
    match regime {
        Regime::Ideal => Some(ideal_qfi(p, t).result.value),
        Regime::Kappa => Some(gaussian_qfi(p, t)),
        Regime::Gamma => None,
    }
}

/// Time bracket around the closed-form optimum of the regime.
pub fn time_bracket(p: &SystemParams, regime: Regime) -> (f64, f64) {
    let centre = match regime {
        Regime::Kappa if p.kappa > 0.0 => kappa_optimum(p).map(|o| o.t_opt).unwrap_or(1.0),
        Regime::Gamma if p.gamma > 0.0 => 1.0 / (3.0 * p.gamma),
        _ => 2.0 * (1.0 / (p.n_f64() - 1.0).max(1.0).sqrt()).atan() / p.chi(),
    };
    let w = 10f64.powf(BRACKET_DECADES);
    (centre / w, centre * w)
}

/// Minimum of (δβ)² over a symmetric schedule τ₁ = τ₂ = t.
pub fn optimize_sensitivity(p: &SystemParams, c: &ProtocolConfig, regime: Regime, lo: f64, hi: f64) -> cavity_sense::Result<Optimum> {
    minimize_time(|t| sensitivity(p, &ProtocolConfig { tau1: t, tau2: t, ..*c }, regime).map(|r| r.0), lo, hi, DEFAULT_REL_TOL)
}

fn row_error(e: &Error) -> String {
    match e {
        Error::Diverging(_) | Error::InsensitiveWorkingPoint => "diverging".into(),
        Error::SeriesNonConvergence { .. } => "series_nonconvergence".into(),
        Error::Overflow(_) => "overflow".into(),
        _ => "numeric_failure".into(),
    }
}

fn sensitivity_row(s: &Scenario, x: f64) -> Vec<String> {
    let (p, c) = point(s, x);
    let (res, qfi) = if s.sweep == Some(SweepAxis::KappaRatio) {
        let (lo, hi) = time_bracket(&p, s.regime);
        match optimize_sensitivity(&p, &c, s.regime, lo, hi) {
            Ok(o) => {
                let mut flags = vec![Validity::new("interior_optimum", o.is_interior())];
                flags.extend(kappa_flags(&p, o.t()));
                (Ok((o.value(), flags)), qfi_bound(&p, o.t(), s.regime))
            }
            Err(e) => (Err(e), None),
        }
    } else {
        let res = match s.model {
            Model::Exact => sensitivity(&p, &c, s.regime),
            Model::ClosedForm => closed_form_sensitivity(&p, &c, s.regime),
        };
        (res, qfi_bound(&p, c.tau1, s.regime))
    };
    let qfi_db = qfi.map(qfi_gain_db);
    match res {
        Ok((v, flags)) => vec![
            fmt_f64(x),
            fmt_f64(v),
            metrological_gain(v).map(fmt_f64).unwrap_or_else(|_| "nan".into()),
            fmt_opt(qfi_db),
            describe_flags(&flags),
        ],
        Err(e) => vec![fmt_f64(x), "nan".into(), "nan".into(), fmt_opt(qfi_db), row_error(&e)],
    }
}

fn sweep_values(s: &Scenario) -> Result<Vec<f64>, CliError> {
    s.grid.map(|g| g.values()).ok_or_else(|| CliError::Config(crate::config::ConfigError::global("sweep needs a grid")))
}

fn describe(s: &Scenario, t: &mut Table) {
    if let Some(title) = &s.title {
        t.comment(title);
    }
    let p = &s.params;
    t.comment(format!(
        "n = {}, alpha = {}, chi = {}, kappa = {}, gamma = {}, regime = {}, sweep = {}",
        p.n,
        fmt_f64(p.alpha),
        fmt_f64(p.chi()),
        fmt_f64(p.kappa),
        fmt_f64(p.gamma),
        s.regime.name(),
        s.sweep.map(|a| a.name()).unwrap_or("none")
    ));
}

/// Sensitivity curve.
pub fn run_sensitivity(s: &Scenario) -> Result<Table, CliError> {
    let xs = sweep_values(s)?;
    let rows: Vec<Vec<String>> = xs.par_iter().map(|&x| sensitivity_row(s, x)).collect();
    let mut t = Table::new(s.header(), SENSITIVITY_COLUMNS);
    describe(s, &mut t);
    if rows.iter().all(|r| r[1] == "nan") {
        return Err(CliError::Numeric(format!("every sweep point failed (first: {})", rows[0][4])));
    }
    t.rows = rows;
    Ok(t)
}

fn methods(s: &Scenario) -> Vec<QfiMethod> {
    match s.method {
        MethodSel::Eigendecomposition => vec![QfiMethod::Eigendecomposition],
        MethodSel::GaussianAnalytic => vec![QfiMethod::GaussianAnalytic],
        MethodSel::Both => vec![QfiMethod::Eigendecomposition, QfiMethod::GaussianAnalytic],
    }
}

fn method_name(m: QfiMethod) -> &'static str {
    match m {
        QfiMethod::Eigendecomposition => "eigendecomposition",
        QfiMethod::GaussianAnalytic => "gaussian_analytic",
    }
}

/// Lossy QFI of the state generated in time t.
pub fn qfi_value(p: &SystemParams, t: f64, regime: Regime, method: QfiMethod) -> cavity_sense::Result<(f64, Vec<Validity>)> {
    if regime == Regime::Ideal || p.kappa == 0.0 {
        let q = ideal_qfi(p, t).result;
        return Ok((q.value, q.flags));
    }
    let sqrt_n = p.n_f64().sqrt();
    match method {
        QfiMethod::GaussianAnalytic => Ok((
            gaussian_qfi(p, t),
            vec![
                Validity::new("chi_sqrt_n_below_kappa", p.chi() * sqrt_n <= 0.1 * p.kappa),
                Validity::new("chi_sqrt_n_t_small", p.chi() * sqrt_n * t <= 0.1),
            ],
        )),
        QfiMethod::Eigendecomposition => {
            let rho = loss_spin_density(p, t)?;
            let q = qfi_with_loss(&rho, p, t, QfiMethod::Eigendecomposition)?;
            Ok((q.value, q.flags))
        }
    }
}

/// Largest QFI over t in [lo, hi].
pub fn optimize_qfi(p: &SystemParams, regime: Regime, method: QfiMethod, lo: f64, hi: f64) -> cavity_sense::Result<Optimum> {
    let o = minimize_time(|t| qfi_value(p, t, regime, method).map(|q| -q.0), lo, hi, DEFAULT_REL_TOL)?;
    Ok(match o {
        Optimum::Interior { t, value, evaluations } => Optimum::Interior { t, value: -value, evaluations },
        Optimum::Monotone { trend, t, value, evaluations } => Optimum::Monotone { trend, t, value: -value, evaluations },
    })
}

/// Time bracket for QFI maximisation.
pub fn qfi_bracket(p: &SystemParams) -> (f64, f64) {
    let centre = if p.kappa > 0.0 { qfi_loss_optimum(p).map(|o| o.t_opt).unwrap_or(1.0) } else { std::f64::consts::PI / p.chi() };
    (centre / 4.0, centre * 4.0)
}

fn qfi_row(s: &Scenario, x: f64, method: QfiMethod) -> Vec<String> {
    let (p, _) = point(s, x);
    let res = if s.sweep == Some(SweepAxis::KappaRatio) {
        let (lo, hi) = qfi_bracket(&p);
        optimize_qfi(&p, s.regime, method, lo, hi).map(|o| (o.value(), vec![Validity::new("interior_optimum", o.is_interior())]))
    } else {
        qfi_value(&p, x, s.regime, method)
    };
    match res {
        Ok((v, flags)) => vec![fmt_f64(x), method_name(method).into(), fmt_f64(v), fmt_f64(qfi_gain_db(v)), describe_flags(&flags)],
        Err(e) => vec![fmt_f64(x), method_name(method).into(), "nan".into(), "nan".into(), row_error(&e)],
    }
}

fn closed_form_row(s: &Scenario, x: f64) -> Option<Vec<String>> {
    let (p, _) = point(s, x);
    let o = qfi_loss_optimum(&p).ok()?;
    let pos = format!("window_{:?}", o.position).to_lowercase();
    Some(vec![fmt_f64(x), "closed_form".into(), fmt_f64(o.reported), fmt_f64(qfi_gain_db(o.reported)), pos])
}

/// QFI curve, one row per (point, method).
pub fn run_qfi(s: &Scenario) -> Result<Table, CliError> {
    let xs = sweep_values(s)?;
    let ms = methods(s);
    if ms.contains(&QfiMethod::Eigendecomposition) && s.regime == Regime::Kappa && s.params.n > MAX_DENSE_N {
        return Err(CliError::Config(crate::config::ConfigError::global(format!("eigendecomposition needs n <= {MAX_DENSE_N}"))));
    }
    let jobs: Vec<(f64, QfiMethod)> = xs.iter().flat_map(|&x| ms.iter().map(move |&m| (x, m))).collect();
    let mut rows: Vec<Vec<String>> = jobs.par_iter().map(|&(x, m)| qfi_row(s, x, m)).collect();
    let mut t = Table::new(s.header(), QFI_COLUMNS);
    describe(s, &mut t);
    if rows.iter().all(|r| r[2] == "nan") {
        return Err(CliError::Numeric(format!("every sweep point failed (first: {})", rows[0][4])));
    }
    if s.sweep == Some(SweepAxis::KappaRatio) {
        rows.extend(xs.iter().filter_map(|&x| closed_form_row(s, x)));
        // validity window κ/α < χ√N < κα² in units of χα√N/κ
        t.comment("marker kappa_ratio = 1.000000000000e0");
        t.comment(format!("marker kappa_ratio = {}", fmt_f64(s.params.alpha.powi(3))));
        t.comment(format!("ideal_optimum = {}", fmt_f64(4.0 + 8.0 * s.params.alpha * s.params.alpha)));
    }
    t.rows = rows;
    Ok(t)
}
