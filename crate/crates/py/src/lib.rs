//! Python bindings for the analytic sensitivity and QFI formulas.

use cavity_sense::analytic::{self, NoiseRegime, Observable, QfiMethod};
use cavity_sense::{MeasurementAngle, ProtocolVariant, SystemParams};
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: cavity_sense::Error) -> PyErr {
    match e {
        cavity_sense::Error::InvalidParameter(m) => PyValueError::new_err(m),
        other => PyArithmeticError::new_err(other.to_string()),
    }
}

fn params(n: u64, alpha: f64, chi: f64, kappa: f64, gamma: f64) -> PyResult<SystemParams> {
    SystemParams::with_chi(n, alpha, chi).and_then(|p| p.with_kappa(kappa)).and_then(|p| p.with_gamma(gamma)).map_err(to_py)
}

fn angle(phi: Option<f64>) -> MeasurementAngle {
    phi.map_or(MeasurementAngle::Auto, MeasurementAngle::Fixed)
}

/// Lossless QFI of the generated state at time t.
#[pyfunction]
#[pyo3(signature = (n, alpha, t, chi = 1.0))]
fn ideal_qfi(n: u64, alpha: f64, t: f64, chi: f64) -> PyResult<f64> {
    Ok(analytic::ideal_qfi(&params(n, alpha, chi, 0.0, 0.0)?, t).result.value)
}

/// Lossless (δβ)² of the time-reversal protocol read out with S_y.
#[pyfunction]
#[pyo3(signature = (n, alpha, tau, chi = 1.0))]
fn ideal_sensitivity(n: u64, alpha: f64, tau: f64, chi: f64) -> PyResult<f64> {
    analytic::ideal_sensitivity(&params(n, alpha, chi, 0.0, 0.0)?, tau, Observable::SpinY).map(|s| s.value).map_err(to_py)
}

/// QFI with photon loss; `method` is "gaussian" or "eigen".
#[pyfunction]
#[pyo3(signature = (n, alpha, kappa, t, chi = 1.0, method = "gaussian"))]
fn loss_qfi(n: u64, alpha: f64, kappa: f64, t: f64, chi: f64, method: &str) -> PyResult<f64> {
    let p = params(n, alpha, chi, kappa, 0.0)?;
    match method {
        "gaussian" => Ok(analytic::gaussian_qfi(&p, t)),
        "eigen" => {
            let rho = analytic::loss_spin_density(&p, t).map_err(to_py)?;
            analytic::qfi_with_loss(&rho, &p, t, QfiMethod::Eigendecomposition).map(|r| r.value).map_err(to_py)
        }
        other => Err(PyValueError::new_err(format!("unknown method `{other}`, expected gaussian or eigen"))),
    }
}

/// (δβ)² with photon loss; `phi = None` picks the optimal angle.
#[pyfunction]
#[pyo3(signature = (n, alpha, kappa, tau1, tau2 = None, chi = 1.0, phi = None, sigma_det = 0.0))]
#[allow(clippy::too_many_arguments)]
fn kappa_sensitivity(
    n: u64,
    alpha: f64,
    kappa: f64,
    tau1: f64,
    tau2: Option<f64>,
    chi: f64,
    phi: Option<f64>,
    sigma_det: f64,
) -> PyResult<f64> {
    let p = params(n, alpha, chi, kappa, 0.0)?;
    analytic::kappa_protocol_sensitivity(&p, tau1, tau2.unwrap_or(tau1), angle(phi), sigma_det).map_err(to_py)
}

/// Closed-form (t_opt, (δβ)²_opt) with photon loss.
#[pyfunction]
#[pyo3(signature = (n, alpha, kappa, chi = 1.0))]
fn kappa_optimum(n: u64, alpha: f64, kappa: f64, chi: f64) -> PyResult<(f64, f64)> {
    let o = analytic::kappa_optimum(&params(n, alpha, chi, kappa, 0.0)?).map_err(to_py)?;
    Ok((o.t_opt, o.delta_beta_sq))
}

/// (δβ)² of the resonant protocol with spontaneous emission at rate γ.
#[pyfunction]
#[pyo3(signature = (n, alpha, g, gamma, tau, phi = None))]
fn gamma_sensitivity(n: u64, alpha: f64, g: f64, gamma: f64, tau: f64, phi: Option<f64>) -> PyResult<f64> {
    let p = SystemParams::new(n, g, 0.0, 0.0, gamma, alpha, ProtocolVariant::Resonant).map_err(to_py)?;
    analytic::gamma_sensitivity(&p, tau, angle(phi)).map(|s| s.value).map_err(to_py)
}

/// Lossless short-time (δβ)² with Gaussian detection noise σ_det.
#[pyfunction]
#[pyo3(signature = (n, alpha, tau, phi, sigma_det, chi = 1.0))]
fn detection_noise_sensitivity(n: u64, alpha: f64, tau: f64, phi: f64, sigma_det: f64, chi: f64) -> PyResult<f64> {
    let p = params(n, alpha, chi, 0.0, 0.0)?;
    analytic::detection_noise_sensitivity(&p, tau, phi, sigma_det, NoiseRegime::Ideal).map(|d| d.value).map_err(to_py)
}

/// Gain over the standard quantum limit in dB.
#[pyfunction]
fn metrological_gain(delta_beta_sq: f64) -> PyResult<f64> {
    cavity_sense::metrological_gain(delta_beta_sq).map_err(to_py)
}

#[pymodule]
fn cavity_sense_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(ideal_qfi, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(loss_qfi, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(kappa_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(detection_noise_sensitivity, m)?)?;
    m.add_function(wrap_pyfunction!(metrological_gain, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_qfi_closed_form() {
        let (n, a, t) = (10u64, 4.0, 0.3f64);
        let want = 4.0 + 8.0 * a * a * (1.0 - t.cos().powi(n as i32));
        assert!((ideal_qfi(n, a, t, 1.0).unwrap() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn optimum_is_consistent_with_sweep_value() {
        let (t, best) = kappa_optimum(1_000_000, 1e4, 1e3, 1.0).unwrap();
        let at = kappa_sensitivity(1_000_000, 1e4, 1e3, t, None, 1.0, None, 0.0).unwrap();
        assert!(best < 0.25 && (at - best).abs() < 0.1 * best);
    }

    #[test]
    fn gain_of_sql_is_zero() {
        assert!(metrological_gain(0.25).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bad_method_is_rejected() {
        assert!(loss_qfi(4, 1.0, 0.1, 0.1, 1.0, "exact").is_err());
        assert!(ideal_qfi(10, -1.0, 0.1, 1.0).is_err());
    }
}
