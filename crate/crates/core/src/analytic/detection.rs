//! Sensitivity with Gaussian detection noise on the spin readout.

use super::gamma::gamma_sensitivity;
use super::ideal::{ideal_sensitivity, Observable};
use crate::error::{Error, Result};
use crate::params::{check_phi, MeasurementAngle, ProtocolVariant, SystemParams};

/// Decoherence regime for the noisy-readout formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseRegime {
    Ideal,
    Kappa,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionNoise {
    pub value: f64,
    /// The same formula at σ_det = 0.
    pub noiseless: f64,
    /// σ_det ≤ √N.
    pub robust: bool,
}

fn formula(params: &SystemParams, tau: f64, phi: f64, sigma: f64, regime: NoiseRegime) -> Result<f64> {
    let n = params.n_f64();
    let chi = params.chi();
    let a2 = params.alpha * params.alpha;
    let csc2 = 1.0 / phi.sin().powi(2);
    let noise = 4.0 * csc2 * sigma * sigma / n;
    match regime {
        NoiseRegime::Ideal => {
            let base = ideal_sensitivity(params, tau, Observable::SpinY)?.value;
            Ok(base * (1.0 + noise))
        }
        NoiseRegime::Kappa => {
            let lead = 1.0 / (4.0 * a2 * n * chi * chi * tau * tau);
            Ok(lead * (1.0 + noise) + params.kappa * tau / 6.0 * ((n - 1.0 + csc2) / n + noise))
        }
        NoiseRegime::Gamma => {
            if params.variant != ProtocolVariant::Resonant {
                return Err(Error::InvalidParameter("the gamma noise formula is for the resonant protocol".into()));
            }
            let lead = 1.0 / (4.0 * n * chi * chi * a2 * tau * tau);
            let c = phi.cos();
            Ok(lead * ((6.0 * params.gamma * tau).exp() - c * c) * csc2 + sigma * sigma * csc2 / (n * n * a2 * chi * chi * tau * tau))
        }
    }
}

/// Closed-form (δβ)² with detection noise σ_det for the chosen regime.
pub fn detection_noise_sensitivity(
    params: &SystemParams,
    tau: f64,
    phi: f64,
    sigma_det: f64,
    regime: NoiseRegime,
) -> Result<DetectionNoise> {
    check_phi(phi)?;
    if !(sigma_det >= 0.0) {
        return Err(Error::InvalidParameter("detection noise must be >= 0".into()));
    }
    if !(tau > 0.0) {
        return Err(Error::Diverging("sensitivity needs tau > 0".into()));
    }
    Ok(DetectionNoise {
        value: formula(params, tau, phi, sigma_det, regime)?,
        noiseless: formula(params, tau, phi, 0.0, regime)?,
        robust: sigma_det <= params.n_f64().sqrt(),
    })
}

/// The γ regime without noise and with the short-time formula, for cross-checks.
#[allow(dead_code)]
pub(crate) fn gamma_reference(params: &SystemParams, tau: f64, phi: f64) -> Result<f64> {
    Ok(gamma_sensitivity(params, tau, MeasurementAngle::Fixed(phi))?.short_time)
}
