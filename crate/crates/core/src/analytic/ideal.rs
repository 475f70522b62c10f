//! Dissipation-free state generation, moments and sensitivities.

use super::{cos_pow_weight, BesselMoment, QfiRegime, QfiResult, Validity};
use crate::error::{Error, Result};
use crate::kernels::log_cos_pow;
use crate::moments::{MomentDerivatives, MomentSet, SzSource};
use crate::params::SystemParams;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Ideal QFI with its short-time and saturation companions.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealQfi {
    pub result: QfiResult,
    /// 4 + 4Nχ²α²t².
    pub short_time: f64,
    /// 4 + 8α².
    pub saturation: f64,
}

/// F_Q = 4 + 8α²(1 − cos(χt)^N) for the generator Y = i(a† − a).
pub fn ideal_qfi(params: &SystemParams, t: f64) -> IdealQfi {
    let chi = params.chi();
    let a2 = params.alpha * params.alpha;
    let n = params.n_f64();
    let c = log_cos_pow(chi * t, n).value();
    let value = 4.0 + 8.0 * a2 * (1.0 - c);
    let flags = vec![Validity::new("dissipation_ignored", params.kappa == 0.0 && params.gamma == 0.0)];
    IdealQfi {
        result: QfiResult { value, regime: QfiRegime::Ideal, flags },
        short_time: 4.0 + 4.0 * n * chi * chi * a2 * t * t,
        saturation: 4.0 + 8.0 * a2,
    }
}

/// Moments after the time-reversal protocol (τ, +χ), D(β), (τ, −χ).
pub fn ideal_moments(params: &SystemParams, tau: f64, beta: f64) -> Result<MomentSet> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter("tau must be >= 0".into()));
    }
    let n = params.n;
    let nf = n as f64;
    let chi = params.chi();
    let alpha = params.alpha;
    let half = chi * tau / 2.0;
    let mut vals = [Complex64::new(0.0, 0.0); 2];
    let mut ders = [Complex64::new(0.0, 0.0); 2];
    for (i, m) in [1u32, 2].into_iter().enumerate() {
        let mf = m as f64;
        let eta = Complex64::from_polar(1.0, -mf * chi * tau) - 1.0;
        let s = (mf * half).sin();
        let bm = BesselMoment {
            m,
            log_pref: eta * beta * beta,
            dlog_pref: 2.0 * eta * beta,
            x: Complex64::new(-4.0 * alpha * beta * s, 0.0),
            dx: Complex64::new(-4.0 * alpha * s, 0.0),
        };
        let (v, d) = bm.evaluate(n, cos_pow_weight(half, nf - mf))?;
        vals[i] = v;
        ders[i] = d;
    }
    Ok(MomentSet {
        n,
        splus: vals[0],
        splus_sq: vals[1],
        spm: nf * (nf + 1.0) / 4.0,
        sz: 0.0,
        sz_source: SzSource::Conserved,
        derivatives: Some(MomentDerivatives { splus: ders[0], splus_sq: ders[1], spm: 0.0, sz: 0.0 }),
    })
}

/// Measured observable at the end of the protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// Spin projection S_y.
    SpinY,
    /// Cavity quadrature X = a + a†.
    QuadratureX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealSensitivity {
    pub value: f64,
    /// 1/(4Nα²χ²τ²) for the spin readout; absent for the quadrature.
    pub short_time: Option<f64>,
}

fn near_multiple_of_pi(x: f64) -> bool {
    let r = x / PI;
    (r - r.round()).abs() < 1e-12 && r.round() != 0.0
}

/// Exact ideal sensitivity for the spin readout or the quadrature readout.
pub fn ideal_sensitivity(params: &SystemParams, tau: f64, observable: Observable) -> Result<IdealSensitivity> {
    let chi = params.chi();
    let n = params.n_f64();
    let a = params.alpha;
    let half = chi * tau / 2.0;
    match observable {
        Observable::SpinY => {
            if !(tau > 0.0) || a == 0.0 || chi == 0.0 {
                return Err(Error::Diverging("spin readout needs tau > 0 and nonzero coupling".into()));
            }
            if near_multiple_of_pi(chi * tau) || near_multiple_of_pi(half) {
                return Err(Error::Diverging(format!("chi*tau = {} is a multiple of pi", chi * tau)));
            }
            let ls = half.sin().abs().ln();
            let lc = log_cos_pow(half, n - 1.0).log;
            if !lc.is_finite() || !ls.is_finite() {
                return Err(Error::Diverging("signal slope vanishes".into()));
            }
            let log = -(16.0 * a * a * n).ln() - 2.0 * ls - 2.0 * lc;
            Ok(IdealSensitivity { value: log.exp(), short_time: Some(1.0 / (4.0 * n * a * a * chi * chi * tau * tau)) })
        }
        Observable::QuadratureX => {
            let lc = log_cos_pow(half, 2.0 * n).log;
            if !lc.is_finite() {
                return Err(Error::Diverging("quadrature slope vanishes".into()));
            }
            Ok(IdealSensitivity { value: 0.25 * (-lc).exp(), short_time: None })
        }
    }
}

/// Quadrature readout without time reversal, at β = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectMeasurement {
    /// ⟨X^φ⟩ with X^φ = a e^{iφ} + a† e^{−iφ}.
    pub mean: f64,
    pub variance: f64,
    /// ∂_β⟨X^φ⟩ = 2 cos φ.
    pub slope: f64,
    pub delta_beta_sq: f64,
    /// β-slope of any spin observable, identically zero.
    pub spin_slope: f64,
}

/// Displacement sensing by a direct quadrature measurement after state
/// generation; never better than vacuum noise.
pub fn direct_measurement_noqfi(params: &SystemParams, t: f64, phi: f64) -> Result<DirectMeasurement> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter("t must be >= 0".into()));
    }
    let chi = params.chi();
    let n = params.n_f64();
    let a = params.alpha;
    let c_half = log_cos_pow(chi * t / 2.0, n).value();
    let c_half_sq = log_cos_pow(chi * t / 2.0, 2.0 * n).value();
    let c_full = log_cos_pow(chi * t, n).value();
    let mean = 2.0 * a * c_half * phi.cos();
    let variance = 1.0 + 2.0 * a * a * ((c_full - c_half_sq) * (2.0 * phi).cos() + 1.0 - c_half_sq);
    if variance < 1.0 - 1e-12 {
        return Err(Error::Numeric(format!("quadrature variance {variance} below vacuum")));
    }
    let slope = 2.0 * phi.cos();
    if slope.abs() < 1e-300 {
        return Err(Error::InsensitiveWorkingPoint);
    }
    Ok(DirectMeasurement { mean, variance, slope, delta_beta_sq: variance / (slope * slope), spin_slope: 0.0 })
}
