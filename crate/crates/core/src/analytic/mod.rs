//! Closed-form results organized by regime: ideal, cavity decay, spontaneous
//! emission and detection noise.

mod detection;
mod gamma;
mod ideal;
mod kappa;
mod loss;
mod wigner;

pub use detection::{detection_noise_sensitivity, DetectionNoise, NoiseRegime};
pub use gamma::{gamma_moments, gamma_sensitivity, GammaSensitivity};
pub use ideal::{
    direct_measurement_noqfi, ideal_moments, ideal_qfi, ideal_sensitivity, DirectMeasurement, IdealQfi, IdealSensitivity, Observable,
};
pub use kappa::{
    kappa_closed_form, kappa_moments, kappa_optimum, kappa_protocol_sensitivity, kappa_sensitivity, kappa_short_time, KappaOptimum,
    KappaSensitivity,
};
pub use loss::{
    dying_cat_coefficient, dying_cat_qfi, dying_cat_scaling, gaussian_qfi, gaussian_qfi_short, loss_exponent, loss_rotation,
    loss_spin_density, qfi_loss_optimum, qfi_with_loss, DyingCatSpec, LossOptimum, QfiMethod, WindowPosition, MAX_DENSE_N,
};
pub use wigner::{bosonic_cat_components, wigner_cat, GridSpec, WignerGrid};

use crate::error::Result;
use crate::kernels::{jacobi_anger_sum_with_derivative, log_cos_pow, CutoffPolicy};
use num_complex::Complex64;

/// A named validity condition and whether it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validity {
    pub name: &'static str,
    pub ok: bool,
}

impl Validity {
    pub fn new(name: &'static str, ok: bool) -> Self {
        Self { name, ok }
    }
}

/// Names of the violated conditions joined by `|`, or `ok`.
pub fn describe_flags(flags: &[Validity]) -> String {
    let bad: Vec<&str> = flags.iter().filter(|f| !f.ok).map(|f| f.name).collect();
    if bad.is_empty() {
        "ok".to_string()
    } else {
        bad.join("|")
    }
}

/// Which formula produced a QFI value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiRegime {
    Ideal,
    DyingCat,
    LossEigendecomposition,
    LossGaussian,
    Numerical,
}

/// Quantum Fisher information with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiResult {
    pub value: f64,
    pub regime: QfiRegime,
    pub flags: Vec<Validity>,
}

/// ⟨(S⁺)^m⟩ for m ∈ {1, 2} in the common Bessel-sum form
/// base·exp(log_pref)·Σ iⁿ J_n(x) w(n), with its β-derivative.
pub(crate) struct BesselMoment {
    pub m: u32,
    pub log_pref: Complex64,
    pub dlog_pref: Complex64,
    pub x: Complex64,
    pub dx: Complex64,
}

pub(crate) fn base_moment(n: u64, m: u32) -> f64 {
    let nf = n as f64;
    match m {
        1 => nf / 2.0,
        _ => nf * (nf - 1.0) / 4.0,
    }
}

impl BesselMoment {
    pub fn evaluate<W: Fn(i64) -> Complex64>(&self, n: u64, weight: W) -> Result<(Complex64, Complex64)> {
        let base = base_moment(n, self.m);
        if base == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        let (sum, dsum) = jacobi_anger_sum_with_derivative(self.x, weight, CutoffPolicy::default())?;
        let p = base * self.log_pref.exp();
        Ok((p * sum.value, p * (self.dlog_pref * sum.value + dsum * self.dx)))
    }
}

/// Weight cos(n·θ)^p for the Bessel sums.
pub(crate) fn cos_pow_weight(theta: f64, p: f64) -> impl Fn(i64) -> Complex64 {
    move |k: i64| Complex64::new(log_cos_pow(k as f64 * theta, p).value(), 0.0)
}
