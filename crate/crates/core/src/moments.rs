//! Collective-spin moments and the moment-to-sensitivity assembly.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// How ⟨S_z⟩ was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzSource {
    /// Conserved by the dynamics and zero for an x-polarized start.
    Conserved,
    /// Evaluated from a model in which S_z relaxes.
    Computed,
}

/// β-derivatives of the moments at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDerivatives {
    pub splus: Complex64,
    pub splus_sq: Complex64,
    pub spm: f64,
    pub sz: f64,
}

/// ⟨S⁺⟩, ⟨(S⁺)²⟩, ⟨S⁺S⁻⟩, ⟨S_z⟩ at one displacement β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub n: u64,
    pub splus: Complex64,
    pub splus_sq: Complex64,
    pub spm: f64,
    pub sz: f64,
    pub sz_source: SzSource,
    pub derivatives: Option<MomentDerivatives>,
}

impl MomentSet {
    /// Checks the collective-spin bounds |⟨S⁺⟩| ≤ N/2 and 0 ≤ ⟨S⁺S⁻⟩ ≤ N(N+1)/4.
    pub fn check_bounds(&self) -> Result<()> {
        let n = self.n as f64;
        let slack = 1e-9 * (1.0 + n * n);
        if self.splus.norm() > n / 2.0 + 1e-9 * (1.0 + n) {
            return Err(Error::Numeric(format!("|<S+>| = {} exceeds N/2", self.splus.norm())));
        }
        if self.spm < -slack || self.spm > n * (n + 1.0) / 4.0 + slack {
            return Err(Error::Numeric(format!("<S+S-> = {} outside collective bounds", self.spm)));
        }
        Ok(())
    }

    /// ⟨S_φ⟩ with S_φ = cos φ S_x + sin φ S_y.
    pub fn mean(&self, phi: f64) -> f64 {
        (Complex64::from_polar(1.0, -phi) * self.splus).re
    }

    /// ⟨S_φ²⟩ from (e^{−2iφ}S⁺² + e^{2iφ}S⁻² + 2S⁺S⁻ − 2S_z)/4.
    pub fn second_moment(&self, phi: f64) -> f64 {
        let a = (Complex64::from_polar(1.0, -2.0 * phi) * self.splus_sq).re;
        (2.0 * a + 2.0 * self.spm - 2.0 * self.sz) / 4.0
    }

    pub fn variance(&self, phi: f64) -> f64 {
        let m = self.mean(phi);
        self.second_moment(phi) - m * m
    }

    /// ∂_β⟨S_φ⟩.
    pub fn slope(&self, phi: f64) -> Result<f64> {
        let d = self.derivatives.ok_or_else(|| Error::InvalidParameter("moment set carries no beta-derivatives".into()))?;
        Ok((Complex64::from_polar(1.0, -phi) * d.splus).re)
    }
}

/// Angle orthogonal to the mean-spin azimuth, folded into (0, π].
pub fn auto_phi(m: &MomentSet) -> f64 {
    let phi = (m.splus.arg() + PI / 2.0).rem_euclid(PI);
    if phi == 0.0 {
        PI
    } else {
        phi
    }
}

/// (⟨(ΔS_φ)²⟩ + σ_det²)/|∂_β⟨S_φ⟩|².
pub fn sensitivity_from_moments(m: &MomentSet, phi: f64, sigma_det: f64) -> Result<f64> {
    if !(sigma_det >= 0.0) {
        return Err(Error::InvalidParameter("detection noise must be >= 0".into()));
    }
    let slope = m.slope(phi)?;
    if slope == 0.0 {
        return Err(Error::InsensitiveWorkingPoint);
    }
    let var = m.variance(phi).max(0.0);
    let r = (var + sigma_det * sigma_det) / (slope * slope);
    if !r.is_finite() {
        return Err(Error::Diverging(format!("sensitivity overflow at slope {slope:e}")));
    }
    Ok(r)
}

/// −10 log₁₀(4(δβ)²): gain over the standard quantum limit in dB.
pub fn metrological_gain(delta_beta_sq: f64) -> Result<f64> {
    if !(delta_beta_sq > 0.0) || !delta_beta_sq.is_finite() {
        return Err(Error::InvalidParameter(format!("metrological gain needs a finite positive (δβ)², got {delta_beta_sq}")));
    }
    Ok(-10.0 * (4.0 * delta_beta_sq).log10())
}

/// 10 log₁₀(F_Q/4): the gain bound implied by a quantum Fisher information.
pub fn qfi_gain_db(qfi: f64) -> f64 {
    10.0 * (qfi / 4.0).log10()
}

/// Sensitivity versus time with the derived gains.
#[derive(Debug, Clone, PartialEq)]
pub struct GainCurve {
    pub times: Vec<f64>,
    pub delta_beta_sq: Vec<f64>,
    pub gain_db: Vec<f64>,
    pub qfi_bound_db: Vec<Option<f64>>,
}

impl GainCurve {
    pub fn new(times: Vec<f64>, delta_beta_sq: Vec<f64>, qfi: Vec<Option<f64>>) -> Result<Self> {
        if times.len() != delta_beta_sq.len() || times.len() != qfi.len() {
            return Err(Error::InvalidParameter("gain curve columns differ in length".into()));
        }
        let gain_db = delta_beta_sq.iter().map(|&d| metrological_gain(d)).collect::<Result<Vec<_>>>()?;
        let qfi_bound_db = qfi.into_iter().map(|q| q.map(qfi_gain_db)).collect();
        Ok(Self { times, delta_beta_sq, gain_db, qfi_bound_db })
    }

    /// Index and value of the largest gain.
    pub fn peak(&self) -> Option<(usize, f64)> {
        self.gain_db.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn css_moments(n: u64, slope: Complex64) -> MomentSet {
        let nf = n as f64;
        MomentSet {
            n,
            splus: Complex64::new(nf / 2.0, 0.0),
            splus_sq: Complex64::new(nf * (nf - 1.0) / 4.0, 0.0),
            spm: nf * (nf + 1.0) / 4.0,
            sz: 0.0,
            sz_source: SzSource::Conserved,
            derivatives: Some(MomentDerivatives { splus: slope, splus_sq: Complex64::new(0.0, 0.0), spm: 0.0, sz: 0.0 }),
        }
    }

    #[test]
    fn gain_values() {
        assert_eq!(metrological_gain(0.25).unwrap(), 0.0);
        assert!((metrological_gain(1.0 / 40.0).unwrap() - 10.0).abs() < 1e-12);
        assert!((metrological_gain(0.025 / 4.0).unwrap() - 16.0206).abs() < 1e-4);
        assert!(metrological_gain(0.0).is_err());
        assert!(metrological_gain(-1.0).is_err());
    }

    #[test]
    fn coherent_state_variances() {
        let m = css_moments(10, Complex64::new(0.0, 1.0));
        assert!((m.variance(PI / 2.0) - 2.5).abs() < 1e-12);
        assert!(m.variance(0.0).abs() < 1e-12);
        assert!((m.variance(PI / 4.0) - 1.25).abs() < 1e-12);
    }

    #[test]
    fn detection_noise_adds_to_variance() {
        let m = css_moments(16, Complex64::new(0.0, 2.0));
        let a = sensitivity_from_moments(&m, PI / 2.0, 0.0).unwrap();
        let b = sensitivity_from_moments(&m, PI / 2.0, 1.0).unwrap();
        assert!((a - 4.0 / 4.0).abs() < 1e-12);
        assert!((b / a - 1.25).abs() < 1e-12);
    }

    #[test]
    fn zero_slope_is_distinct() {
        let m = css_moments(4, Complex64::new(0.0, 0.0));
        assert_eq!(sensitivity_from_moments(&m, PI / 2.0, 0.0), Err(Error::InsensitiveWorkingPoint));
        let mut no_d = m;
        no_d.derivatives = None;
        assert!(matches!(sensitivity_from_moments(&no_d, 1.0, 0.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn auto_phi_is_orthogonal() {
        let mut m = css_moments(4, Complex64::new(0.0, 0.0));
        m.splus = Complex64::from_polar(2.0, 0.3);
        let phi = auto_phi(&m);
        assert!((phi - (0.3 + PI / 2.0)).abs() < 1e-15);
        assert!(m.mean(phi).abs() < 1e-15);
        m.splus = Complex64::from_polar(2.0, 2.0);
        let phi = auto_phi(&m);
        assert!(phi > 0.0 && phi <= PI && m.mean(phi).abs() < 1e-14);
    }

    #[test]
    fn bounds() {
        let mut m = css_moments(4, Complex64::new(0.0, 0.0));
        assert!(m.check_bounds().is_ok());
        m.spm = 6.0;
        assert!(m.check_bounds().is_err());
    }

    #[test]
    fn gain_curve_peak() {
        let c = GainCurve::new(vec![1.0, 2.0, 3.0], vec![0.25, 0.025, 0.1], vec![None, Some(40.0), None]).unwrap();
        assert_eq!(c.peak().unwrap().0, 1);
        assert!((c.qfi_bound_db[1].unwrap() - 10.0).abs() < 1e-12);
        assert!(GainCurve::new(vec![1.0], vec![], vec![]).is_err());
    }
}
