//! Physical parameters and interferometer schedule.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Which effective interaction generates the dispersive coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolVariant {
    /// Far-detuned cavity, χ = 2g²/Δc.
    Dispersive,
    /// Resonant cavity driven by a strong coherent field, χ = g/α.
    Resonant,
}

/// Unit convention for rates entered by a user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreqConvention {
    /// Values are angular frequencies in rad/s.
    #[default]
    Rad,
    /// Values are ordinary frequencies in Hz, multiplied by 2π on entry.
    Hz2Pi,
}

impl FreqConvention {
    pub fn to_angular(self, value: f64) -> f64 {
        match self {
            FreqConvention::Rad => value,
            FreqConvention::Hz2Pi => 2.0 * PI * value,
        }
    }
}

/// Physical constants of one scenario. All rates are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub n: u64,
    pub g: f64,
    pub delta_c: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub variant: ProtocolVariant,
}

impl SystemParams {
    pub fn new(n: u64, g: f64, delta_c: f64, kappa: f64, gamma: f64, alpha: f64, variant: ProtocolVariant) -> Result<Self> {
        let p = Self { n, g, delta_c, kappa, gamma, alpha, variant };
        p.validate()?;
        Ok(p)
    }

    /// Resonant-variant parameters chosen so that the derived χ equals `chi`.
    pub fn with_chi(n: u64, alpha: f64, chi: f64) -> Result<Self> {
        Self::new(n, chi * alpha, 0.0, 0.0, 0.0, alpha, ProtocolVariant::Resonant)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        self.kappa = kappa;
        self.validate()?;
        Ok(self)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        self.gamma = gamma;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("atom count N must be at least 1".into()));
        }
        for (name, v) in [("kappa", self.kappa), ("gamma", self.gamma), ("alpha", self.alpha)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !self.g.is_finite() || !self.delta_c.is_finite() {
            return Err(Error::InvalidParameter("g and delta_c must be finite".into()));
        }
        match self.variant {
            ProtocolVariant::Dispersive if self.delta_c == 0.0 => {
                Err(Error::InvalidParameter("dispersive variant needs a nonzero cavity detuning".into()))
            }
            ProtocolVariant::Resonant if self.alpha == 0.0 => {
                Err(Error::InvalidParameter("resonant variant needs a nonzero coherent amplitude".into()))
            }
            _ => Ok(()),
        }
    }

    /// Dispersive coupling constant χ for the configured variant.
    pub fn chi(&self) -> f64 {
        match self.variant {
            ProtocolVariant::Dispersive => 2.0 * self.g * self.g / self.delta_c,
            ProtocolVariant::Resonant => self.g / self.alpha,
        }
    }

    pub fn n_f64(&self) -> f64 {
        self.n as f64
    }

    /// α² ≥ threshold·N (default threshold 10).
    pub fn resonant_valid(&self, threshold: f64) -> bool {
        self.alpha * self.alpha >= threshold * self.n_f64()
    }

    /// |Δc| ≥ 10 g√N and |Δc| ≥ 10 g α.
    pub fn dispersive_valid(&self) -> bool {
        let d = self.delta_c.abs();
        let g = self.g.abs();
        d >= 10.0 * g * self.n_f64().sqrt() && d >= 10.0 * g * self.alpha
    }
}

/// Measurement projection in the equatorial plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementAngle {
    /// Fixed angle φ ∈ (0, π] measured from S_x.
    Fixed(f64),
    /// Orthogonal to the mean-spin azimuth at β = 0.
    Auto,
}

impl MeasurementAngle {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MeasurementAngle::Fixed(phi) => check_phi(phi),
            MeasurementAngle::Auto => Ok(()),
        }
    }
}

/// Rejects φ outside (0, π].
pub fn check_phi(phi: f64) -> Result<()> {
    if !(phi > 0.0 && phi <= PI) {
        return Err(Error::InvalidParameter(format!("measurement angle must lie in (0, pi], got {phi}")));
    }
    Ok(())
}

/// Interferometer schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    pub tau1: f64,
    pub tau2: f64,
    pub beta: f64,
    pub phi: MeasurementAngle,
    pub sigma_det: f64,
}

impl ProtocolConfig {
    pub fn new(tau1: f64, tau2: f64, beta: f64, phi: MeasurementAngle, sigma_det: f64) -> Result<Self> {
        let c = Self { tau1, tau2, beta, phi, sigma_det };
        c.validate()?;
        Ok(c)
    }

    /// Symmetric schedule τ₁ = τ₂ = τ measuring S_y.
    pub fn symmetric(tau: f64, beta: f64) -> Self {
        Self { tau1: tau, tau2: tau, beta, phi: MeasurementAngle::Fixed(PI / 2.0), sigma_det: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau1 >= 0.0) || !(self.tau2 >= 0.0) {
            return Err(Error::InvalidParameter("evolution times must be >= 0".into()));
        }
        if !(self.sigma_det >= 0.0) {
            return Err(Error::InvalidParameter("detection noise must be >= 0".into()));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidParameter("displacement must be finite".into()));
        }
        self.phi.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_per_variant() {
        let d = SystemParams::new(10, 2.0, 100.0, 0.0, 0.0, 5.0, ProtocolVariant::Dispersive).unwrap();
        assert_eq!(d.chi(), 2.0 * 4.0 / 100.0);
        let r = SystemParams::new(10, 2.0, 0.0, 0.0, 0.0, 5.0, ProtocolVariant::Resonant).unwrap();
        assert_eq!(r.chi(), 0.4);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::with_chi(0, 1.0, 1.0).is_err());
        assert!(SystemParams::with_chi(1, 1.0, 1.0).unwrap().with_kappa(-1.0).is_err());
        assert!(ProtocolConfig::new(1.0, 1.0, 0.0, MeasurementAngle::Fixed(0.0), 0.0).is_err());
        assert!(ProtocolConfig::new(1.0, 1.0, 0.0, MeasurementAngle::Fixed(PI), 0.0).is_ok());
    }

    #[test]
    fn validity_flags() {
        let p = SystemParams::with_chi(100, 40.0, 1.0).unwrap();
        assert!(p.resonant_valid(10.0));
        let p = SystemParams::with_chi(100, 20.0, 1.0).unwrap();
        assert!(!p.resonant_valid(10.0));
        let d = SystemParams::new(4, 1.0, 100.0, 0.0, 0.0, 2.0, ProtocolVariant::Dispersive).unwrap();
        assert!(d.dispersive_valid());
    }

    #[test]
    fn hz2pi_convention() {
        assert!((FreqConvention::Hz2Pi.to_angular(1.0) - 2.0 * PI).abs() < 1e-15);
        assert_eq!(FreqConvention::Rad.to_angular(3.0), 3.0);
    }
}
