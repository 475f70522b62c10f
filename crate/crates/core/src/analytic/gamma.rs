//! Time-reversal protocol with single-atom spontaneous emission.

use super::{BesselMoment, Validity};
use crate::error::{Error, Result};
use crate::moments::{auto_phi, sensitivity_from_moments, MomentDerivatives, MomentSet, SzSource};
use crate::params::{check_phi, MeasurementAngle, ProtocolVariant, SystemParams};
use num_complex::Complex64;

/// Per-moment decay rate multiplier and entanglement exponent polynomial
/// c₂b² + c₁b + c₀ (in units of γχ²Nτ³).
struct GammaModel {
    decay: f64,
    poly: [f64; 3],
}

fn model(variant: ProtocolVariant, m: u32) -> GammaModel {
    match (variant, m) {
        (ProtocolVariant::Resonant, 1) => GammaModel { decay: 3.0, poly: [0.0, 0.0, 1.0 / 24.0] },
        (ProtocolVariant::Resonant, _) => GammaModel { decay: 6.0, poly: [0.0, 0.0, 1.0 / 24.0] },
        (ProtocolVariant::Dispersive, 1) => GammaModel { decay: 2.0, poly: [6.0 / 12.0, 8.0 / 12.0, 5.0 / 12.0] },
        (ProtocolVariant::Dispersive, _) => GammaModel { decay: 4.0, poly: [24.0 / 12.0, 16.0 / 12.0, 5.0 / 12.0] },
    }
}

/// Moments after (τ, +χ), D(β), (τ, −χ) with spontaneous emission at rate γ.
/// The Bessel weights use the Gaussian form e^{−Nb²χ²τ²/8} of the cosine powers.
pub fn gamma_moments(params: &SystemParams, tau: f64, beta: f64) -> Result<MomentSet> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter("tau must be >= 0".into()));
    }
    let n = params.n;
    let nf = n as f64;
    let chi = params.chi();
    let gamma = params.gamma;
    let alpha = params.alpha;
    let ent = gamma * chi * chi * nf * tau.powi(3);
    let gauss = nf * chi * chi * tau * tau / 8.0;
    let mut vals = [Complex64::new(0.0, 0.0); 2];
    let mut ders = [Complex64::new(0.0, 0.0); 2];
    for (i, m) in [1u32, 2].into_iter().enumerate() {
        let mf = m as f64;
        let g = model(params.variant, m);
        let eta = Complex64::from_polar(1.0, -mf * chi * tau) - 1.0;
        let s = (mf * chi * tau / 2.0).sin();
        let bm = BesselMoment {
            m,
            log_pref: -g.decay * gamma * tau + g.poly[0] * ent + eta * beta * beta,
            dlog_pref: 2.0 * eta * beta,
            x: Complex64::new(-4.0 * alpha * beta * s, 0.0),
            dx: Complex64::new(-4.0 * alpha * s, 0.0),
        };
        let poly = g.poly;
        let weight = move |b: i64| {
            let b = b as f64;
            Complex64::new((ent * (poly[2] * b * b + poly[1] * b) - gauss * b * b).exp(), 0.0)
        };
        let (v, d) = bm.evaluate(n, weight)?;
        vals[i] = v;
        ders[i] = d;
    }
    let (spm, sz) = match params.variant {
        ProtocolVariant::Resonant => (nf / 2.0 + nf * (nf - 1.0) / 4.0 * (-6.0 * gamma * tau).exp(), 0.0),
        ProtocolVariant::Dispersive => {
            let d = (-4.0 * gamma * tau).exp();
            (nf / 2.0 * d + nf * (nf - 1.0) / 4.0 * d, nf / 2.0 * (-4.0 * gamma * tau).exp_m1())
        }
    };
    Ok(MomentSet {
        n,
        splus: vals[0],
        splus_sq: vals[1],
        spm,
        sz,
        sz_source: SzSource::Computed,
        derivatives: Some(MomentDerivatives { splus: ders[0], splus_sq: ders[1], spm: 0.0, sz: 0.0 }),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSensitivity {
    /// Angle used for `value`.
    pub phi: f64,
    /// Moment assembly at `phi`.
    pub value: f64,
    /// (e^{6γτ} − cos²φ)/(16Nα² sin²(χτ/2) K² sin²φ), resonant protocol only.
    pub closed_form: Option<f64>,
    /// e^{6γτ}/(4α²Nχ²τ²).
    pub short_time: f64,
    /// 1/(3γ).
    pub t_opt: f64,
    pub flags: Vec<Validity>,
}

/// Sensitivity with spontaneous emission at measurement angle φ.
pub fn gamma_sensitivity(params: &SystemParams, tau: f64, phi: MeasurementAngle) -> Result<GammaSensitivity> {
    phi.validate()?;
    if !(tau > 0.0) {
        return Err(Error::Diverging("sensitivity needs tau > 0".into()));
    }
    let m = gamma_moments(params, tau, 0.0)?;
    let angle = match phi {
        MeasurementAngle::Fixed(p) => p,
        MeasurementAngle::Auto => auto_phi(&m),
    };
    check_phi(angle)?;
    let value = sensitivity_from_moments(&m, angle, 0.0)?;
    let chi = params.chi();
    let n = params.n_f64();
    let a2 = params.alpha * params.alpha;
    let gamma = params.gamma;
    let closed_form = match params.variant {
        ProtocolVariant::Resonant => {
            let k = gamma * chi * chi * n * tau.powi(3) / 24.0 - n * chi * chi * tau * tau / 8.0;
            let s = (chi * tau / 2.0).sin();
            let c = angle.cos();
            let sn = angle.sin();
            Some(((6.0 * gamma * tau).exp() - c * c) * (-2.0 * k).exp() / (16.0 * n * a2 * s * s * sn * sn))
        }
        ProtocolVariant::Dispersive => None,
    };
    let t_opt = if gamma > 0.0 { 1.0 / (3.0 * gamma) } else { f64::INFINITY };
    Ok(GammaSensitivity {
        phi: angle,
        value,
        closed_form,
        short_time: (6.0 * gamma * tau).exp() / (4.0 * a2 * n * chi * chi * tau * tau),
        t_opt,
        flags: vec![
            Validity::new("gamma_tau_small", gamma * tau <= 0.1),
            Validity::new("chi_over_gamma_small", chi <= 0.1 * gamma),
            Validity::new("entanglement_decay_negligible", gamma * chi * chi * n * tau.powi(3) <= 0.24),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ideal_moments;
    use std::f64::consts::PI;

    fn p(n: u64, alpha: f64, gamma: f64) -> SystemParams {
        SystemParams::with_chi(n, alpha, 1.0).unwrap().with_gamma(gamma).unwrap()
    }

    #[test]
    fn matches_ideal_without_emission() {
        let params = p(100, 5.0, 0.0);
        let tau = 0.01 / 10.0;
        for beta in [0.0, 0.3, 1.0] {
            let a = gamma_moments(&params, tau, beta).unwrap();
            let b = ideal_moments(&params, tau, beta).unwrap();
            assert!((a.splus - b.splus).norm() / b.splus.norm() < 1e-3);
            assert!((a.splus_sq - b.splus_sq).norm() / b.splus_sq.norm() < 1e-3);
            let da = a.derivatives.unwrap().splus;
            let db = b.derivatives.unwrap().splus;
            assert!((da - db).norm() / db.norm().max(1e-12) < 1e-3);
        }
    }

    #[test]
    fn single_particle_decay_at_zero_displacement() {
        let params = p(20, 3.0, 0.5);
        let m = gamma_moments(&params, 0.1, 0.0).unwrap();
        assert!((m.splus - Complex64::new(10.0 * (-0.15f64).exp(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn closed_form_matches_assembly() {
        let params = p(200, 40.0, 0.3);
        for phi in [0.7, PI / 2.0, 2.2] {
            let s = gamma_sensitivity(&params, 0.02, MeasurementAngle::Fixed(phi)).unwrap();
            let c = s.closed_form.unwrap();
            assert!((s.value - c).abs() / c < 1e-8, "{} vs {c}", s.value);
        }
    }

    #[test]
    fn short_time_and_optimum() {
        let params = p(1_000_000, 1e4, 0.1);
        let tau = 1e-6;
        let s = gamma_sensitivity(&params, tau, MeasurementAngle::Fixed(PI / 2.0)).unwrap();
        assert!((s.value - s.short_time).abs() / s.short_time < 1e-6);
        assert!((s.t_opt - 1.0 / 0.3).abs() < 1e-12);
        assert!(gamma_sensitivity(&params, tau, MeasurementAngle::Fixed(0.0)).is_err());
    }

    #[test]
    fn dispersive_variance_matches_split_form() {
        let params = SystemParams::new(30, 1.0, 2.0, 0.0, 0.2, 4.0, ProtocolVariant::Dispersive).unwrap();
        assert_eq!(params.chi(), 1.0);
        let m = gamma_moments(&params, 0.05, 0.0).unwrap();
        // 2⟨S⁺S⁻⟩ − 2⟨S_z⟩ equals N + N(N−1)e^{−4γτ}/2
        let d = (-4.0 * 0.2 * 0.05f64).exp();
        assert!((2.0 * m.spm - 2.0 * m.sz - (30.0 + 30.0 * 29.0 / 2.0 * d)).abs() < 1e-10);
        assert!(gamma_sensitivity(&params, 0.05, MeasurementAngle::Auto).unwrap().value > 0.0);
    }
}
