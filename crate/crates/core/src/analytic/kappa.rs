//! Time-reversal protocol with photon loss.

use super::ideal::ideal_moments;
use super::{cos_pow_weight, BesselMoment, Validity};
use crate::error::{Error, Result};
use crate::kernels::{cexpm1, gamma_p};
use crate::moments::{auto_phi, sensitivity_from_moments, MomentDerivatives, MomentSet, SzSource};
use crate::params::{MeasurementAngle, SystemParams};
use num_complex::Complex64;
use std::f64::consts::PI;

/// η_{τ,m} = iχm(e^{−κτ−iχmτ} − 1)/(κ + iχm).
fn eta(kappa: f64, chi: f64, m: f64, tau: f64) -> Complex64 {
    let i_chi_m = Complex64::new(0.0, chi * m);
    let e = cexpm1(Complex64::new(-kappa * tau, -chi * m * tau));
    if kappa == 0.0 {
        return e;
    }
    i_chi_m / (kappa + i_chi_m) * e
}

/// Moments after (τ₁, +χ), D(β), (τ₂, −χ) with photon loss at rate κ.
pub fn kappa_moments(params: &SystemParams, tau1: f64, tau2: f64, beta: f64) -> Result<MomentSet> {
    if !(tau1 >= 0.0) || !(tau2 >= 0.0) {
        return Err(Error::InvalidParameter("tau1 and tau2 must be >= 0".into()));
    }
    if params.kappa == 0.0 && tau1 == tau2 {
        return ideal_moments(params, tau1, beta);
    }
    let n = params.n;
    let nf = n as f64;
    let chi = params.chi();
    let kappa = params.kappa;
    let alpha = params.alpha;
    let mut vals = [Complex64::new(0.0, 0.0); 2];
    let mut ders = [Complex64::new(0.0, 0.0); 2];
    for (i, m) in [1u32, 2].into_iter().enumerate() {
        let mf = m as f64;
        let e1 = eta(kappa, chi, mf, tau1);
        let e2 = eta(kappa, chi, mf, tau2);
        let rot = Complex64::new(-kappa * tau1, mf * chi * tau1);
        let dx = -2.0 * Complex64::i() * e2 * alpha * (0.5 * rot).exp();
        let bm = BesselMoment {
            m,
            log_pref: alpha * alpha * (e2 * rot.exp() + e1.conj()) + e2 * beta * beta,
            dlog_pref: 2.0 * e2 * beta,
            x: dx * beta,
            dx,
        };
        let (v, d) = bm.evaluate(n, cos_pow_weight(chi * tau1 / 2.0, nf - mf))?;
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

/// (δβ)² at β = 0 with the given measurement angle and detection noise.
pub fn kappa_protocol_sensitivity(params: &SystemParams, tau1: f64, tau2: f64, phi: MeasurementAngle, sigma_det: f64) -> Result<f64> {
    phi.validate()?;
    let m = kappa_moments(params, tau1, tau2, 0.0)?;
    let angle = match phi {
        MeasurementAngle::Fixed(p) => p,
        MeasurementAngle::Auto => auto_phi(&m),
    };
    sensitivity_from_moments(&m, angle, sigma_det)
}

/// f(τ₁, τ₂) = e^{−κτ₁}[2κτ₁ + e^{−κτ₂} + κ(τ₂ − τ₁)e^{−κτ₂}] − 1 divided by κ²,
/// evaluated without cancellation.
fn f_over_kappa_sq(kappa: f64, tau1: f64, tau2: f64) -> f64 {
    let x = kappa * tau1;
    let y = kappa * tau2;
    if kappa == 0.0 || x + y < 1e-5 {
        let (a, b) = (tau1, tau2);
        let c2 = -0.5 * (a - b) * (a - b);
        let c3 = (a.powi(3) - 3.0 * a * a * b + b.powi(3)) / 3.0;
        let c4 = -(3.0 * a.powi(4) - 12.0 * a.powi(3) * b - 6.0 * a * a * b * b + 4.0 * a * b.powi(3) + 3.0 * b.powi(4)) / 24.0;
        return c2 + kappa * (c3 + kappa * c4);
    }
    (-2.0 * x * (-x).exp() * (-y).exp_m1() - gamma_p(2, x + y)) / (kappa * kappa)
}

/// Short-time closed form
/// [(1+E)/(8N) + (1−E)/8] e^{κτ₁} e^{−X} / (χα(1 − e^{−κτ₂})/κ)², X = χ²α² f/κ², E = e^{4X}.
pub fn kappa_closed_form(params: &SystemParams, tau1: f64, tau2: f64) -> Result<f64> {
    if !(tau1 >= 0.0) || !(tau2 > 0.0) {
        return Err(Error::InvalidParameter("closed form needs tau1 >= 0 and tau2 > 0".into()));
    }
    let chi = params.chi();
    let a2 = params.alpha * params.alpha;
    let n = params.n_f64();
    let kappa = params.kappa;
    let x = chi * chi * a2 * f_over_kappa_sq(kappa, tau1, tau2);
    let e = (4.0 * x).exp();
    let eff = if kappa == 0.0 { tau2 } else { -(-kappa * tau2).exp_m1() / kappa };
    let numer = (1.0 + e) / (8.0 * n) - (4.0 * x).exp_m1() / 8.0;
    let v = numer * (kappa * tau1 - x).exp() / (chi * chi * a2 * eff * eff);
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Diverging(format!("kappa closed form gives {v}")));
    }
    Ok(v)
}

/// 1/(4Nα²χ²τ²) + κτ/6.
pub fn kappa_short_time(params: &SystemParams, tau: f64) -> f64 {
    let chi = params.chi();
    1.0 / (4.0 * params.n_f64() * params.alpha * params.alpha * chi * chi * tau * tau) + params.kappa * tau / 6.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaSensitivity {
    /// Angle orthogonal to the rotated mean spin.
    pub phi: f64,
    /// Moment assembly at `phi`.
    pub value: f64,
    /// Moment assembly at φ = π/2, absent when that point is insensitive.
    pub at_half_pi: Option<f64>,
    pub closed_form: f64,
    pub short_time: f64,
    pub flags: Vec<Validity>,
}

/// Sensitivity with photon loss from the moments and from the closed forms.
pub fn kappa_sensitivity(params: &SystemParams, tau1: f64, tau2: f64) -> Result<KappaSensitivity> {
    let m = kappa_moments(params, tau1, tau2, 0.0)?;
    let phi = auto_phi(&m);
    let value = sensitivity_from_moments(&m, phi, 0.0)?;
    let at_half_pi = sensitivity_from_moments(&m, PI / 2.0, 0.0).ok();
    let sqrt_n = params.n_f64().sqrt();
    let chi = params.chi();
    Ok(KappaSensitivity {
        phi,
        value,
        at_half_pi,
        closed_form: kappa_closed_form(params, tau1, tau2)?,
        short_time: kappa_short_time(params, tau1),
        flags: vec![
            Validity::new("chi_sqrt_n_tau_small", chi * sqrt_n * tau1.max(tau2) <= 0.1),
            Validity::new("kappa_tau_small", params.kappa * tau1.max(tau2) <= 0.1),
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaOptimum {
    /// (3/(κχ²Nα²))^{1/3}.
    pub t_opt: f64,
    /// (1/4)(3κ²/(χ²Nα²))^{1/3}.
    pub delta_beta_sq: f64,
}

/// Minimum of the short-time form over τ.
pub fn kappa_optimum(params: &SystemParams) -> Result<KappaOptimum> {
    let kappa = params.kappa;
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa optimum needs kappa > 0".into()));
    }
    let chi = params.chi();
    let q = chi * chi * params.n_f64() * params.alpha * params.alpha;
    Ok(KappaOptimum { t_opt: (3.0 / (kappa * q)).cbrt(), delta_beta_sq: 0.25 * (3.0 * kappa * kappa / q).cbrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{ideal_sensitivity, Observable};

    fn p(n: u64, alpha: f64, kappa: f64) -> SystemParams {
        SystemParams::with_chi(n, alpha, 1.0).unwrap().with_kappa(kappa).unwrap()
    }

    #[test]
    fn reduces_to_ideal_without_loss() {
        let params = p(8, 3.0, 0.0);
        let a = kappa_moments(&params, 0.2, 0.2, 0.05).unwrap();
        let b = ideal_moments(&params, 0.2, 0.05).unwrap();
        assert_eq!(a, b);
        // general path at κ = 0 with τ₁ = τ₂ still agrees
        let c = kappa_moments(&p(8, 3.0, 1e-300), 0.2, 0.2, 0.05).unwrap();
        assert!((c.splus - b.splus).norm() < 1e-12);
        assert!((c.splus_sq - b.splus_sq).norm() < 1e-12);
    }

    #[test]
    fn continuous_in_kappa() {
        let a = kappa_moments(&p(6, 2.0, 1e-8), 0.2, 0.25, 0.05).unwrap();
        let b = kappa_moments(&p(6, 2.0, 0.0), 0.2, 0.25, 0.05).unwrap();
        assert!((a.splus - b.splus).norm() < 1e-6);
        assert!((a.splus_sq - b.splus_sq).norm() < 1e-6);
    }

    #[test]
    fn residual_rotation_small_kappa_tau() {
        let (chi, alpha, kappa, tau) = (1.0, 30.0, 0.01, 0.02);
        let params = p(10, alpha, kappa);
        let m = kappa_moments(&params, tau, tau, 0.0).unwrap();
        let want = chi * alpha * alpha * kappa * tau * tau;
        assert!((m.splus.arg().abs() - want).abs() / want < 0.05, "{} vs {want}", m.splus.arg());
    }

    #[test]
    fn analytic_slope_matches_finite_difference() {
        let params = p(6, 2.0, 1.0);
        let m = kappa_moments(&params, 0.2, 0.3, 0.05).unwrap();
        for phi in [0.4, PI / 2.0, 2.5] {
            let fd =
                crate::kernels::finite_difference_slope(|b| kappa_moments(&params, 0.2, 0.3, b).unwrap().mean(phi), 0.05, 1.0).unwrap();
            assert!((m.slope(phi).unwrap() - fd.value).abs() < 1e-6 * fd.value.abs().max(1e-3));
        }
    }

    #[test]
    fn closed_form_limits() {
        let params = p(50, 10.0, 0.0);
        let c = kappa_closed_form(&params, 0.01, 0.01).unwrap();
        assert!((c - 1.0 / (4.0 * 50.0 * 100.0 * 1e-4)).abs() / c < 1e-12);
        let tiny = kappa_closed_form(&p(50, 10.0, 1e-9), 0.01, 0.01).unwrap();
        assert!((tiny - c).abs() / c < 1e-6);
        // short-κτ expansion
        let params = p(1000, 100.0, 0.5);
        let tau = 1e-3;
        let cf = kappa_closed_form(&params, tau, tau).unwrap();
        let st = kappa_short_time(&params, tau);
        assert!((cf - st).abs() / st < 1e-3);
        // closed form against the moment assembly deep in the short-time regime
        let params = p(100, 1000.0, 50.0);
        let tau = 2e-4;
        let s = kappa_sensitivity(&params, tau, tau).unwrap();
        assert!((s.value - s.closed_form).abs() / s.value < 1e-2, "{} vs {}", s.value, s.closed_form);
        let ideal = ideal_sensitivity(&p(100, 1000.0, 0.0), tau, Observable::SpinY).unwrap().value;
        assert!(s.value > ideal);
    }

    #[test]
    fn stable_f_matches_direct_formula() {
        let (kappa, t1, t2): (f64, f64, f64) = (3.0, 0.4, 0.55);
        let direct = (-kappa * t1).exp() * (2.0 * kappa * t1 + (-kappa * t2).exp() + kappa * (t2 - t1) * (-kappa * t2).exp()) - 1.0;
        assert!((f_over_kappa_sq(kappa, t1, t2) * kappa * kappa - direct).abs() < 1e-14);
        let k: f64 = 1e-5;
        let direct = (-k * t1).exp() * (2.0 * k * t1 + (-k * t2).exp() + k * (t2 - t1) * (-k * t2).exp()) - 1.0;
        let series = f_over_kappa_sq(k, t1, t2) * k * k;
        assert!((series - direct).abs() < 1e-15);
        // the two branches meet smoothly
        let kb = 1e-5 / (t1 + t2);
        let below = f_over_kappa_sq(kb * (1.0 - 1e-9), t1, t2);
        let above = f_over_kappa_sq(kb * (1.0 + 1e-9), t1, t2);
        assert!((below - above).abs() < 1e-9 * below.abs());
    }

    #[test]
    fn optimum_minimizes_short_form() {
        let params = p(1000, 100.0, 5.0);
        let o = kappa_optimum(&params).unwrap();
        let v = kappa_short_time(&params, o.t_opt);
        assert!((v - o.delta_beta_sq).abs() / v < 1e-12);
        assert!(kappa_short_time(&params, 0.95 * o.t_opt) > v);
        assert!(kappa_short_time(&params, 1.05 * o.t_opt) > v);
    }
}
