//! Photon loss: dying-cat toy model, the lossy spin density matrix and its
//! quantum Fisher information.

use super::{QfiRegime, QfiResult, Validity};
use crate::error::{Error, Result};
use crate::kernels::{cexpm1, gamma_p};
use crate::linalg::{adjoint_matmul, eigh};
use crate::params::SystemParams;
use crate::spin::{coherent_spin_state, m_of, SpinAxis, SpinDensityMatrix};
use ndarray::Array2;
use num_complex::Complex64;

/// Largest atom number accepted by the dense spin-matrix paths.
pub const MAX_DENSE_N: u64 = 10_000;

/// Two-component cat (|α₁⟩ + |α₂⟩)/√2 decaying at rate κ for time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyingCatSpec {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub kappa: f64,
    pub t: f64,
}

/// Coefficient of |α₁e^{−κt/2}⟩⟨α₂e^{−κt/2}| after decay, equal to ⟨α₂|α₁⟩^{1−e^{−κt}}.
pub fn dying_cat_coefficient(spec: &DyingCatSpec) -> Complex64 {
    let decayed = -(-spec.kappa * spec.t).exp_m1();
    let s = 0.5 * (spec.alpha1.norm_sqr() + spec.alpha2.norm_sqr());
    (-s * decayed + spec.alpha1 * spec.alpha2.conj() * decayed).exp()
}

/// F = 4 + 4[Im(α₁−α₂)]² e^{−κt} e^{−κ|α₁−α₂|²t} for the generator Y = i(a† − a).
pub fn dying_cat_qfi(spec: &DyingCatSpec) -> Result<QfiResult> {
    if !(spec.kappa >= 0.0) || !(spec.t >= 0.0) {
        return Err(Error::InvalidParameter("dying cat needs kappa >= 0 and t >= 0".into()));
    }
    let d = spec.alpha1 - spec.alpha2;
    if d.norm() < 1e-3 {
        return Err(Error::InvalidParameter("alpha1 and alpha2 are degenerate".into()));
    }
    let kt = spec.kappa * spec.t;
    let overlap = (-d.norm_sqr() * (-kt).exp() / 2.0).exp();
    let value = 4.0 + 4.0 * d.im * d.im * (-kt - kt * d.norm_sqr()).exp();
    Ok(QfiResult {
        value,
        regime: QfiRegime::DyingCat,
        flags: vec![Validity::new("kappa_t_small", kt <= 0.1), Validity::new("near_orthogonal", overlap < 1e-6)],
    })
}

/// Heuristic scale (χ²Nα²/κ²)^{1/3} of F_Q − 4 under photon loss.
pub fn dying_cat_scaling(params: &SystemParams) -> Result<f64> {
    if !(params.kappa > 0.0) {
        return Err(Error::InvalidParameter("scaling needs kappa > 0".into()));
    }
    let chi = params.chi();
    Ok((chi * chi * params.n_f64() * params.alpha * params.alpha / (params.kappa * params.kappa)).cbrt())
}

/// f(z, t) = κα²(1 − e^{−κt+iχzt})/(κ − iχz) + α²(e^{−κt} − 1).
pub fn loss_exponent(params: &SystemParams, z: f64, t: f64) -> Complex64 {
    let kappa = params.kappa;
    let a2 = params.alpha * params.alpha;
    if kappa == 0.0 || z == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let u = Complex64::new(kappa, -params.chi() * z);
    a2 * (-kappa * cexpm1(-u * t) / u + (-kappa * t).exp_m1())
}

/// Rotation angle c₁ = Im ∂_z f at z = 0, the mean-spin precession caused by loss.
pub fn loss_rotation(params: &SystemParams, t: f64) -> f64 {
    let kappa = params.kappa;
    let a2 = params.alpha * params.alpha;
    if kappa == 0.0 {
        return 0.0;
    }
    a2 * params.chi() * gamma_p(2, kappa * t) / kappa
}

fn check_dense(params: &SystemParams) -> Result<()> {
    if params.n > MAX_DENSE_N {
        return Err(Error::InvalidParameter(format!("dense spin matrices need N <= {MAX_DENSE_N}, got {}", params.n)));
    }
    Ok(())
}

/// Reduced spin state after time t of dispersive evolution with photon loss,
/// in the interaction frame: ρ_{mn} = c_m c_n e^{f(n−m, t)}.
pub fn loss_spin_density(params: &SystemParams, t: f64) -> Result<SpinDensityMatrix> {
    check_dense(params)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter("t must be >= 0".into()));
    }
    let n = params.n;
    let d = n as usize + 1;
    let c = coherent_spin_state(n, SpinAxis::PlusX)?;
    // f indexed by z + N, z = k_row − k_col = m_col − m_row
    let f: Vec<Complex64> = (0..2 * d - 1).map(|i| loss_exponent(params, i as f64 - n as f64, t)).collect();
    let mut data = Array2::zeros((d, d));
    for r in 0..d {
        for s in 0..d {
            let z = r + d - 1 - s;
            data[[r, s]] = (c.log_mag[r] + c.log_mag[s] + f[z]).exp();
        }
    }
    SpinDensityMatrix::new(n, data)
}

/// Evaluation path of the lossy QFI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfiMethod {
    Eigendecomposition,
    GaussianAnalytic,
}

/// Eigenvalues below this are treated as outside the support I.
const SUPPORT_FLOOR: f64 = 5e-15;
/// Pairs with λ_r + λ_s below this are dropped.
const PAIR_FLOOR: f64 = 1e-14;

/// Σ_{r,s} (λ_r−λ_s)²/(λ_r+λ_s)|O_rs|² for diagonal O, restricted to pairs
/// with at least one eigenvector in the support.
fn diagonal_generator_sum(rho: &Array2<Complex64>, o: &[f64]) -> Result<f64> {
    let (lam, v) = eigh(rho)?;
    let d = lam.len();
    let lam: Vec<f64> = lam.iter().map(|&x| x.max(0.0)).collect();
    let support: Vec<usize> = (0..d).filter(|&r| lam[r] >= SUPPORT_FLOOR).collect();
    let in_support: Vec<bool> = lam.iter().map(|&x| x >= SUPPORT_FLOOR).collect();
    // columns O|r⟩ for r in the support, then O_sr = ⟨s|O|r⟩
    let ov = Array2::from_shape_fn((d, support.len()), |(k, j)| v[[k, support[j]]] * o[k]);
    let o_sr = adjoint_matmul(&v, &ov);
    let mut total = 0.0;
    for (j, &r) in support.iter().enumerate() {
        for s in 0..d {
            let sum = lam[r] + lam[s];
            if sum < PAIR_FLOOR || s == r {
                continue;
            }
            let diff = lam[r] - lam[s];
            let term = diff * diff / sum * o_sr[[s, j]].norm_sqr();
            total += if in_support[s] { term } else { 2.0 * term };
        }
    }
    Ok(total)
}

/// QFI of the joint state whose spin part is ρ, for the displacement generator.
pub fn qfi_with_loss(rho: &SpinDensityMatrix, params: &SystemParams, t: f64, method: QfiMethod) -> Result<QfiResult> {
    if rho.n != params.n {
        return Err(Error::InvalidParameter("density matrix and params disagree on N".into()));
    }
    let chi = params.chi();
    let kappa = params.kappa;
    let sqrt_n = params.n_f64().sqrt();
    let flags = vec![
        Validity::new("chi_sqrt_n_below_kappa", chi * sqrt_n <= 0.1 * kappa),
        Validity::new("chi_sqrt_n_t_small", chi * sqrt_n * t <= 0.1),
    ];
    if method == QfiMethod::GaussianAnalytic && params.n >= 100 {
        return Ok(QfiResult { value: gaussian_qfi(params, t), regime: QfiRegime::LossGaussian, flags });
    }
    check_dense(params)?;
    let d = rho.data.nrows();
    let c1 = loss_rotation(params, t);
    let mut rotated = rho.data.clone();
    for r in 0..d {
        for s in 0..d {
            rotated[[r, s]] *= Complex64::from_polar(1.0, -c1 * (r as f64 - s as f64));
        }
    }
    let o: Vec<f64> = (0..d).map(|k| -2.0 * (chi * m_of(params.n, k) * t).sin()).collect();
    let sum = diagonal_generator_sum(&rotated, &o)?;
    let a2 = params.alpha * params.alpha;
    Ok(QfiResult { value: 4.0 + 2.0 * a2 * (-kappa * t).exp() * sum, regime: QfiRegime::LossEigendecomposition, flags })
}

/// Gaussian-coefficient evaluation
/// F = 4 + 4χ²Nα²t² e^{−κt}/(1 + 2Nσ²), σ² = (χα/κ)²[1 − e^{−κt}(1 + κt + κ²t²/2)].
pub fn gaussian_qfi(params: &SystemParams, t: f64) -> f64 {
    let chi = params.chi();
    let n = params.n_f64();
    let a2 = params.alpha * params.alpha;
    let kappa = params.kappa;
    let sigma2 = if kappa == 0.0 { 0.0 } else { chi * chi * a2 / (kappa * kappa) * gamma_p(3, kappa * t) };
    4.0 + 4.0 * chi * chi * n * a2 * t * t * (-kappa * t).exp() / (1.0 + 2.0 * sigma2 * n)
}

/// κt ≪ 1 form F = 4 + 4Nα²χ²t²/(1 + Nχ²κα²t³/3).
pub fn gaussian_qfi_short(params: &SystemParams, t: f64) -> f64 {
    let chi = params.chi();
    let n = params.n_f64();
    let a2 = params.alpha * params.alpha;
    4.0 + 4.0 * n * a2 * chi * chi * t * t / (1.0 + n * chi * chi * params.kappa * a2 * t.powi(3) / 3.0)
}

/// Where χ√N sits relative to the window κ/α < χ√N < κα².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowPosition {
    DissipationTooStrong,
    Inside,
    Saturated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossOptimum {
    /// (6/(χ²α²κN))^{1/3}.
    pub t_opt: f64,
    /// 4 + 4(4χ²α²N/(3κ²))^{1/3}.
    pub f_opt: f64,
    /// κ/α.
    pub lower: f64,
    /// κα².
    pub upper: f64,
    /// χ√N.
    pub chi_sqrt_n: f64,
    pub position: WindowPosition,
    /// f_opt inside the window, 4 + 8α² when saturated, 4 when too dissipative.
    pub reported: f64,
}

/// Closed-form optimum of the Gaussian QFI with its validity window.
pub fn qfi_loss_optimum(params: &SystemParams) -> Result<LossOptimum> {
    let kappa = params.kappa;
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("loss optimum needs kappa > 0".into()));
    }
    let chi = params.chi();
    let n = params.n_f64();
    let a = params.alpha;
    let t_opt = (6.0 / (chi * chi * a * a * kappa * n)).cbrt();
    let f_opt = 4.0 + 4.0 * (4.0 * chi * chi * a * a * n / (3.0 * kappa * kappa)).cbrt();
    let lower = kappa / a;
    let upper = kappa * a * a;
    let chi_sqrt_n = chi * n.sqrt();
    let (position, reported) = if chi_sqrt_n <= lower {
        (WindowPosition::DissipationTooStrong, 4.0)
    } else if chi_sqrt_n >= upper {
        (WindowPosition::Saturated, 4.0 + 8.0 * a * a)
    } else {
        (WindowPosition::Inside, f_opt)
    };
    Ok(LossOptimum { t_opt, f_opt, lower, upper, chi_sqrt_n, position, reported })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::ideal_qfi;

    fn p(n: u64, alpha: f64, kappa: f64) -> SystemParams {
        SystemParams::with_chi(n, alpha, 1.0).unwrap().with_kappa(kappa).unwrap()
    }

    #[test]
    fn exponent_vanishes_on_diagonal_and_without_loss() {
        let params = p(6, 2.0, 3.0);
        assert_eq!(loss_exponent(&params, 0.0, 0.7), Complex64::new(0.0, 0.0));
        assert_eq!(loss_exponent(&p(6, 2.0, 0.0), 3.0, 0.7), Complex64::new(0.0, 0.0));
        // direct evaluation of κα²(1 − e^{−κt+iχzt})/(κ − iχz) + α²(e^{−κt} − 1)
        let (k, a2, z, t) = (3.0, 4.0, 2.0, 0.7);
        let u = Complex64::new(k, -z);
        let want = k * a2 * (1.0 - (-u * t).exp()) / u + a2 * (-k * t).exp_m1();
        assert!((loss_exponent(&params, z, t) - want).norm() < 1e-13);
        // ∂_z f at 0 is i·c₁
        let h = 1e-5;
        let df = (loss_exponent(&params, h, t) - loss_exponent(&params, -h, t)) / (2.0 * h);
        assert!((df.im - loss_rotation(&params, t)).abs() < 1e-8);
    }

    #[test]
    fn density_matrix_invariants() {
        let rho = loss_spin_density(&p(8, 2.0, 5.0), 0.1).unwrap();
        rho.check_invariants().unwrap();
        let pure = loss_spin_density(&p(8, 2.0, 5.0), 0.0).unwrap();
        let c = coherent_spin_state(8, SpinAxis::PlusX).unwrap().to_vector();
        for r in 0..9 {
            for s in 0..9 {
                assert!((pure.data[[r, s]] - c[r] * c[s]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn eigen_path_matches_ideal_without_loss() {
        let params = p(10, 4.0, 0.0);
        let rho = loss_spin_density(&params, 0.15).unwrap();
        let f = qfi_with_loss(&rho, &params, 0.15, QfiMethod::Eigendecomposition).unwrap();
        let ideal = ideal_qfi(&params, 0.15).result.value;
        assert!((f.value - ideal).abs() / ideal < 1e-9);
    }

    #[test]
    fn gaussian_short_time_limits() {
        let params = p(1000, 30.0, 1e-9);
        let t = 1e-4;
        let g = gaussian_qfi(&params, t);
        assert!((g - (4.0 + 4.0 * 1000.0 * 900.0 * t * t)).abs() / g < 1e-8);
        let params = p(1000, 30.0, 50.0);
        let t = 1e-5;
        assert!((gaussian_qfi(&params, t) - gaussian_qfi_short(&params, t)).abs() / gaussian_qfi(&params, t) < 1e-3);
    }

    #[test]
    fn optimum_maximizes_short_form() {
        let params = p(1000, 3000.0, 500.0);
        let o = qfi_loss_optimum(&params).unwrap();
        let at = gaussian_qfi_short(&params, o.t_opt);
        assert!((at - o.f_opt).abs() / o.f_opt < 1e-12);
        for s in [0.9, 1.1] {
            assert!(gaussian_qfi_short(&params, s * o.t_opt) < at);
        }
        let approx = 4.0 + 4.4 * (1000.0 * 3000.0f64.powi(2) / 500.0f64.powi(2)).cbrt();
        assert!((o.f_opt - approx).abs() / o.f_opt < 1e-3);
        assert_eq!(o.position, WindowPosition::Inside);
    }

    #[test]
    fn window_edges() {
        let strong = qfi_loss_optimum(&p(100, 2.0, 1e3)).unwrap();
        assert_eq!(strong.position, WindowPosition::DissipationTooStrong);
        let weak = qfi_loss_optimum(&p(100, 2.0, 1e-3)).unwrap();
        assert_eq!(weak.position, WindowPosition::Saturated);
        assert_eq!(weak.reported, 36.0);
    }

    #[test]
    fn dying_cat_limits() {
        let base = DyingCatSpec { alpha1: Complex64::new(0.0, 3.0), alpha2: Complex64::new(0.0, -3.0), kappa: 0.0, t: 1.0 };
        assert_eq!(dying_cat_qfi(&base).unwrap().value, 4.0 + 4.0 * 36.0);
        let real = DyingCatSpec { alpha1: Complex64::new(3.0, 0.0), alpha2: Complex64::new(-3.0, 0.0), ..base };
        assert_eq!(dying_cat_qfi(&real).unwrap().value, 4.0);
        let degenerate = DyingCatSpec { alpha2: base.alpha1, ..base };
        assert!(dying_cat_qfi(&degenerate).is_err());
        assert_eq!(dying_cat_coefficient(&DyingCatSpec { kappa: 0.0, ..base }), Complex64::new(1.0, 0.0));
        // diagonal dyads keep unit weight
        let diag = DyingCatSpec { alpha2: base.alpha1, kappa: 2.0, ..base };
        assert!((dying_cat_coefficient(&diag) - 1.0).norm() < 1e-15);
        // small κt approximation exp[−κt|α₁−α₂|²/2]
        let small = DyingCatSpec { kappa: 1e-4, ..base };
        let approx = (-1e-4 * 36.0 / 2.0f64).exp();
        assert!((dying_cat_coefficient(&small).re - approx).abs() < 1e-6);
    }
}
