//! Cross-module oracle pairs and randomized property suites.

use crate::config::RawConfig;
use crate::output::fmt_f64;
use crate::scenario::{Kind, Scenario};
use crate::sweep::run_sensitivity;
use cavity_sense::analytic::{
    bosonic_cat_components, detection_noise_sensitivity, gamma_moments, gamma_sensitivity, gaussian_qfi, ideal_moments, ideal_qfi,
    ideal_sensitivity, kappa_moments, kappa_protocol_sensitivity, loss_spin_density, qfi_with_loss, wigner_cat, GridSpec, NoiseRegime,
    Observable, QfiMethod,
};
use cavity_sense::kernels::{bessel_j, finite_difference_slope, jacobi_anger_sum, CutoffPolicy};
use cavity_sense::linalg::trace_distance;
use cavity_sense::simulator::{
    build_hamiltonian, default_n_max, evolve_lindblad, evolve_unitary, qfi_mixed, run_protocol, FockOp, HamiltonianSpec, JointSpace,
    JointState, JumpSet, ProtocolSetup, SimConfig, SpinOp, SpinSpace,
};
use cavity_sense::{
    coherent_spin_state, sensitivity_from_moments, spin_operators, MeasurementAngle, ProtocolConfig, SpinAxis, SystemParams,
};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

/// Randomized cases per property suite.
pub const CASES: usize = 100;
const SEED: u64 = 0x5eed_ca75;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

/// Outcome of one check: the worst measured deviation over its cases.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when |measured − expected| ≤ tolerance.
    pub fn within(name: &str, cases: usize, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = (measured - expected).abs() <= tolerance;
        Self { name: name.into(), cases, measured, expected, tolerance, pass }
    }

    /// Passes when measured ≥ expected − tolerance.
    pub fn at_least(name: &str, cases: usize, measured: f64, expected: f64, tolerance: f64) -> Self {
        let pass = measured >= expected - tolerance;
        Self { name: name.into(), cases, measured, expected, tolerance, pass }
    }

    fn failed(name: &str, why: impl std::fmt::Display) -> Self {
        eprintln!("{name}: {why}");
        Self { name: name.into(), cases: 0, measured: f64::NAN, expected: 0.0, tolerance: 0.0, pass: false }
    }

    pub fn line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.name,
            self.cases,
            fmt_f64(self.measured),
            fmt_f64(self.expected),
            fmt_f64(self.tolerance),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut s = String::from("name,cases,measured,expected,tolerance,status\n");
        for c in &self.checks {
            s.push_str(&c.line());
            s.push('\n');
        }
        s
    }
}

type CheckFn = fn(&mut ChaCha8Rng) -> cavity_sense::Result<Check>;

/// Names of the checks run at `level`.
pub fn suite(level: Level) -> Vec<(&'static str, CheckFn)> {
    let mut v: Vec<(&'static str, CheckFn)> = vec![
        ("su2_closure", su2_closure),
        ("casimir", casimir),
        ("spm_coherent_state", spm_coherent_state),
        ("slope_vs_finite_difference", slope_vs_finite_difference),
        ("bessel_recurrence", bessel_recurrence),
        ("bessel_sum_rule", bessel_sum_rule),
        ("cutoff_doubling", cutoff_doubling),
        ("ideal_closed_form_vs_moments", ideal_closed_form_vs_moments),
        ("gamma_closed_form_vs_moments", gamma_closed_form_vs_moments),
        ("detection_noise_vs_moments", detection_noise_vs_moments),
        ("qfi_revival", qfi_revival),
        ("qfi_floor", qfi_floor),
        ("cramer_rao_ideal", cramer_rao_ideal),
        ("cramer_rao_kappa", cramer_rao_kappa),
        ("kappa_continuity", kappa_continuity),
        ("wigner_normalization", wigner_normalization),
        ("low_rank_qfi", low_rank_qfi),
        ("tavis_cummings_energy", tavis_cummings_energy),
        ("dispersive_conservation", dispersive_conservation),
        ("photon_loss_spm", photon_loss_spm),
        ("truncation_doubling", truncation_doubling),
        ("oracle_ideal_qfi_statevector", oracle_ideal_qfi),
        ("oracle_loss_density_lindblad", oracle_loss_density),
        ("oracle_kappa_moments_lindblad", oracle_kappa_moments),
        ("oracle_gamma_slope_lindblad", oracle_gamma_slope),
        ("csv_determinism", csv_determinism),
        ("empty_grid_rejected", empty_grid_rejected),
    ];
    if level == Level::Full {
        v.push(("oracle_eigen_vs_gaussian_qfi_n1000", eigen_vs_gaussian_n1000));
        v.push(("resonant_envelope_scaling", resonant_envelope_scaling));
    }
    v
}

/// Runs every check at `level`, sequentially and with fixed seeds.
pub fn run(level: Level) -> Report {
    let start = Instant::now();
    let checks = suite(level)
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED + i as u64);
            let t0 = Instant::now();
            let c = match f(&mut rng) {
                Ok(c) => c,
                Err(e) => Check::failed(name, e),
            };
            if std::env::var_os("CAVITYSENSE_VALIDATE_TIMING").is_some() {
                eprintln!("{name}: {:.2} s", t0.elapsed().as_secs_f64());
            }
            c
        })
        .collect();
    Report { checks, seconds: start.elapsed().as_secs_f64() }
}

fn max_abs(a: &Array2<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn su2_closure(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=64u64);
        let (x, y, z) = spin_operators(n)?;
        let i = ci(0.0, 1.0);
        let comm = |a: &Array2<Complex64>, b: &Array2<Complex64>| a.dot(b) - b.dot(a);
        worst = worst
            .max(max_abs(&(comm(&x, &y) - z.mapv(|v| v * i))))
            .max(max_abs(&(comm(&y, &z) - x.mapv(|v| v * i))))
            .max(max_abs(&(comm(&z, &x) - y.mapv(|v| v * i))));
    }
    Ok(Check::within("su2_closure", CASES, worst, 0.0, 1e-12))
}

fn casimir(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=64u64);
        let (x, y, z) = spin_operators(n)?;
        let s = n as f64 / 2.0;
        let mut c = x.dot(&x) + y.dot(&y) + z.dot(&z);
        for k in 0..c.nrows() {
            c[[k, k]] -= s * (s + 1.0);
        }
        worst = worst.max(max_abs(&c));
    }
    Ok(Check::within("casimir", CASES, worst, 0.0, 1e-12))
}

fn spm_coherent_state(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=64u64);
        let (x, y, _) = spin_operators(n)?;
        let i = ci(0.0, 1.0);
        let sp = &x + &y.mapv(|v| v * i);
        let sm = &x - &y.mapv(|v| v * i);
        let psi = Array1::from(coherent_spin_state(n, SpinAxis::PlusX)?.to_vector());
        let e: Complex64 = psi.iter().zip(sp.dot(&sm).dot(&psi).iter()).map(|(a, b)| a.conj() * b).sum();
        let nf = n as f64;
        worst = worst.max(rel(e.re, nf * (nf + 1.0) / 4.0));
    }
    Ok(Check::within("spm_coherent_state", CASES, worst, 0.0, 1e-12))
}

fn slope_vs_finite_difference(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(2..=200u64);
        let alpha = rng.random_range(1.0..30.0);
        let chi_tau = rng.random_range(0.01..0.5);
        let phi = rng.random_range(0.5..PI);
        let params = SystemParams::with_chi(n, alpha, 1.0)?;
        let tau = chi_tau / (n as f64).sqrt();
        let analytic = ideal_moments(&params, tau, 0.0)?.slope(phi)?;
        let scale = 1.0 / (alpha * (n as f64).sqrt());
        let fd = finite_difference_slope(|b| ideal_moments(&params, tau, b).map(|m| m.mean(phi)).unwrap_or(f64::NAN), 0.0, scale)?;
        worst = worst.max(rel(fd.value, analytic));
    }
    Ok(Check::within("slope_vs_finite_difference", CASES, worst, 0.0, 1e-6))
}

fn bessel_recurrence(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    while cases < CASES {
        let z = ci(rng.random_range(-100.0..100.0), rng.random_range(-100.0..100.0));
        if z.norm() > 100.0 || z.norm() < 1e-3 {
            continue;
        }
        cases += 1;
        let n = rng.random_range(-50..=50i64);
        let lhs = bessel_j(n - 1, z)? + bessel_j(n + 1, z)?;
        let jn = bessel_j(n, z)?;
        let rhs = jn * (2.0 * n as f64) / z;
        let scale = lhs.norm().max(rhs.norm()).max(jn.norm()).max(1e-300);
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    Ok(Check::within("bessel_recurrence", CASES, worst, 0.0, 1e-10))
}

fn i_pow_neg(n: i64) -> Complex64 {
    [ci(1.0, 0.0), ci(0.0, -1.0), ci(-1.0, 0.0), ci(0.0, 1.0)][n.rem_euclid(4) as usize]
}

fn bessel_sum_rule(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let x = ci(rng.random_range(-200.0..200.0), 0.0);
        let r = jacobi_anger_sum(x, |n| i_pow_neg(n) * bessel_j(n, x).unwrap_or_default(), CutoffPolicy::default())?;
        worst = worst.max((r.value - 1.0).norm() - r.tail_bound);
    }
    Ok(Check::within("bessel_sum_rule", CASES, worst.max(0.0), 0.0, 1e-10))
}

fn cutoff_doubling(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let x = ci(rng.random_range(-80.0..80.0), rng.random_range(-5.0..5.0));
        let theta = rng.random_range(0.0..PI);
        let p = rng.random_range(1.0..50.0);
        let w = |n: i64| ci((n as f64 * theta).cos().abs().powf(p), 0.0);
        let a = jacobi_anger_sum(x, w, CutoffPolicy::default())?;
        let b = jacobi_anger_sum(x, w, CutoffPolicy { margin_factor: 2.0, ..CutoffPolicy::default() })?;
        let excess = (a.value - b.value).norm() - a.tail_bound - b.tail_bound;
        worst = worst.max(excess / a.value.norm().max(1.0));
    }
    Ok(Check::within("cutoff_doubling", CASES, worst.max(0.0), 0.0, 1e-10))
}

fn ideal_closed_form_vs_moments(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=500u64);
        let params = SystemParams::with_chi(n, rng.random_range(1.0..100.0), 1.0)?;
        let tau = rng.random_range(0.001..1.0) / (n as f64).sqrt();
        let closed = ideal_sensitivity(&params, tau, Observable::SpinY)?.value;
        let assembled = sensitivity_from_moments(&ideal_moments(&params, tau, 0.0)?, FRAC_PI_2, 0.0)?;
        worst = worst.max(rel(assembled, closed));
    }
    Ok(Check::within("ideal_closed_form_vs_moments", CASES, worst, 0.0, 1e-8))
}

fn gamma_closed_form_vs_moments(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(2..=1000u64);
        let tau = rng.random_range(0.001..0.5) / (n as f64).sqrt();
        let params = SystemParams::with_chi(n, rng.random_range(10.0..1000.0), 1.0)?.with_gamma(rng.random_range(0.0..0.5) / tau)?;
        let s = gamma_sensitivity(&params, tau, MeasurementAngle::Fixed(rng.random_range(0.3..PI)))?;
        worst = worst.max(rel(s.value, s.closed_form.unwrap_or(f64::NAN)));
    }
    Ok(Check::within("gamma_closed_form_vs_moments", CASES, worst, 0.0, 1e-8))
}

fn detection_noise_vs_moments(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=1000u64);
        let params = SystemParams::with_chi(n, rng.random_range(1.0..100.0), 1.0)?;
        let tau = rng.random_range(0.001..1.0) / (n as f64).sqrt();
        let sigma = rng.random_range(0.0..2.0) * (n as f64).sqrt();
        let closed = detection_noise_sensitivity(&params, tau, FRAC_PI_2, sigma, NoiseRegime::Ideal)?.value;
        let assembled = sensitivity_from_moments(&ideal_moments(&params, tau, 0.0)?, FRAC_PI_2, sigma)?;
        worst = worst.max(rel(assembled, closed));
    }
    Ok(Check::within("detection_noise_vs_moments", CASES, worst, 0.0, 1e-8))
}

fn qfi_revival(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = [2u64, 4, 8][rng.random_range(0..3)];
        let k = rng.random_range(1..=3) as f64;
        let params = SystemParams::with_chi(n, rng.random_range(0.5..50.0), 1.0)?;
        worst = worst.max((ideal_qfi(&params, k * PI).result.value - 4.0).abs());
    }
    Ok(Check::within("qfi_revival", CASES, worst, 0.0, 1e-9))
}

fn qfi_floor(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut least = f64::INFINITY;
    for _ in 0..CASES {
        let n = rng.random_range(1..=2000u64);
        let alpha = rng.random_range(0.5..100.0);
        let t = rng.random_range(0.0..10.0) / (n as f64).sqrt();
        let params = SystemParams::with_chi(n, alpha, 1.0)?.with_kappa(rng.random_range(0.0..100.0))?;
        least = least.min(ideal_qfi(&params, t).result.value).min(gaussian_qfi(&params, t));
        if n <= 12 {
            let rho = loss_spin_density(&params, t)?;
            least = least.min(qfi_with_loss(&rho, &params, t, QfiMethod::Eigendecomposition)?.value);
        }
    }
    Ok(Check::at_least("qfi_floor", CASES, least, 4.0, 1e-9))
}

fn cramer_rao_ideal(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut least = f64::INFINITY;
    for _ in 0..CASES {
        let n = rng.random_range(1..=300u64);
        let params = SystemParams::with_chi(n, rng.random_range(1.0..50.0), 1.0)?;
        let tau = rng.random_range(0.001..1.2) / (n as f64).sqrt();
        let s = ideal_sensitivity(&params, tau, Observable::SpinY)?.value;
        least = least.min(s - 1.0 / ideal_qfi(&params, tau).result.value);
    }
    Ok(Check::at_least("cramer_rao_ideal", CASES, least, 0.0, 1e-9))
}

fn cramer_rao_kappa(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut least = f64::INFINITY;
    for _ in 0..CASES {
        let n = rng.random_range(1..=8u64);
        let params = SystemParams::with_chi(n, rng.random_range(1.0..6.0), 1.0)?.with_kappa(rng.random_range(0.01..5.0))?;
        let tau = rng.random_range(0.01..0.5);
        let s = kappa_protocol_sensitivity(&params, tau, tau, MeasurementAngle::Auto, 0.0)?;
        let rho = loss_spin_density(&params, tau)?;
        let f = qfi_with_loss(&rho, &params, tau, QfiMethod::Eigendecomposition)?.value;
        least = least.min(s - 1.0 / f);
    }
    Ok(Check::at_least("cramer_rao_kappa", CASES, least, 0.0, 1e-9))
}

fn kappa_continuity(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=100u64);
        let base = SystemParams::with_chi(n, rng.random_range(1.0..5.0), 1.0)?;
        let (t1, t2, b) = (rng.random_range(0.01..0.5), rng.random_range(0.01..0.5), rng.random_range(-0.1..0.1));
        let a = kappa_moments(&base, t1, t2, b)?;
        let c = kappa_moments(&base.with_kappa(1e-8)?, t1, t2, b)?;
        worst = worst.max(crel(c.splus, a.splus).min((c.splus - a.splus).norm()));
        worst = worst.max(crel(c.splus_sq, a.splus_sq).min((c.splus_sq - a.splus_sq).norm()));
    }
    Ok(Check::within("kappa_continuity", CASES, worst, 0.0, 1e-6))
}

fn wigner_normalization(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let n = rng.random_range(1..=8u64);
        let alpha = rng.random_range(0.5..3.0);
        let comps = bosonic_cat_components(n, alpha, rng.random_range(0.0..1.0))?;
        let grid = wigner_cat(&comps, GridSpec::square(ci(0.0, 0.0), alpha + 4.0, 0.125))?;
        worst = worst.max((grid.integral() - 1.0).abs());
    }
    Ok(Check::within("wigner_normalization", CASES, worst, 0.0, 1e-3))
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Array2<Complex64> {
    let mut g = Array2::zeros((dim, dim));
    for i in 0..dim {
        for j in i..dim {
            let z =
                if i == j { ci(rng.random_range(-1.0..1.0), 0.0) } else { ci(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) };
            g[[i, j]] = z;
            g[[j, i]] = z.conj();
        }
    }
    g
}

fn low_rank_qfi(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..CASES {
        let dim = rng.random_range(2..=64usize);
        let rank = rng.random_range(1..=4usize).min(dim);
        let mut rho: Array2<Complex64> = Array2::zeros((dim, dim));
        let mut total = 0.0;
        for _ in 0..rank {
            let v: Vec<Complex64> = (0..dim).map(|_| ci(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let w = rng.random_range(0.1..1.0);
            total += w * v.iter().map(|z| z.norm_sqr()).sum::<f64>();
            for i in 0..dim {
                for j in 0..dim {
                    rho[[i, j]] += w * v[i] * v[j].conj();
                }
            }
        }
        rho.mapv_inplace(|z| z / total);
        let g = random_hermitian(rng, dim);
        let full = qfi_mixed(&rho, &g, false)?.value;
        let low = qfi_mixed(&rho, &g, true)?.value;
        worst = worst.max((full - low).abs() / (1.0 + full.abs()));
    }
    Ok(Check::within("low_rank_qfi", CASES, worst, 0.0, 1e-8))
}

fn tavis_cummings_energy(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let cfg = SimConfig::default();
    let mut worst = 0.0f64;
    let cases = 10;
    for _ in 0..cases {
        let n = rng.random_range(1..=4u64);
        let alpha = rng.random_range(0.5..2.5);
        let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha))?;
        let h = build_hamiltonian(&HamiltonianSpec::TavisCummings { g: 1.0, delta_c: rng.random_range(-1.0..1.0) }, &space, &cfg)?;
        let theta = rng.random_range(0.0..PI);
        let st = JointState::coherent(space, SpinAxis::Polar { theta, phi: rng.random_range(0.0..PI) }, ci(alpha, 0.0))?;
        let e0 = st.expect(&h).re;
        let out = evolve_unitary(&st, &h, rng.random_range(0.5..3.0), &cfg)?;
        worst = worst.max((out.expect(&h).re - e0).abs() / e0.abs().max(1.0));
    }
    Ok(Check::within("tavis_cummings_energy", cases, worst, 0.0, 1e-9))
}

fn dispersive_conservation(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let cfg = SimConfig::default();
    let mut worst = 0.0f64;
    let cases = 10;
    for _ in 0..cases {
        let n = rng.random_range(1..=6u64);
        let alpha = rng.random_range(0.5..2.5);
        let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha))?;
        let h = build_hamiltonian(&HamiltonianSpec::dispersive_full(1.0, rng.random_range(5.0..20.0)), &space, &cfg)?;
        let st = JointState::coherent(space, SpinAxis::Polar { theta: rng.random_range(0.0..PI), phi: 0.3 }, ci(alpha, 0.0))?;
        let out = evolve_unitary(&st, &h, rng.random_range(0.5..3.0), &cfg)?;
        for op in [space.spin_op(SpinOp::Z), space.fock_op(FockOp::Num)] {
            worst = worst.max((out.expect(&op).re - st.expect(&op).re).abs());
        }
    }
    Ok(Check::within("dispersive_conservation", cases, worst, 0.0, 1e-10))
}

fn photon_loss_spm(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let cfg = SimConfig::default();
    let mut worst = 0.0f64;
    let cases = 4;
    for _ in 0..cases {
        let n = rng.random_range(1..=4u64);
        let alpha = rng.random_range(0.5..1.5);
        let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha))?;
        let h = build_hamiltonian(&HamiltonianSpec::dispersive(1.0), &space, &cfg)?;
        let jumps = JumpSet::default().with_photon_loss(&space, rng.random_range(0.1..3.0))?;
        let st = JointState::coherent(space, SpinAxis::PlusX, ci(alpha, 0.0))?;
        let out = evolve_lindblad(&st, &h, &jumps, rng.random_range(0.1..0.5), &cfg)?;
        let nf = n as f64;
        worst = worst.max((out.moments().spm - nf * (nf + 1.0) / 4.0).abs());
    }
    Ok(Check::within("photon_loss_spm", cases, worst, 0.0, 1e-9))
}

fn truncation_doubling(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    let cases = 3;
    for _ in 0..cases {
        let params = SystemParams::with_chi(rng.random_range(2..=4u64), rng.random_range(1.0..2.0), 1.0)?;
        let config = ProtocolConfig::symmetric(rng.random_range(0.05..0.4), rng.random_range(-0.1..0.1));
        let base = ProtocolSetup::for_params(&params, &config);
        let a = run_protocol(&params, &config, &base)?.moments;
        let b = run_protocol(&params, &config, &ProtocolSetup { n_max: 2 * base.n_max, ..base })?.moments;
        worst = worst.max((a.splus - b.splus).norm()).max((a.splus_sq - b.splus_sq).norm()).max((a.spm - b.spm).abs());
    }
    Ok(Check::within("truncation_doubling", cases, worst, 0.0, 1e-8))
}

fn oracle_ideal_qfi(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let cfg = SimConfig::default();
    let (n, alpha) = (6u64, 3.0);
    let params = SystemParams::with_chi(n, alpha, 1.0)?;
    let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha))?;
    let h = build_hamiltonian(&HamiltonianSpec::dispersive(1.0), &space, &cfg)?;
    let st = JointState::coherent(space, SpinAxis::PlusX, ci(alpha, 0.0))?;
    let y = space.fock_op(FockOp::Y);
    let mut worst = 0.0f64;
    let cases = 10;
    for _ in 0..cases {
        let t = rng.random_range(0.0..0.6 / (n as f64).sqrt());
        let out = evolve_unitary(&st, &h, t, &cfg)?;
        worst = worst.max(rel(4.0 * out.variance(&y), ideal_qfi(&params, t).result.value));
    }
    Ok(Check::within("oracle_ideal_qfi_statevector", cases, worst, 0.0, 1e-8))
}

fn oracle_loss_density(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let (n, alpha) = (4u64, 2.0);
    let cfg = SimConfig { tol: 1e-11, ..SimConfig::default() };
    let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha))?;
    let h = build_hamiltonian(&HamiltonianSpec::dispersive(1.0), &space, &cfg)?;
    let st = JointState::coherent(space, SpinAxis::PlusX, ci(alpha, 0.0))?;
    let mut worst = 0.0f64;
    let cases = 2;
    for _ in 0..cases {
        let kappa = rng.random_range(0.5..5.0);
        let t = rng.random_range(0.05..0.2);
        let params = SystemParams::with_chi(n, alpha, 1.0)?.with_kappa(kappa)?;
        let jumps = JumpSet::default().with_photon_loss(&space, kappa)?;
        let mut out = evolve_lindblad(&st, &h, &jumps, t, &cfg)?;
        let theta: Vec<f64> = h.diagonal_values().iter().map(|z| -z.re * t).collect();
        out.apply_diagonal_phase(&theta);
        worst = worst.max(trace_distance(&out.spin_reduced(), &loss_spin_density(&params, t)?.data)?);
    }
    Ok(Check::within("oracle_loss_density_lindblad", cases, worst, 0.0, 1e-6))
}

fn oracle_kappa_moments(rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let mut worst = 0.0f64;
    let cases = 2;
    for _ in 0..cases {
        let params = SystemParams::with_chi(4, 1.5, 1.0)?.with_kappa(rng.random_range(0.2..2.0))?;
        let (t1, t2) = (rng.random_range(0.05..0.3), rng.random_range(0.05..0.3));
        let config = ProtocolConfig { tau1: t1, tau2: t2, ..ProtocolConfig::symmetric(t1, 0.05) };
        let mut setup = ProtocolSetup::for_params(&params, &config);
        setup.sim.tol = 1e-11;
        let sim = run_protocol(&params, &config, &setup)?.moments;
        let ana = kappa_moments(&params, t1, t2, 0.05)?;
        worst = worst.max(crel(sim.splus, ana.splus)).max(crel(sim.splus_sq, ana.splus_sq));
    }
    Ok(Check::within("oracle_kappa_moments_lindblad", cases, worst, 0.0, 1e-6))
}

fn oracle_gamma_slope(_rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let params = SystemParams::with_chi(4, 2.0, 1.0)?.with_gamma(0.1)?;
    let tau = 0.1;
    let h = 1e-4;
    let run = |b: f64| -> cavity_sense::Result<f64> {
        let config = ProtocolConfig::symmetric(tau, b);
        let mut setup = ProtocolSetup::for_params(&params, &config);
        setup.n_max = 16;
        setup.sim.leakage_bound = 1e-5;
        Ok(run_protocol(&params, &config, &setup)?.moments.mean(FRAC_PI_2))
    };
    let sim = (run(h)? - run(-h)?) / (2.0 * h);
    let ana = gamma_moments(&params, tau, 0.0)?.slope(FRAC_PI_2)?;
    Ok(Check::within("oracle_gamma_slope_lindblad", 1, rel(sim, ana), 0.0, 0.05))
}

const DETERMINISM_CONFIG: &str = "n = 1e6\nalpha = 1e4\ng = 11 kHz\nfreq_convention = hz2pi\nkappa = 150 kHz\nphi = auto\n\
sweep = time\ngrid.start = 10 ns\ngrid.stop = 1 us\ngrid.points = 64\ngrid.spacing = log\n";

fn csv_determinism(_rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let raw = RawConfig::parse(DETERMINISM_CONFIG, "determinism").expect("static config parses");
    let s = Scenario::from_raw(&raw, Some(Kind::Sensitivity)).expect("static config resolves");
    let render = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| cavity_sense::Error::Numeric(e.to_string()))?
            .install(|| run_sensitivity(&s).map(|t| t.render()).map_err(|e| cavity_sense::Error::Numeric(e.to_string())))
    };
    let a = render(1)?;
    let b = render(3)?;
    let differing = a.lines().zip(b.lines()).filter(|(x, y)| x != y).count() + a.lines().count().abs_diff(b.lines().count());
    Ok(Check::within("csv_determinism", 2, differing as f64, 0.0, 0.0))
}

fn empty_grid_rejected(_rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let raw = RawConfig::parse("n = 10\nalpha = 4\nchi = 1\nsweep = time\ngrid.start = 0\ngrid.stop = 1\ngrid.points = 0\n", "empty")
        .expect("static config parses");
    let rejected = Scenario::from_raw(&raw, Some(Kind::Sensitivity)).is_err();
    Ok(Check::within("empty_grid_rejected", 1, rejected as u8 as f64, 1.0, 0.0))
}

fn eigen_vs_gaussian_n1000(_rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let n = 1000u64;
    let alpha = 100.0 * (n as f64).sqrt();
    let params = SystemParams::with_chi(n, alpha, 1.0)?.with_kappa(alpha * (n as f64).sqrt() / 73.0)?;
    let t = cavity_sense::analytic::qfi_loss_optimum(&params)?.t_opt;
    let rho = loss_spin_density(&params, t)?;
    let eig = qfi_with_loss(&rho, &params, t, QfiMethod::Eigendecomposition)?.value;
    Ok(Check::within("oracle_eigen_vs_gaussian_qfi_n1000", 1, rel(gaussian_qfi(&params, t), eig), 0.0, 0.1))
}

fn resonant_envelope_scaling(_rng: &mut ChaCha8Rng) -> cavity_sense::Result<Check> {
    let cfg = SimConfig::default();
    let d10 = crate::dynamics::compare(10, 10.0, 1.0, 2.5, 1000, &cfg)?;
    let d20 = crate::dynamics::compare(10, 20.0, 1.0, 2.5, 2000, &cfg)?;
    // discrepancy ratio on doubling α, expected in [1/8, 1/2]
    Ok(Check::within("resonant_envelope_scaling", 2, d20 / d10, 0.3125, 0.1875))
}
