//! Analytic results checked against exact propagation of the joint state.

use cavity_sense::analytic::{
    dying_cat_coefficient, dying_cat_qfi, gamma_moments, ideal_moments, ideal_qfi, kappa_moments, loss_spin_density, DyingCatSpec,
};
use cavity_sense::linalg::trace_distance;
use cavity_sense::simulator::{
    build_hamiltonian, coherent_fock, default_n_max, evolve_lindblad, evolve_unitary, fock_operator, qfi_mixed, run_protocol, CsrMatrix,
    FockOp, HamiltonianSpec, JointSpace, JointState, JumpSet, ProtocolSetup, SimConfig, SpinSpace,
};
use cavity_sense::{MomentSet, ProtocolConfig, ProtocolVariant, SpinAxis, SystemParams};
use ndarray::Array1;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// State after the entangling step e^{−iχt a†aS_z}|+x⟩|α⟩.
fn entangled(n: u64, alpha: f64, chi: f64, t: f64) -> (JointSpace, JointState) {
    let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha)).unwrap();
    let cfg = SimConfig::default();
    let h = build_hamiltonian(&HamiltonianSpec::dispersive(chi), &space, &cfg).unwrap();
    let st = JointState::coherent(space, SpinAxis::PlusX, c(alpha, 0.0)).unwrap();
    (space, evolve_unitary(&st, &h, t, &cfg).unwrap())
}

#[test]
fn ideal_qfi_equals_statevector_variance() {
    let (n, alpha) = (10, 4.0);
    let params = SystemParams::with_chi(n, alpha, 1.0).unwrap();
    for t in [0.0, 0.02, 0.1, 0.55 / (n as f64).sqrt()] {
        let (space, st) = entangled(n, alpha, 1.0, t);
        let f = 4.0 * st.variance(&space.fock_op(FockOp::Y));
        let want = ideal_qfi(&params, t).result.value;
        assert!((f - want).abs() / want < 1e-8, "t={t}: {f} vs {want}");
    }
}

#[test]
fn ideal_moments_match_protocol() {
    let params = SystemParams::with_chi(8, 3.0, 1.0).unwrap();
    let config = ProtocolConfig::symmetric(0.2, 0.05);
    let setup = ProtocolSetup::for_params(&params, &config);
    let sim = run_protocol(&params, &config, &setup).unwrap().moments;
    let ana = ideal_moments(&params, 0.2, 0.05).unwrap();
    assert!(rel(sim.splus, ana.splus) < 1e-8, "{} vs {}", sim.splus, ana.splus);
    assert!(rel(sim.splus_sq, ana.splus_sq) < 1e-8);
    assert!((sim.spm - ana.spm).abs() / ana.spm < 1e-10);
    // small β: ⟨S_y⟩ ≈ −2αβN sin(χτ/2)cos^{N−1}(χτ/2)
    let lead = -2.0 * 3.0 * 0.05 * 8.0 * (0.1f64).sin() * (0.1f64).cos().powi(7);
    let sy = sim.mean(std::f64::consts::FRAC_PI_2);
    assert!((sy - lead).abs() / lead.abs() < 0.01, "{sy} vs {lead}");
}

#[test]
fn loss_spin_density_matches_lindblad_reduced_state() {
    let (n, alpha, chi) = (4, 2.0, 1.0);
    let cfg = SimConfig { tol: 1e-11, ..SimConfig::default() };
    for ratio in [0.5, 5.0] {
        for chi_t in [0.05, 0.2] {
            let params = SystemParams::with_chi(n, alpha, chi).unwrap().with_kappa(ratio * chi).unwrap();
            let space = JointSpace::new(SpinSpace::Dicke(n), default_n_max(alpha)).unwrap();
            let h = build_hamiltonian(&HamiltonianSpec::dispersive(chi), &space, &cfg).unwrap();
            let jumps = JumpSet::default().with_photon_loss(&space, params.kappa).unwrap();
            let st = JointState::coherent(space, SpinAxis::PlusX, c(alpha, 0.0)).unwrap();
            let mut out = evolve_lindblad(&st, &h, &jumps, chi_t, &cfg).unwrap();
            // strip e^{−iHt}: apply e^{+iHt}
            let theta: Vec<f64> = h.diagonal_values().iter().map(|z| -z.re * chi_t).collect();
            out.apply_diagonal_phase(&theta);
            let ana = loss_spin_density(&params, chi_t).unwrap();
            let d = trace_distance(&out.spin_reduced(), &ana.data).unwrap();
            assert!(d < 1e-6, "kappa/chi={ratio} chi t={chi_t}: {d:e}");
        }
    }
}

fn kappa_case(tau1: f64, tau2: f64) -> (MomentSet, MomentSet) {
    let params = SystemParams::with_chi(6, 2.0, 1.0).unwrap().with_kappa(1.0).unwrap();
    let config = ProtocolConfig { tau1, tau2, ..ProtocolConfig::symmetric(tau1, 0.05) };
    let mut setup = ProtocolSetup::for_params(&params, &config);
    setup.sim.tol = 1e-11;
    let sim = run_protocol(&params, &config, &setup).unwrap().moments;
    (sim, kappa_moments(&params, tau1, tau2, 0.05).unwrap())
}

#[test]
fn kappa_moments_match_lindblad_protocol() {
    for (t1, t2) in [(0.2, 0.2), (0.15, 0.3)] {
        let (sim, ana) = kappa_case(t1, t2);
        assert!(rel(sim.splus, ana.splus) < 1e-6, "{t1},{t2}: {} vs {}", sim.splus, ana.splus);
        assert!(rel(sim.splus_sq, ana.splus_sq) < 1e-6, "{} vs {}", sim.splus_sq, ana.splus_sq);
        assert!((sim.spm - ana.spm).abs() / ana.spm < 1e-9);
    }
}

fn cat_state(a1: Complex64, a2: Complex64, dim: usize) -> (JointSpace, JointState) {
    let space = JointSpace::new(SpinSpace::Dicke(1), dim - 1).unwrap();
    let (u, v) = (coherent_fock(a1, dim), coherent_fock(a2, dim));
    let mut f: Vec<Complex64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
    let nrm = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    f.iter_mut().for_each(|z| *z /= nrm);
    (space, JointState::product(space, &[c(0.0, 0.0), c(1.0, 0.0)], &f).unwrap())
}

#[test]
fn dying_cat_matches_lindblad() {
    let (a1, a2, kappa, t) = (c(0.0, 2.0), c(0.0, -2.0), 1.0, 0.01);
    let dim = 50;
    let (space, st) = cat_state(a1, a2, dim);
    let cfg = SimConfig { tol: 1e-12, ..SimConfig::default() };
    let jumps = JumpSet::default().with_photon_loss(&space, kappa).unwrap();
    let out = evolve_lindblad(&st, &CsrMatrix::zeros(space.dim(), space.dim()), &jumps, t, &cfg).unwrap();
    let rho = out.fock_reduced();
    let spec = DyingCatSpec { alpha1: a1, alpha2: a2, kappa, t };
    let ct = dying_cat_coefficient(&spec);
    let s = (-kappa * t / 2.0).exp();
    let (u, v) = (Array1::from(coherent_fock(a1 * s, dim)), Array1::from(coherent_fock(a2 * s, dim)));
    let norm2 = 2.0 + 2.0 * (-(a1 - a2).norm_sqr() / 2.0).exp() * ((a1 * a2.conj()).im).cos();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let w = u[i] * u[j].conj() + v[i] * v[j].conj() + ct * u[i] * v[j].conj() + ct.conj() * v[i] * u[j].conj();
            worst = worst.max((rho[[i, j]] - w / norm2).norm());
        }
    }
    assert!(worst < 1e-6, "{worst:e}");
    let y = fock_operator(dim, FockOp::Y).to_dense();
    let f_sim = qfi_mixed(&rho, &y, false).unwrap().value;
    let f_ana = dying_cat_qfi(&spec).unwrap().value;
    assert!((f_sim - f_ana).abs() / f_ana < 0.02, "{f_sim} vs {f_ana}");
}

fn gamma_slope_case(params: SystemParams, chi_tau: f64) -> (f64, f64) {
    let chi = params.chi();
    let tau = chi_tau / chi;
    let h = 1e-4;
    let run = |b: f64| {
        let config = ProtocolConfig::symmetric(tau, b);
        let mut setup = ProtocolSetup::for_params(&params, &config);
        setup.n_max = default_n_max(params.alpha).min(30);
        setup.sim.leakage_bound = 1e-6;
        run_protocol(&params, &config, &setup).unwrap().moments.mean(std::f64::consts::FRAC_PI_2)
    };
    let sim = (run(h) - run(-h)) / (2.0 * h);
    let ana = gamma_moments(&params, tau, 0.0).unwrap().slope(std::f64::consts::FRAC_PI_2).unwrap();
    (sim, ana)
}

#[test]
fn gamma_slope_matches_product_space_lindblad() {
    let disp = SystemParams::new(4, 1.0, 2.0, 0.0, 0.1, 2.0, ProtocolVariant::Dispersive).unwrap();
    let res = SystemParams::with_chi(4, 2.0, 1.0).unwrap().with_gamma(0.1).unwrap();
    for params in [disp, res] {
        let (sim, ana) = gamma_slope_case(params, 0.1);
        assert!((sim - ana).abs() / ana.abs() < 0.05, "{:?}: {sim} vs {ana}", params.variant);
    }
}
