//! Time-reversal interferometer run on the joint state.

use super::hamiltonian::{build_hamiltonian, HamiltonianSpec, JumpSet};
use super::krylov::evolve_unitary;
use super::lindblad::evolve_lindblad;
use super::state::{default_n_max, displacement, JointSpace, JointState, SpinSpace};
use super::SimConfig;
use crate::error::{Error, Result};
use crate::moments::{MomentDerivatives, MomentSet};
use crate::params::{ProtocolConfig, ProtocolVariant, SystemParams};
use crate::spin::SpinAxis;
use num_complex::Complex64;

/// Propagation backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Unitary,
    Lindblad,
}

/// Simulation choices for one protocol run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSetup {
    pub spin: SpinSpace,
    pub n_max: usize,
    pub initial_axis: SpinAxis,
    pub backend: Backend,
    pub sim: SimConfig,
}

impl ProtocolSetup {
    /// Dicke space unless spontaneous emission needs the product space; Lindblad when any rate is nonzero.
    pub fn for_params(params: &SystemParams, config: &ProtocolConfig) -> Self {
        let spin = if params.gamma > 0.0 { SpinSpace::Product(params.n) } else { SpinSpace::Dicke(params.n) };
        let backend = if params.kappa > 0.0 || params.gamma > 0.0 { Backend::Lindblad } else { Backend::Unitary };
        Self {
            spin,
            n_max: default_n_max(params.alpha + config.beta.abs()),
            initial_axis: SpinAxis::PlusX,
            backend,
            sim: SimConfig::default(),
        }
    }
}

/// Final state and its collective-spin moments.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    pub state: JointState,
    pub moments: MomentSet,
}

/// Collapse operators implied by the rates: photon loss, plus per-spin emission
/// (dispersive) or the Rabi-averaged emission set (resonant).
pub fn protocol_jumps(params: &SystemParams, space: &JointSpace) -> Result<JumpSet> {
    let j = JumpSet::default().with_photon_loss(space, params.kappa)?;
    if params.gamma == 0.0 {
        return Ok(j);
    }
    match params.variant {
        ProtocolVariant::Dispersive => j.with_spin_emission(space, params.gamma),
        ProtocolVariant::Resonant => j.with_rotated_emission(space, params.gamma),
    }
}

/// Forward (τ₁, +χ a†a S_z), displacement D(β), reverse (τ₂, −χ a†a S_z).
pub fn run_protocol(params: &SystemParams, config: &ProtocolConfig, setup: &ProtocolSetup) -> Result<ProtocolOutcome> {
    params.validate()?;
    config.validate()?;
    let space = JointSpace::new(setup.spin, setup.n_max)?;
    let chi = params.chi();
    let fwd = build_hamiltonian(&HamiltonianSpec::dispersive(chi), &space, &setup.sim)?;
    let rev = fwd.scale(Complex64::new(-1.0, 0.0));
    let jumps = protocol_jumps(params, &space)?;
    let evolve = |st: &JointState, h, t| match setup.backend {
        Backend::Unitary if !jumps.is_empty() => Err(Error::InvalidParameter("dissipative rates need the lindblad backend".into())),
        Backend::Unitary => evolve_unitary(st, h, t, &setup.sim),
        Backend::Lindblad => evolve_lindblad(st, h, &jumps, t, &setup.sim),
    };
    let init = JointState::coherent(space, setup.initial_axis, Complex64::new(params.alpha, 0.0))?;
    let init = if setup.backend == Backend::Lindblad { init.to_mixed() } else { init };
    let mut st = evolve(&init, &fwd, config.tau1)?;
    if config.beta != 0.0 {
        st.apply_fock_unitary(&displacement(space.fock_dim, Complex64::new(config.beta, 0.0))?);
        st.check_leakage(setup.sim.leakage_bound)?;
    }
    let st = evolve(&st, &rev, config.tau2)?;
    let moments = st.moments();
    Ok(ProtocolOutcome { state: st, moments })
}

/// Moments at config.beta with β-derivatives from a central difference of width 2h.
pub fn protocol_moments_with_slope(params: &SystemParams, config: &ProtocolConfig, setup: &ProtocolSetup, h: f64) -> Result<MomentSet> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be > 0".into()));
    }
    let at = |b: f64| run_protocol(params, &ProtocolConfig { beta: b, ..*config }, setup).map(|o| o.moments);
    let mut m = at(config.beta)?;
    let p = at(config.beta + h)?;
    let q = at(config.beta - h)?;
    let d = 2.0 * h;
    m.derivatives = Some(MomentDerivatives {
        splus: (p.splus - q.splus) / d,
        splus_sq: (p.splus_sq - q.splus_sq) / d,
        spm: (p.spm - q.spm) / d,
        sz: (p.sz - q.sz) / d,
    });
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::state::Representation;

    #[test]
    fn zero_displacement_reverses_exactly() {
        let params = SystemParams::with_chi(5, 2.0, 1.0).unwrap();
        let config = ProtocolConfig::symmetric(0.3, 0.0);
        let setup = ProtocolSetup::for_params(&params, &config);
        let out = run_protocol(&params, &config, &setup).unwrap();
        let init =
            JointState::coherent(JointSpace::new(setup.spin, setup.n_max).unwrap(), SpinAxis::PlusX, Complex64::new(2.0, 0.0)).unwrap();
        let Representation::Pure(v) = init.repr else { unreachable!() };
        assert!((1.0 - out.state.fidelity_with_pure(&v)).abs() < 1e-10);
    }

    #[test]
    fn unitary_backend_rejects_dissipation() {
        let params = SystemParams::with_chi(2, 1.0, 1.0).unwrap().with_kappa(0.1).unwrap();
        let config = ProtocolConfig::symmetric(0.1, 0.0);
        let setup = ProtocolSetup { backend: Backend::Unitary, ..ProtocolSetup::for_params(&params, &config) };
        assert!(matches!(run_protocol(&params, &config, &setup), Err(Error::InvalidParameter(_))));
    }
}
