//! Exact joint spin-cavity dynamics used as an oracle for the analytic results.

pub mod hamiltonian;
pub mod krylov;
pub mod lindblad;
pub mod protocol;
pub mod qfi;
pub mod sparse;
pub mod state;

pub use hamiltonian::{build_hamiltonian, HamiltonianSpec, JumpRole, JumpSet};
pub use krylov::evolve_unitary;
pub use lindblad::{check_positivity, evolve_lindblad};
pub use protocol::{protocol_jumps, protocol_moments_with_slope, run_protocol, Backend, ProtocolOutcome, ProtocolSetup};
pub use qfi::{qfi_mixed, qfi_state};
pub use sparse::CsrMatrix;
pub use state::{
    coherent_fock, default_n_max, displacement, fock_operator, FockOp, JointSpace, JointState, Representation, SpinOp, SpinSpace,
};

/// Default memory cap for a single propagation.
pub const DEFAULT_MAX_BYTES: u64 = 4 << 30;

/// Integration tolerance, truncation guard and memory cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub tol: f64,
    pub leakage_bound: f64,
    pub max_bytes: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { tol: 1e-9, leakage_bound: 1e-8, max_bytes: DEFAULT_MAX_BYTES }
    }
}
