//! Quantum Fisher information of mixed and pure states.

use super::sparse::CsrMatrix;
use super::state::{JointState, Representation};
use crate::analytic::{QfiRegime, QfiResult, Validity};
use crate::error::Result;
use crate::linalg::{adjoint_matmul, eigh, matmul};
use ndarray::Array2;
use num_complex::Complex64;

/// Eigenvalues above this (relative to the largest) define the low-rank support.
pub const LOWRANK_THRESHOLD: f64 = 1e-12;

/// F_Q of ρ for the generator G, from the full spectral sum or the support-restricted form.
pub fn qfi_mixed(rho: &Array2<Complex64>, generator: &Array2<Complex64>, lowrank: bool) -> Result<QfiResult> {
    let (lam, v) = eigh(rho)?;
    let lam: Vec<f64> = lam.iter().map(|&x| x.max(0.0)).collect();
    let lmax = lam.iter().copied().fold(0.0, f64::max);
    if lowrank {
        let support: Vec<usize> = (0..lam.len()).filter(|&a| lam[a] > LOWRANK_THRESHOLD * lmax).collect();
        let vs = Array2::from_shape_fn((v.nrows(), support.len()), |(i, j)| v[[i, support[j]]]);
        let gv = matmul(generator, &vs);
        let g_ab = adjoint_matmul(&vs, &gv);
        let captured: f64 = support.iter().map(|&a| lam[a]).sum::<f64>() / lam.iter().sum::<f64>();
        let mut f = 0.0;
        for (i, &a) in support.iter().enumerate() {
            // ⟨a|G²|a⟩ = ‖G|a⟩‖²
            let g2: f64 = gv.column(i).iter().map(|z| z.norm_sqr()).sum();
            let inside: f64 = (0..support.len()).map(|j| g_ab[[j, i]].norm_sqr()).sum();
            f += 4.0 * lam[a] * (g2 - inside);
            for (j, &b) in support.iter().enumerate() {
                let s = lam[a] + lam[b];
                f += 2.0 * (lam[a] - lam[b]).powi(2) / s * g_ab[[i, j]].norm_sqr();
            }
        }
        return Ok(QfiResult {
            value: f,
            regime: QfiRegime::Numerical,
            flags: vec![Validity::new("support_captures_trace", captured >= 1.0 - 1e-12)],
        });
    }
    let g_ab = adjoint_matmul(&v, &matmul(generator, &v));
    let mut f = 0.0;
    for a in 0..lam.len() {
        for b in 0..lam.len() {
            let s = lam[a] + lam[b];
            if s > 1e-14 * lmax.max(1e-300) {
                f += 2.0 * (lam[a] - lam[b]).powi(2) / s * g_ab[[a, b]].norm_sqr();
            }
        }
    }
    Ok(QfiResult { value: f, regime: QfiRegime::Numerical, flags: Vec::new() })
}

/// F_Q of a joint state: 4⟨ΔG²⟩ when pure, the spectral sum otherwise.
pub fn qfi_state(state: &JointState, generator: &CsrMatrix) -> Result<QfiResult> {
    match &state.repr {
        Representation::Pure(_) => {
            Ok(QfiResult { value: 4.0 * state.variance(generator), regime: QfiRegime::Numerical, flags: Vec::new() })
        }
        Representation::Mixed(r) => qfi_mixed(r, &generator.to_dense(), false),
    }
}
