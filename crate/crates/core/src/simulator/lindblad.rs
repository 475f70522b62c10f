//! Lindblad master-equation propagation with adaptive Dormand-Prince stepping.

use super::hamiltonian::JumpSet;
use super::sparse::CsrMatrix;
use super::state::{JointState, Representation};
use super::SimConfig;
use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Precomputed Liouvillian pieces.
pub struct Liouvillian {
    h_eff: CsrMatrix,
    jumps: Vec<CsrMatrix>,
}

impl Liouvillian {
    pub fn new(h: &CsrMatrix, jumps: &JumpSet) -> Self {
        Self { h_eff: jumps.effective_hamiltonian(h), jumps: jumps.ops.iter().map(|(_, l)| l.clone()).collect() }
    }

    /// K + K† + Σ LρL† with K = −iH_eff ρ.
    pub fn apply(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let k = self.h_eff.mul_dense(rho).mapv(|z| Complex64::new(z.im, -z.re));
        let mut out = &k + &k.t().mapv(|z| z.conj());
        for l in &self.jumps {
            let lr = l.mul_dense(rho);
            let lrl = l.mul_dense(&lr.t().mapv(|z| z.conj()).to_owned());
            out += &lrl;
        }
        out
    }

    fn scale(&self) -> f64 {
        self.h_eff.norm_inf() + self.jumps.iter().map(|l| l.norm_inf().powi(2)).sum::<f64>()
    }
}

fn symmetrize(rho: &mut Array2<Complex64>) {
    let n = rho.nrows();
    for i in 0..n {
        rho[[i, i]].im = 0.0;
        for j in i + 1..n {
            let z = 0.5 * (rho[[i, j]] + rho[[j, i]].conj());
            rho[[i, j]] = z;
            rho[[j, i]] = z.conj();
        }
    }
}

/// Integrates dρ/dt = −i[H, ρ] + Σ(LρL† − ½{L†L, ρ}) over time t.
pub fn evolve_lindblad(state: &JointState, h: &CsrMatrix, jumps: &JumpSet, t: f64, cfg: &SimConfig) -> Result<JointState> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("evolution time must be finite and >= 0, got {t}")));
    }
    let needed = state.space.bytes_mixed();
    if needed > cfg.max_bytes {
        return Err(Error::MemoryCap { needed, cap: cfg.max_bytes });
    }
    let mut out = state.to_mixed();
    if t == 0.0 {
        return Ok(out);
    }
    let Representation::Mixed(mut rho) = out.repr else { unreachable!() };
    let liou = Liouvillian::new(h, jumps);
    let tol = cfg.tol;
    let mut dt = (0.05 / liou.scale().max(1e-300)).min(t);
    let mut done = 0.0;
    let mut k1 = liou.apply(&rho);
    while done < t {
        dt = dt.min(t - done);
        let mut ks: Vec<Array2<Complex64>> = vec![k1.clone()];
        for row in &A[1..7] {
            let mut y = rho.clone();
            for (j, k) in ks.iter().enumerate() {
                if row[j] != 0.0 {
                    y.scaled_add(Complex64::new(row[j] * dt, 0.0), k);
                }
            }
            ks.push(liou.apply(&y));
        }
        let mut next = rho.clone();
        for (j, k) in ks.iter().take(6).enumerate() {
            if A[6][j] != 0.0 {
                next.scaled_add(Complex64::new(A[6][j] * dt, 0.0), k);
            }
        }
        let mut err = 0.0f64;
        for idx in 0..rho.len() {
            let (i, j) = (idx / rho.ncols(), idx % rho.ncols());
            let e: Complex64 = (0..7).map(|s| ks[s][[i, j]] * E[s]).sum::<Complex64>() * dt;
            let sc = tol * (1.0 + rho[[i, j]].norm().max(next[[i, j]].norm()));
            err = err.max(e.norm() / sc);
        }
        if err <= 1.0 {
            done += dt;
            symmetrize(&mut next);
            rho = next;
            k1 = liou.apply(&rho);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        dt *= factor;
        if t - done > 1e-14 * t && dt < 1e-12 * t {
            return Err(Error::StepCollapse(dt));
        }
        if t - done <= 1e-14 * t {
            done = t;
        }
    }
    out.repr = Representation::Mixed(rho);
    let tr = out.norm();
    if (tr - 1.0).abs() > 1e-9 * (1.0 + state.norm()) && (state.norm() - 1.0).abs() < 1e-12 {
        return Err(Error::Numeric(format!("trace drifted to {tr}")));
    }
    out.check_leakage(cfg.leakage_bound)?;
    Ok(out)
}

/// Fails if ρ has an eigenvalue below −bound.
pub fn check_positivity(state: &JointState, bound: f64) -> Result<f64> {
    let m = state.min_eigenvalue()?;
    if m < -bound {
        return Err(Error::Positivity(m));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::state::{coherent_fock, JointSpace, SpinSpace};
    use crate::spin::SpinAxis;
    use ndarray::Array1;

    #[test]
    fn decaying_coherent_state_stays_coherent() {
        let space = JointSpace::new(SpinSpace::Dicke(1), 30).unwrap();
        let cfg = SimConfig::default();
        let alpha = Complex64::new(2.0, 1.0);
        let kappa = 0.8;
        let t = 1.3;
        let st = JointState::coherent(space, SpinAxis::MinusZ, alpha).unwrap();
        let h = CsrMatrix::zeros(space.dim(), space.dim());
        let jumps = JumpSet::default().with_photon_loss(&space, kappa).unwrap();
        let out = evolve_lindblad(&st, &h, &jumps, t, &cfg).unwrap();
        let want = JointState::product(
            space,
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            &coherent_fock(alpha * (-kappa * t / 2.0).exp(), 31),
        )
        .unwrap();
        let Representation::Pure(w) = want.repr else { unreachable!() };
        let f = out.fidelity_with_pure(&Array1::from(w.to_vec()));
        assert!((1.0 - f).abs() < 1e-9, "{f}");
        assert!((out.norm() - 1.0).abs() < 1e-9);
        assert!(check_positivity(&out, 1e-8).is_ok());
    }
}
